#pragma once

// Graph-level Bohmian routing through the nested interferometer.
//
// Trajectories of a single particle never cross, so with every stage's arms
// laid out in a fixed transverse order the particle ensemble keeps its order
// from source to detector. A port's trajectories are the bundle of quantiles
// it occupies at T4; walking back through the junction graph, the bundle sits
// in whichever connected arm holds that stretch of the ordered measure. Where
// no connected arm holds any of it, the route passes through the connected
// arm nearest in the ordering. That arm carries zero probability (F in the
// tuned interferometer) and the step is flagged.

#include "nmzi/network.hpp"

#include <array>
#include <string>
#include <vector>

namespace nmzi {

/// |amplitude|^2 summed over modes for every path at every stage.
struct ArmProbabilities {
  std::array<std::array<double, kPathsPerStage>, 5> by_stage{};

  double at(Stage stage, PathLabel path) const;
  /// Probability at the path's home stage.
  double of(PathLabel path) const;
};

ArmProbabilities arm_probabilities(const NetworkConfig& config);

/// Transverse order of the arms at each stage, D side first.
struct ArmOrdering {
  std::array<std::array<PathLabel, kPathsPerStage>, 5> stages;

  /// Transcription of the figure geometry: D, A and E share the outer side,
  /// C runs along the far side.
  static ArmOrdering figure3();

  /// Throws std::invalid_argument unless each stage lists exactly its own paths once.
  void validate() const;
  int position(Stage stage, PathLabel path) const;
};

struct Coupling {
  PathLabel from;
  PathLabel to;
  double mass = 0.0;
  bool zero_measure = false;  // continuity edge through or into an empty arm
};

struct Junction {
  std::string name;
  Stage stage_in;
  Stage stage_out;
  std::vector<PathLabel> inputs;   // in transverse order
  std::vector<PathLabel> outputs;  // in transverse order
  std::vector<Coupling> couplings;

  double in_mass(const ArmProbabilities& p) const;
  double out_mass(const ArmProbabilities& p) const;
  double coupled_mass() const;
};

struct TransportMap {
  std::vector<Junction> junctions;
};

inline constexpr double kMarginalTol = 1e-12;

/// Unique monotone coupling at every junction, plus zero-mass edges attaching
/// empty arms at their place in the order. Throws std::invalid_argument if a
/// junction's in and out masses differ by more than kMarginalTol.
TransportMap route_noncrossing(const ArmProbabilities& probs, const ArmOrdering& ordering);

/// For any two couplings (i1, o1), (i2, o2): order(i1) < order(i2) implies order(o1) <= order(o2).
bool is_noncrossing(const Junction& junction);

struct TrajectoryStep {
  Stage stage;
  PathLabel arm;
  double probability = 0.0;
  bool zero_measure = false;
};

struct Trajectory {
  PathLabel port;
  std::vector<TrajectoryStep> steps;  // T0 .. T4

  std::vector<PathLabel> arms() const;
};

/// Throws std::invalid_argument for a port absent at T4 or with zero probability.
Trajectory trajectory(PathLabel port, const ArmProbabilities& probs, const ArmOrdering& ordering,
                      const TransportMap& transport);
Trajectory trajectory(PathLabel port, const NetworkConfig& config = {},
                      const ArmOrdering& ordering = ArmOrdering::figure3());

}  // namespace nmzi
