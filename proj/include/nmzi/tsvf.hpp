#pragma once

// Two-state-vector quantities: weak values between the forward state and the
// backward (post-selected) state at a given stage.

#include "nmzi/network.hpp"

#include <stdexcept>
#include <vector>

namespace nmzi {

/// Forward and backward states are (numerically) orthogonal, so no weak value exists.
class OrthogonalPostSelection : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

inline constexpr double kWeakValueDenominatorFloor = 1e-14;

/// <bwd|op|fwd> / <bwd|fwd>. `bwd` holds the ket |Phi>.
cplx weak_value(const OperatorMatrix& op, const State& fwd, const State& bwd);

struct PathWeakValues {
  PathLabel path;
  cplx projector;       // (P_path)_w
  cplx flip_projector;  // (O P_path)_w
};

struct WeakValueReport {
  Stage stage = Stage::T1;
  double epsilon = 0.0;  // largest |tilt| in the configuration
  bool dove = false;
  Axis flip_axis = Axis::X;
  cplx denominator;  // <Phi|Psi> at the stage
  std::vector<PathWeakValues> values;
  State forward = State::zero(Stage::T1);
  State backward = State::zero(Stage::T1);

  const PathWeakValues& at(PathLabel path) const;
};

/// Arms tabulated at a stage: its paths minus the dump ports InBar, Fbar, Dbar.
std::vector<PathLabel> presence_arms(Stage stage);

WeakValueReport presence_report(const NetworkConfig& config, Stage stage, Axis flip_axis = Axis::X);

enum class Presence { Full, Secondary, Absent };

/// Reporting label only: |wv| >= 0.5 is full presence, >= max(eps^2 / 10, 1e-12)
/// secondary, anything smaller absent.
Presence classify_presence(cplx weak_value, double epsilon);
std::string_view to_string(Presence p);

}  // namespace nmzi
