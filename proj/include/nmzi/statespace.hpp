#pragma once

// Complex amplitude algebra over (path x transverse mode) for the nested
// Mach-Zehnder interferometer.
//
// Every stage carries exactly three path slots, so a stage-local state lives in
// a fixed 9-dimensional space: index = slot * 3 + mode.
//
//   T0  In, InBar, G      source and the two vacuum inputs
//   T1  E,  G,     C      after the entrance splitter and mirrors E/C
//   T2  A,  B,     C      inner arms
//   T3  F,  Fbar,  C      after the inner exit splitter
//   T4  D,  Dbar,  Fbar   detector ports

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <optional>
#include <span>
#include <string_view>
#include <variant>

namespace nmzi {

using cplx = std::complex<double>;

inline constexpr int kModes = 3;
inline constexpr int kPathsPerStage = 3;
inline constexpr int kStageDim = kModes * kPathsPerStage;

using StateVector = Eigen::Matrix<cplx, kStageDim, 1>;
using StageMatrix = Eigen::Matrix<cplx, kStageDim, kStageDim>;
using ModeAmplitudes = std::array<cplx, kModes>;

enum class Mode { Chi0 = 0, ChiPerpX = 1, ChiPerpY = 2 };
enum class Axis { X, Y };
enum class Stage { T0 = 0, T1, T2, T3, T4 };
enum class PathLabel { In, InBar, E, G, C, A, B, F, Fbar, D, Dbar };

inline constexpr std::array<Stage, 5> kAllStages{Stage::T0, Stage::T1, Stage::T2,
                                                 Stage::T3, Stage::T4};
inline constexpr std::array<PathLabel, 11> kAllPaths{
    PathLabel::In, PathLabel::InBar, PathLabel::E, PathLabel::G,
    PathLabel::C,  PathLabel::A,     PathLabel::B, PathLabel::F,
    PathLabel::Fbar, PathLabel::D,   PathLabel::Dbar};

std::string_view to_string(Mode m);
std::string_view to_string(Axis a);
std::string_view to_string(Stage s);
std::string_view to_string(PathLabel p);

std::optional<Mode> parse_mode(std::string_view s);
std::optional<Axis> parse_axis(std::string_view s);
std::optional<Stage> parse_stage(std::string_view s);
std::optional<PathLabel> parse_path(std::string_view s);

/// Ordered path slots of a stage.
std::span<const PathLabel, kPathsPerStage> stage_paths(Stage s);
std::optional<int> path_slot(Stage s, PathLabel p);
bool path_valid(Stage s, PathLabel p);

/// Slot of `p` at `s`; throws std::invalid_argument when the path does not exist there.
int require_slot(Stage s, PathLabel p);

constexpr int basis_index(int slot, Mode m) { return slot * kModes + static_cast<int>(m); }

/// Antisymmetric mode paired with chi0 along `axis`.
constexpr Mode perp_mode(Axis axis) { return axis == Axis::X ? Mode::ChiPerpX : Mode::ChiPerpY; }

/// Gaussian transverse-mode basis {chi0, chiPerpX, chiPerpY}. All three are unit
/// normalised; `delta` is the transverse momentum spread of chi0.
class ModeBasis {
 public:
  static constexpr std::array<Mode, kModes> labels{Mode::Chi0, Mode::ChiPerpX, Mode::ChiPerpY};

  explicit ModeBasis(double delta = 1.0);

  double delta() const { return delta_; }

  /// <chi0|p_x|chiPerpX> for the normalised Gaussian modes, equal to delta / sqrt(2).
  double momentum_matrix_element() const;

 private:
  double delta_;
};

/// Pure, possibly sub-normalised, state at one stage.
class State {
 public:
  static constexpr double kNormSlack = 1e-12;

  /// Throws std::invalid_argument if the squared norm exceeds 1 + kNormSlack or
  /// any amplitude is non-finite.
  State(Stage stage, const StateVector& amps);

  static State zero(Stage stage);

  Stage stage() const { return stage_; }
  const StateVector& amplitudes() const { return amps_; }

  cplx amplitude(PathLabel path, Mode mode) const;
  ModeAmplitudes modes_on(PathLabel path) const;

  double norm_squared() const { return amps_.squaredNorm(); }
  double path_probability(PathLabel path) const;

 private:
  Stage stage_;
  StateVector amps_;
};

struct Entry {
  PathLabel path;
  Mode mode;
  cplx amplitude;
};

/// Builds a state from explicit entries; unspecified amplitudes are zero and
/// repeated (path, mode) entries accumulate.
State state_new(Stage stage, std::span<const Entry> entries);
State state_new(Stage stage, std::initializer_list<Entry> entries);

/// <bra|ket>, conjugate-linear in `bra`.
cplx inner(const State& bra, const State& ket);

/// Rescales to unit norm; throws std::domain_error on a zero state.
State normalized(const State& s);

/// Square operator on one stage's basis.
class OperatorMatrix {
 public:
  static constexpr double kUnitaryTol = 1e-12;

  /// Throws std::invalid_argument if `unitary` is set but U U^dag deviates from
  /// identity by more than kUnitaryTol in any entry.
  OperatorMatrix(Stage stage, const StageMatrix& m, bool unitary);

  Stage stage() const { return stage_; }
  const StageMatrix& matrix() const { return m_; }
  bool unitary() const { return unitary_; }

  State apply(const State& s) const;
  OperatorMatrix operator*(const OperatorMatrix& rhs) const;

 private:
  Stage stage_;
  StageMatrix m_;
  bool unitary_;
};

bool is_unitary(const StageMatrix& m, double tol = OperatorMatrix::kUnitaryTol);

struct Projector {
  PathLabel path;
};
struct ModeFlip {
  Axis axis;
};
/// O * P_path: mode flip restricted to one path.
struct FlipProjector {
  Axis axis;
  PathLabel path;
};
using OperatorKind = std::variant<Projector, ModeFlip, FlipProjector>;

OperatorMatrix build_operator(const OperatorKind& kind, Stage stage);

/// Expected transverse momentum of alpha0 chi0 + alphaPerp chiPerpX:
/// 2 Re(conj(alpha0) alphaPerp) <chi0|p_x|chiPerpX>.
double transverse_momentum_shift(cplx alpha0, cplx alpha_perp, const ModeBasis& basis = ModeBasis{});

}  // namespace nmzi
