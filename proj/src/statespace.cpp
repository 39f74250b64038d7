#include "nmzi/statespace.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nmzi {

namespace {

constexpr std::array<std::array<PathLabel, kPathsPerStage>, 5> kStageTable{{
    {PathLabel::In, PathLabel::InBar, PathLabel::G},
    {PathLabel::E, PathLabel::G, PathLabel::C},
    {PathLabel::A, PathLabel::B, PathLabel::C},
    {PathLabel::F, PathLabel::Fbar, PathLabel::C},
    {PathLabel::D, PathLabel::Dbar, PathLabel::Fbar},
}};

template <class Enum, std::size_t N>
std::optional<Enum> parse_by_name(std::string_view s, const std::array<Enum, N>& all) {
  for (Enum e : all) {
    if (to_string(e) == s) return e;
  }
  return std::nullopt;
}

}  // namespace

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::Chi0: return "chi0";
    case Mode::ChiPerpX: return "chiPerpX";
    case Mode::ChiPerpY: return "chiPerpY";
  }
  return "?";
}

std::string_view to_string(Axis a) { return a == Axis::X ? "x" : "y"; }

std::string_view to_string(Stage s) {
  static constexpr std::array<std::string_view, 5> names{"T0", "T1", "T2", "T3", "T4"};
  return names[static_cast<int>(s)];
}

std::string_view to_string(PathLabel p) {
  switch (p) {
    case PathLabel::In: return "In";
    case PathLabel::InBar: return "InBar";
    case PathLabel::E: return "E";
    case PathLabel::G: return "G";
    case PathLabel::C: return "C";
    case PathLabel::A: return "A";
    case PathLabel::B: return "B";
    case PathLabel::F: return "F";
    case PathLabel::Fbar: return "Fbar";
    case PathLabel::D: return "D";
    case PathLabel::Dbar: return "Dbar";
  }
  return "?";
}

std::optional<Mode> parse_mode(std::string_view s) { return parse_by_name(s, ModeBasis::labels); }

std::optional<Axis> parse_axis(std::string_view s) {
  return parse_by_name(s, std::array<Axis, 2>{Axis::X, Axis::Y});
}

std::optional<Stage> parse_stage(std::string_view s) { return parse_by_name(s, kAllStages); }

std::optional<PathLabel> parse_path(std::string_view s) { return parse_by_name(s, kAllPaths); }

std::span<const PathLabel, kPathsPerStage> stage_paths(Stage s) {
  return kStageTable[static_cast<int>(s)];
}

std::optional<int> path_slot(Stage s, PathLabel p) {
  const auto& row = kStageTable[static_cast<int>(s)];
  for (int i = 0; i < kPathsPerStage; ++i) {
    if (row[i] == p) return i;
  }
  return std::nullopt;
}

bool path_valid(Stage s, PathLabel p) { return path_slot(s, p).has_value(); }

int require_slot(Stage s, PathLabel p) {
  if (auto slot = path_slot(s, p)) return *slot;
  throw std::invalid_argument("path " + std::string(to_string(p)) + " is not present at stage " +
                              std::string(to_string(s)));
}

ModeBasis::ModeBasis(double delta) : delta_(delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw std::invalid_argument("mode basis delta must be a positive finite number");
  }
}

double ModeBasis::momentum_matrix_element() const { return delta_ / std::sqrt(2.0); }

State::State(Stage stage, const StateVector& amps) : stage_(stage), amps_(amps) {
  if (!amps_.allFinite()) throw std::invalid_argument("state has non-finite amplitudes");
  const double n2 = amps_.squaredNorm();
  if (n2 > 1.0 + kNormSlack) {
    throw std::invalid_argument("state norm^2 " + std::to_string(n2) + " exceeds 1");
  }
}

State State::zero(Stage stage) { return State(stage, StateVector::Zero()); }

cplx State::amplitude(PathLabel path, Mode mode) const {
  return amps_(basis_index(require_slot(stage_, path), mode));
}

ModeAmplitudes State::modes_on(PathLabel path) const {
  const int slot = require_slot(stage_, path);
  return {amps_(basis_index(slot, Mode::Chi0)), amps_(basis_index(slot, Mode::ChiPerpX)),
          amps_(basis_index(slot, Mode::ChiPerpY))};
}

double State::path_probability(PathLabel path) const {
  double p = 0.0;
  for (cplx a : modes_on(path)) p += std::norm(a);
  return p;
}

State state_new(Stage stage, std::span<const Entry> entries) {
  StateVector v = StateVector::Zero();
  for (const Entry& e : entries) v(basis_index(require_slot(stage, e.path), e.mode)) += e.amplitude;
  return State(stage, v);
}

State state_new(Stage stage, std::initializer_list<Entry> entries) {
  return state_new(stage, std::span<const Entry>(entries.begin(), entries.size()));
}

cplx inner(const State& bra, const State& ket) {
  if (bra.stage() != ket.stage()) {
    throw std::invalid_argument("inner product across stages " + std::string(to_string(bra.stage())) +
                                " and " + std::string(to_string(ket.stage())));
  }
  return bra.amplitudes().dot(ket.amplitudes());  // Eigen's dot conjugates the left operand
}

State normalized(const State& s) {
  const double n = s.amplitudes().norm();
  if (n == 0.0) throw std::domain_error("cannot normalise the zero state");
  return State(s.stage(), s.amplitudes() / n);
}

bool is_unitary(const StageMatrix& m, double tol) {
  const StageMatrix gram = m * m.adjoint();
  return (gram - StageMatrix::Identity()).cwiseAbs().maxCoeff() <= tol;
}

OperatorMatrix::OperatorMatrix(Stage stage, const StageMatrix& m, bool unitary)
    : stage_(stage), m_(m), unitary_(unitary) {
  if (unitary_ && !is_unitary(m_)) throw std::invalid_argument("operator flagged unitary is not unitary");
}

State OperatorMatrix::apply(const State& s) const {
  if (s.stage() != stage_) throw std::invalid_argument("operator applied to a state of another stage");
  return State(stage_, m_ * s.amplitudes());
}

OperatorMatrix OperatorMatrix::operator*(const OperatorMatrix& rhs) const {
  if (rhs.stage_ != stage_) throw std::invalid_argument("operator product across stages");
  return OperatorMatrix(stage_, m_ * rhs.m_, unitary_ && rhs.unitary_);
}

namespace {

StageMatrix projector_matrix(Stage stage, PathLabel path) {
  const int slot = require_slot(stage, path);
  StageMatrix m = StageMatrix::Zero();
  for (Mode mode : ModeBasis::labels) m(basis_index(slot, mode), basis_index(slot, mode)) = 1.0;
  return m;
}

StageMatrix flip_matrix(Axis axis) {
  StageMatrix m = StageMatrix::Zero();
  const Mode perp = perp_mode(axis);
  const Mode spectator = axis == Axis::X ? Mode::ChiPerpY : Mode::ChiPerpX;
  for (int slot = 0; slot < kPathsPerStage; ++slot) {
    m(basis_index(slot, Mode::Chi0), basis_index(slot, perp)) = 1.0;
    m(basis_index(slot, perp), basis_index(slot, Mode::Chi0)) = 1.0;
    m(basis_index(slot, spectator), basis_index(slot, spectator)) = 1.0;
  }
  return m;
}

}  // namespace

OperatorMatrix build_operator(const OperatorKind& kind, Stage stage) {
  struct Visitor {
    Stage stage;
    OperatorMatrix operator()(const Projector& p) const {
      return OperatorMatrix(stage, projector_matrix(stage, p.path), false);
    }
    OperatorMatrix operator()(const ModeFlip& f) const {
      return OperatorMatrix(stage, flip_matrix(f.axis), true);
    }
    OperatorMatrix operator()(const FlipProjector& fp) const {
      return OperatorMatrix(stage, flip_matrix(fp.axis) * projector_matrix(stage, fp.path), false);
    }
  };
  return std::visit(Visitor{stage}, kind);
}

double transverse_momentum_shift(cplx alpha0, cplx alpha_perp, const ModeBasis& basis) {
  if (!std::isfinite(alpha0.real()) || !std::isfinite(alpha0.imag()) ||
      !std::isfinite(alpha_perp.real()) || !std::isfinite(alpha_perp.imag())) {
    throw std::invalid_argument("non-finite mode amplitude");
  }
  return 2.0 * (std::conj(alpha0) * alpha_perp).real() * basis.momentum_matrix_element();
}

}  // namespace nmzi
