#include "nmzi/elements.hpp"

#include <cmath>
#include <stdexcept>

namespace nmzi {

namespace {

using namespace std::complex_literals;

void require_stage(const State& s, Stage expected, const std::string& name) {
  if (s.stage() != expected) {
    throw std::invalid_argument("element " + name + " expects a state at " +
                                std::string(to_string(expected)) + ", got " +
                                std::string(to_string(s.stage())));
  }
}

PathLabel spectator_path(Stage stage, PathLabel a, PathLabel b) {
  for (PathLabel p : stage_paths(stage)) {
    if (p != a && p != b) return p;
  }
  throw std::invalid_argument("splitter ports must be two distinct paths");
}

/// Acts on a single path of one stage: mode block `block` on that path, identity elsewhere.
Element single_path_element(std::string name, Stage stage, PathLabel path,
                            const Eigen::Matrix<cplx, kModes, kModes>& block) {
  const int slot = require_slot(stage, path);
  StageMatrix m = StageMatrix::Identity();
  m.block<kModes, kModes>(slot * kModes, slot * kModes) = block;
  return Element{std::move(name), stage, stage, m};
}

}  // namespace

State Element::apply(const State& s) const {
  require_stage(s, stage_in, name);
  return State(stage_out, matrix * s.amplitudes());
}

State Element::apply_adjoint(const State& s) const {
  require_stage(s, stage_out, name);
  return State(stage_in, matrix.adjoint() * s.amplitudes());
}

Element beam_splitter(PortPair in, PortPair out, double transmission, double out_phase,
                      double in_phase) {
  if (!(transmission > 0.0 && transmission < 1.0)) {
    throw std::invalid_argument("splitter transmission amplitude must lie in (0, 1)");
  }
  const int i0 = require_slot(in.stage, in.first);
  const int i1 = require_slot(in.stage, in.second);
  const int o0 = require_slot(out.stage, out.first);
  const int o1 = require_slot(out.stage, out.second);
  const PathLabel pass_in = spectator_path(in.stage, in.first, in.second);
  const PathLabel pass_out = spectator_path(out.stage, out.first, out.second);
  if (pass_in != pass_out) {
    throw std::invalid_argument("splitter leaves unmatched spectator paths " +
                                std::string(to_string(pass_in)) + " / " +
                                std::string(to_string(pass_out)));
  }

  const double t = transmission;
  const double r = std::sqrt(1.0 - t * t);
  const cplx po = std::exp(1i * out_phase);
  const cplx pi = std::exp(1i * in_phase);
  // [out_row][in_col]
  const cplx b[2][2] = {{t, r * pi}, {r * po, -t * po * pi}};
  const int in_slot[2] = {i0, i1};
  const int out_slot[2] = {o0, o1};

  StageMatrix m = StageMatrix::Zero();
  for (Mode mode : ModeBasis::labels) {
    for (int row = 0; row < 2; ++row) {
      for (int col = 0; col < 2; ++col) {
        m(basis_index(out_slot[row], mode), basis_index(in_slot[col], mode)) = b[row][col];
      }
    }
    m(basis_index(require_slot(out.stage, pass_out), mode),
      basis_index(require_slot(in.stage, pass_in), mode)) = 1.0;
  }

  std::string name = "BS(" + std::string(to_string(in.first)) + "," + std::string(to_string(in.second)) +
                     "->" + std::string(to_string(out.first)) + "," +
                     std::string(to_string(out.second)) + ")";
  return Element{std::move(name), in.stage, out.stage, m};
}

bool is_mirror(PathLabel p) {
  switch (p) {
    case PathLabel::A:
    case PathLabel::B:
    case PathLabel::C:
    case PathLabel::E:
    case PathLabel::F: return true;
    default: return false;
  }
}

void validate_tilt(const TiltSetting& tilt, double limit) {
  if (!is_mirror(tilt.mirror)) {
    throw std::invalid_argument("no tiltable mirror on path " + std::string(to_string(tilt.mirror)));
  }
  if (!std::isfinite(tilt.epsilon) || std::abs(tilt.epsilon) >= limit) {
    throw std::invalid_argument("tilt epsilon " + std::to_string(tilt.epsilon) + " outside (-" +
                                std::to_string(limit) + ", " + std::to_string(limit) + ")");
  }
}

Stage mirror_stage(PathLabel mirror) {
  switch (mirror) {
    case PathLabel::E:
    case PathLabel::C: return Stage::T1;
    case PathLabel::A:
    case PathLabel::B: return Stage::T2;
    case PathLabel::F: return Stage::T3;
    default: throw std::invalid_argument("no tiltable mirror on path " + std::string(to_string(mirror)));
  }
}

Element mirror(const TiltSetting& tilt) {
  const Stage stage = mirror_stage(tilt.mirror);
  const double theta = std::atan(tilt.epsilon);
  const int perp = static_cast<int>(perp_mode(tilt.axis));
  Eigen::Matrix<cplx, kModes, kModes> rot = Eigen::Matrix<cplx, kModes, kModes>::Identity();
  rot(0, 0) = std::cos(theta);
  rot(perp, perp) = std::cos(theta);
  rot(perp, 0) = std::sin(theta);
  rot(0, perp) = -std::sin(theta);
  return single_path_element("mirror " + std::string(to_string(tilt.mirror)), stage, tilt.mirror, rot);
}

Element dove_prism(PathLabel path) {
  if (path != PathLabel::A && path != PathLabel::B) {
    throw std::invalid_argument("Dove prism must sit in an inner arm (A or B)");
  }
  Eigen::Matrix<cplx, kModes, kModes> flip = Eigen::Matrix<cplx, kModes, kModes>::Identity();
  flip(1, 1) = -1.0;
  return single_path_element("dove " + std::string(to_string(path)), Stage::T2, path, flip);
}

Stage home_stage(PathLabel path) {
  switch (path) {
    case PathLabel::In:
    case PathLabel::InBar: return Stage::T0;
    case PathLabel::E:
    case PathLabel::G:
    case PathLabel::C: return Stage::T1;
    case PathLabel::A:
    case PathLabel::B: return Stage::T2;
    case PathLabel::F:
    case PathLabel::Fbar: return Stage::T3;
    case PathLabel::D:
    case PathLabel::Dbar: return Stage::T4;
  }
  throw std::invalid_argument("unknown path");
}

Element phase_shift(Stage stage, PathLabel path, double phi) {
  const Eigen::Matrix<cplx, kModes, kModes> block =
      std::exp(1i * phi) * Eigen::Matrix<cplx, kModes, kModes>::Identity();
  return single_path_element("phase " + std::string(to_string(path)), stage, path, block);
}

Element phase_shift(PathLabel path, double phi) { return phase_shift(home_stage(path), path, phi); }

}  // namespace nmzi
