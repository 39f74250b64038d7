#pragma once

// Unitary optical elements acting on the stage-local (path x mode) space.

#include "nmzi/statespace.hpp"

#include <string>

namespace nmzi {

struct Element {
  std::string name;
  Stage stage_in;
  Stage stage_out;
  StageMatrix matrix;  // rows: stage_out basis, columns: stage_in basis

  State apply(const State& s) const;
  /// Backward evolution: U^dag maps a stage_out state to stage_in.
  State apply_adjoint(const State& s) const;
};

struct PortPair {
  Stage stage;
  PathLabel first;
  PathLabel second;
};

/// Two-port splitter between `in` and `out`; the stage's third path passes
/// through unchanged and must carry the same label on both sides.
///
/// The 2x2 block is diag(1, e^{i out_phase}) [[t, r], [r, -t]] diag(1, e^{i in_phase})
/// with t = transmission (first -> first) and r = sqrt(1 - t^2). Throws
/// std::invalid_argument unless 0 < t < 1.
Element beam_splitter(PortPair in, PortPair out, double transmission, double out_phase = 0.0,
                      double in_phase = 0.0);

struct TiltSetting {
  PathLabel mirror;
  double epsilon = 0.0;  // relative amplitude of the antisymmetric mode
  Axis axis = Axis::X;
};

inline constexpr double kDefaultEpsilonLimit = 0.5;

/// Throws std::invalid_argument for a non-mirror label or |epsilon| >= limit.
void validate_tilt(const TiltSetting& tilt, double limit = kDefaultEpsilonLimit);

bool is_mirror(PathLabel p);

/// Stage at which each tiltable mirror acts: E, C -> T1; A, B -> T2; F -> T3.
Stage mirror_stage(PathLabel mirror);

/// Rotation by atan(epsilon) in the {chi0, chiPerp(axis)} plane on the mirror's path.
Element mirror(const TiltSetting& tilt);

/// chiPerpX -> -chiPerpX on an inner arm (A or B) at T2.
Element dove_prism(PathLabel path);

/// e^{i phi} on every mode of `path` at `stage`.
Element phase_shift(Stage stage, PathLabel path, double phi);
/// Same, at the path's home stage (first stage where it appears; T1 for C).
Element phase_shift(PathLabel path, double phi);

Stage home_stage(PathLabel path);

}  // namespace nmzi
