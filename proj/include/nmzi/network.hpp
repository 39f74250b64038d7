#pragma once

// The nested Mach-Zehnder interferometer: element chain T0 -> T4, forward
// propagation of the source photon and backward propagation of the
// post-selected state.

#include "nmzi/elements.hpp"

#include <cmath>
#include <optional>
#include <vector>

namespace nmzi {

struct NetworkConfig {
  bool dove_prism = false;
  PathLabel prism_arm = PathLabel::B;
  /// Extra phase on arm B inside the inner interferometer; 0 is the tuned setting.
  double inner_phase = 0.0;
  std::vector<TiltSetting> tilts;
  double epsilon_limit = kDefaultEpsilonLimit;

  /// Throws std::invalid_argument on duplicate mirrors, bad prism arm or out-of-range tilts.
  void validate() const;

  /// Epsilon of the tilt on `mirror`, 0 if untilted.
  double tilt_of(PathLabel mirror) const;
};

/// Splitter amplitudes of the tuned interferometer.
namespace splitter {
inline const double kEntranceToE = std::sqrt(2.0 / 3.0);
inline const double kInner = 1.0 / std::sqrt(2.0);
inline const double kExitFromF = std::sqrt(2.0 / 3.0);
}  // namespace splitter

class Network {
 public:
  static Network build(const NetworkConfig& config);

  const NetworkConfig& config() const { return config_; }
  const std::vector<Element>& elements() const { return elements_; }

  /// Source photon (In, chi0, 1) propagated through every element whose output
  /// stage is at or before `upto`.
  State forward(Stage upto) const;

  /// Post-selection on port D with the exact forward mode, evolved back by
  /// element adjoints to `downto`. Throws std::domain_error if nothing reaches D.
  State backward(Stage downto) const;

  /// Evolves an arbitrary T4 state back to `downto`.
  State evolve_backward(const State& at_t4, Stage downto) const;

 private:
  NetworkConfig config_;
  std::vector<Element> elements_;
};

State source_state();

/// Projects `s` onto all modes of `port` and normalises. Throws std::domain_error
/// when the port amplitude vanishes (norm below 1e-14).
State postselect(const State& s, PathLabel port);

struct TuneReport {
  double f_leak = 0.0;  // |amplitude at F|^2 at T3 with all tilts removed
  double p_d = 0.0;     // detection probability at D with all tilts removed
  bool snapshots_ok = false;
};

/// Checks destructive interference toward F, P(D) = 1/9, and that the T1/T2
/// snapshots with a single E tilt of `probe_epsilon` match the closed forms.
TuneReport tune_check(const Network& net, double probe_epsilon = 0.01);

/// Closed-form states of the tuned interferometer with mirror E tilted by
/// epsilon along x. Used by tune_check and as test references.
namespace closed_form {
State forward_t1(double epsilon);
/// `prism` names the arm holding the Dove prism, if any.
State forward_t2(double epsilon, std::optional<PathLabel> prism);
/// Backward states without the prism (ket components of |Phi>).
State backward_t2();
State backward_t1();
/// First-order backward state at T1 with the prism, written with post-selected
/// mode chi0 + k eps chiPerp at D.
State backward_t1_prism(double epsilon, double k);
}  // namespace closed_form

}  // namespace nmzi
