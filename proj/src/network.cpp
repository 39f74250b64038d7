#include "nmzi/network.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

namespace nmzi {

namespace {

using namespace std::complex_literals;

constexpr double kPostselectFloor = 1e-14;
constexpr double kSnapshotTol = 1e-12;

bool states_match(const State& a, const State& b, double tol) {
  return a.stage() == b.stage() && (a.amplitudes() - b.amplitudes()).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace

void NetworkConfig::validate() const {
  if (prism_arm != PathLabel::A && prism_arm != PathLabel::B) {
    throw std::invalid_argument("prism arm must be A or B");
  }
  if (!std::isfinite(inner_phase)) throw std::invalid_argument("inner phase must be finite");
  std::set<PathLabel> seen;
  for (const TiltSetting& t : tilts) {
    validate_tilt(t, epsilon_limit);
    if (!seen.insert(t.mirror).second) {
      throw std::invalid_argument("conflicting tilts on mirror " + std::string(to_string(t.mirror)));
    }
  }
}

double NetworkConfig::tilt_of(PathLabel mirror) const {
  for (const TiltSetting& t : tilts) {
    if (t.mirror == mirror) return t.epsilon;
  }
  return 0.0;
}

Network Network::build(const NetworkConfig& config) {
  config.validate();
  Network net;
  net.config_ = config;
  auto& chain = net.elements_;

  auto add_tilt = [&](PathLabel m) {
    for (const TiltSetting& t : config.tilts) {
      if (t.mirror == m) chain.push_back(mirror(t));
    }
  };

  chain.push_back(beam_splitter({Stage::T0, PathLabel::In, PathLabel::InBar},
                                {Stage::T1, PathLabel::E, PathLabel::C}, splitter::kEntranceToE));
  add_tilt(PathLabel::E);
  add_tilt(PathLabel::C);

  chain.push_back(beam_splitter({Stage::T1, PathLabel::E, PathLabel::G},
                                {Stage::T2, PathLabel::A, PathLabel::B}, splitter::kInner,
                                std::numbers::pi / 2.0, 0.0));
  add_tilt(PathLabel::A);
  add_tilt(PathLabel::B);
  if (config.dove_prism) chain.push_back(dove_prism(config.prism_arm));
  if (config.inner_phase != 0.0) chain.push_back(phase_shift(Stage::T2, PathLabel::B, config.inner_phase));

  chain.push_back(beam_splitter({Stage::T2, PathLabel::A, PathLabel::B},
                                {Stage::T3, PathLabel::F, PathLabel::Fbar}, splitter::kInner, 0.0,
                                std::numbers::pi / 2.0));
  add_tilt(PathLabel::F);

  chain.push_back(beam_splitter({Stage::T3, PathLabel::F, PathLabel::C},
                                {Stage::T4, PathLabel::D, PathLabel::Dbar}, splitter::kExitFromF));
  return net;
}

State source_state() { return state_new(Stage::T0, {{PathLabel::In, Mode::Chi0, 1.0}}); }

State Network::forward(Stage upto) const {
  State s = source_state();
  for (const Element& e : elements_) {
    if (e.stage_out > upto) break;
    s = e.apply(s);
  }
  return s;
}

State Network::evolve_backward(const State& at_t4, Stage downto) const {
  if (at_t4.stage() != Stage::T4) throw std::invalid_argument("backward evolution starts at T4");
  State s = at_t4;
  for (auto it = elements_.rbegin(); it != elements_.rend(); ++it) {
    if (it->stage_out <= downto) break;
    s = it->apply_adjoint(s);
  }
  return s;
}

State Network::backward(Stage downto) const {
  return evolve_backward(postselect(forward(Stage::T4), PathLabel::D), downto);
}

State postselect(const State& s, PathLabel port) {
  const int slot = require_slot(s.stage(), port);
  StateVector v = StateVector::Zero();
  for (Mode m : ModeBasis::labels) v(basis_index(slot, m)) = s.amplitudes()(basis_index(slot, m));
  const double n = v.norm();
  if (n < kPostselectFloor) {
    throw std::domain_error("post-selection on " + std::string(to_string(port)) +
                            " is undefined: no amplitude reaches the port");
  }
  return State(s.stage(), v / n);
}

TuneReport tune_check(const Network& net, double probe_epsilon) {
  NetworkConfig untilted = net.config();
  untilted.tilts.clear();
  const Network flat = Network::build(untilted);

  TuneReport report;
  report.f_leak = flat.forward(Stage::T3).path_probability(PathLabel::F);
  report.p_d = flat.forward(Stage::T4).path_probability(PathLabel::D);

  NetworkConfig probe = untilted;
  probe.tilts = {{PathLabel::E, probe_epsilon, Axis::X}};
  const Network probed = Network::build(probe);
  const std::optional<PathLabel> prism =
      untilted.dove_prism ? std::optional(untilted.prism_arm) : std::nullopt;
  report.snapshots_ok =
      states_match(probed.forward(Stage::T1), closed_form::forward_t1(probe_epsilon), kSnapshotTol) &&
      states_match(probed.forward(Stage::T2), closed_form::forward_t2(probe_epsilon, prism), kSnapshotTol);
  return report;
}

namespace closed_form {

State forward_t1(double eps) {
  const double e_amp = std::sqrt(2.0 / (3.0 * (1.0 + eps * eps)));
  return state_new(Stage::T1, {{PathLabel::E, Mode::Chi0, e_amp},
                               {PathLabel::E, Mode::ChiPerpX, e_amp * eps},
                               {PathLabel::C, Mode::Chi0, 1.0 / std::sqrt(3.0)}});
}

State forward_t2(double eps, std::optional<PathLabel> prism) {
  const double n = 1.0 / std::sqrt(3.0 * (1.0 + eps * eps));
  const cplx a_perp = prism == PathLabel::A ? -1.0 : 1.0;
  const cplx b_perp = prism == PathLabel::B ? -1i : 1i;
  return state_new(Stage::T2, {{PathLabel::A, Mode::Chi0, n},
                               {PathLabel::B, Mode::Chi0, 1i * n},
                               {PathLabel::A, Mode::ChiPerpX, a_perp * n * eps},
                               {PathLabel::B, Mode::ChiPerpX, b_perp * n * eps},
                               {PathLabel::C, Mode::Chi0, 1.0 / std::sqrt(3.0)}});
}

State backward_t2() {
  const double n = 1.0 / std::sqrt(3.0);
  return state_new(Stage::T2, {{PathLabel::A, Mode::Chi0, n},
                               {PathLabel::B, Mode::Chi0, -1i * n},
                               {PathLabel::C, Mode::Chi0, n}});
}

State backward_t1() {
  const double n = 1.0 / std::sqrt(3.0);
  return state_new(Stage::T1, {{PathLabel::G, Mode::Chi0, std::sqrt(2.0) * n},
                               {PathLabel::C, Mode::Chi0, n}});
}

State backward_t1_prism(double eps, double k) {
  const double n = 1.0 / std::sqrt(3.0 * (1.0 + k * k * eps * eps));
  const double s2 = std::sqrt(2.0);
  return state_new(Stage::T1, {{PathLabel::G, Mode::Chi0, s2 * n},
                               {PathLabel::C, Mode::Chi0, n},
                               {PathLabel::C, Mode::ChiPerpX, k * eps * n},
                               {PathLabel::E, Mode::ChiPerpX, s2 * k * eps * n}});
}

}  // namespace closed_form

}  // namespace nmzi
