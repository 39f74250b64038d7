#include "doctest.h"

#include "nmzi/network.hpp"

#include <numbers>
#include <random>

using namespace nmzi;

namespace {

const double s3 = std::sqrt(3.0);
const cplx I(0, 1);

double max_diff(const State& a, const State& b) {
  REQUIRE(a.stage() == b.stage());
  return (a.amplitudes() - b.amplitudes()).cwiseAbs().maxCoeff();
}

NetworkConfig tilt_e(double eps, bool prism = false) {
  NetworkConfig c;
  c.dove_prism = prism;
  if (eps != 0.0) c.tilts.push_back({PathLabel::E, eps, Axis::X});
  return c;
}

// Expected states written out from the printed kets.
State t1_expected(double eps) {
  const double n = std::sqrt(2.0 / (3 * (1 + eps * eps)));
  return state_new(Stage::T1, {{PathLabel::E, Mode::Chi0, n},
                               {PathLabel::E, Mode::ChiPerpX, n * eps},
                               {PathLabel::C, Mode::Chi0, 1 / s3}});
}

State t2_expected(double eps, bool prism) {
  const double n = 1 / std::sqrt(3 * (1 + eps * eps));
  const cplx b_perp = prism ? -I : I;
  return state_new(Stage::T2, {{PathLabel::A, Mode::Chi0, n},
                               {PathLabel::B, Mode::Chi0, I * n},
                               {PathLabel::A, Mode::ChiPerpX, n * eps},
                               {PathLabel::B, Mode::ChiPerpX, b_perp * n * eps},
                               {PathLabel::C, Mode::Chi0, 1 / s3}});
}

NetworkConfig random_config(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-0.1, 0.1);
  std::bernoulli_distribution coin;
  NetworkConfig c;
  c.dove_prism = coin(rng);
  c.prism_arm = coin(rng) ? PathLabel::A : PathLabel::B;
  for (PathLabel m : {PathLabel::A, PathLabel::B, PathLabel::C, PathLabel::E, PathLabel::F}) {
    c.tilts.push_back({m, u(rng), coin(rng) ? Axis::X : Axis::Y});
  }
  return c;
}

}  // namespace

TEST_CASE("forward snapshots at T1 and T2 match the printed states") {
  for (double eps : {0.0, 0.01, 0.1, -0.3}) {
    for (bool prism : {false, true}) {
      const Network net = Network::build(tilt_e(eps, prism));
      CHECK(max_diff(net.forward(Stage::T1), t1_expected(eps)) < 1e-15);
      CHECK(max_diff(net.forward(Stage::T2), t2_expected(eps, prism)) < 1e-15);
    }
  }
}

TEST_CASE("backward snapshots without prism are tilt independent") {
  const State t2 = state_new(Stage::T2, {{PathLabel::A, Mode::Chi0, 1 / s3},
                                         {PathLabel::B, Mode::Chi0, -I / s3},
                                         {PathLabel::C, Mode::Chi0, 1 / s3}});
  const State t1 = state_new(Stage::T1, {{PathLabel::G, Mode::Chi0, std::sqrt(2.0) / s3},
                                         {PathLabel::C, Mode::Chi0, 1 / s3}});
  for (double eps : {0.0, 0.01, 0.1}) {
    const Network net = Network::build(tilt_e(eps));
    CHECK(max_diff(net.backward(Stage::T2), t2) < 1e-15);
    CHECK(max_diff(net.backward(Stage::T1), t1) < 1e-15);
  }
}

TEST_CASE("inner products are conserved along the chain") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    const Network net = Network::build(random_config(rng));
    const cplx ref = inner(net.backward(Stage::T4), net.forward(Stage::T4));
    for (Stage s : kAllStages) CHECK(std::abs(inner(net.backward(s), net.forward(s)) - ref) < 1e-14);
  }
}

TEST_CASE("untilted backward state at T1 overlaps the forward one by 1/3") {
  const Network net = Network::build({});
  CHECK(std::abs(inner(net.backward(Stage::T1), net.forward(Stage::T1)) - 1.0 / 3.0) < 1e-15);
}

TEST_CASE("exact backward state at T1 with prism and tilted E") {
  // Hand propagation: D mode (chi0 + 2 s chiPerp)/N, N^2 = 1 + 4 s^2.
  for (double eps : {0.005, 0.05, 0.2}) {
    const double s = eps / std::sqrt(1 + eps * eps);
    const double N = std::sqrt(1 + 4 * s * s);
    const State expected = state_new(Stage::T1, {{PathLabel::G, Mode::Chi0, std::sqrt(2.0) / (s3 * N)},
                                                 {PathLabel::C, Mode::Chi0, 1 / (s3 * N)},
                                                 {PathLabel::C, Mode::ChiPerpX, 2 * s / (s3 * N)},
                                                 {PathLabel::E, Mode::ChiPerpX, 4 * s / (std::sqrt(6.0) * N)}});
    CHECK(max_diff(Network::build(tilt_e(eps, true)).backward(Stage::T1), expected) < 1e-15);
    CHECK(max_diff(closed_form::backward_t1_prism(eps, 2.0), expected) < 3 * eps * eps);
  }
}

TEST_CASE("unitarity: total probability is one at every stage") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    const Network net = Network::build(random_config(rng));
    for (Stage s : kAllStages) CHECK(std::abs(net.forward(s).norm_squared() - 1.0) < 1e-12);
  }
}

TEST_CASE("tuned interferometer: no light toward F, P(D) = 1/9") {
  for (bool prism : {false, true}) {
    for (PathLabel arm : {PathLabel::A, PathLabel::B}) {
      NetworkConfig c;
      c.dove_prism = prism;
      c.prism_arm = arm;
      const Network net = Network::build(c);
      CHECK(net.forward(Stage::T3).path_probability(PathLabel::F) <= 1e-24);
      CHECK(std::abs(net.forward(Stage::T4).path_probability(PathLabel::D) - 1.0 / 9.0) < 1e-12);
      const TuneReport r = tune_check(net);
      CHECK(r.f_leak <= 1e-24);
      CHECK(std::abs(r.p_d - 1.0 / 9.0) < 1e-12);
      CHECK(r.snapshots_ok);
    }
  }
}

TEST_CASE("tune_check ignores the configured tilts") {
  const TuneReport r = tune_check(Network::build(tilt_e(0.2, true)));
  CHECK(r.f_leak <= 1e-24);
  CHECK(r.snapshots_ok);
}

TEST_CASE("detuned inner phase leaks into F") {
  NetworkConfig c;
  c.inner_phase = std::numbers::pi / 2;
  const TuneReport r = tune_check(Network::build(c));
  CHECK(r.f_leak > 0.1);
  CHECK_FALSE(r.snapshots_ok);
}

TEST_CASE("configuration validation") {
  NetworkConfig dup;
  dup.tilts = {{PathLabel::E, 0.1, Axis::X}, {PathLabel::E, 0.2, Axis::Y}};
  CHECK_THROWS_AS(Network::build(dup), std::invalid_argument);
  NetworkConfig big;
  big.tilts = {{PathLabel::A, 0.6, Axis::X}};
  CHECK_THROWS_AS(Network::build(big), std::invalid_argument);
  big.epsilon_limit = 0.9;
  CHECK_NOTHROW(Network::build(big));
  NetworkConfig arm;
  arm.prism_arm = PathLabel::C;
  CHECK_THROWS_AS(Network::build(arm), std::invalid_argument);
  CHECK(tilt_e(0.3).tilt_of(PathLabel::E) == 0.3);
  CHECK(tilt_e(0.3).tilt_of(PathLabel::A) == 0.0);
}

TEST_CASE("postselect normalises the port and rejects an empty one") {
  const Network net = Network::build({});
  const State d = postselect(net.forward(Stage::T4), PathLabel::D);
  CHECK(std::abs(d.amplitude(PathLabel::D, Mode::Chi0) - 1.0) < 1e-15);
  CHECK(d.path_probability(PathLabel::Dbar) == 0.0);
  CHECK_THROWS_AS(postselect(State::zero(Stage::T4), PathLabel::D), std::domain_error);
}

TEST_CASE("evolve_backward undoes forward propagation") {
  std::mt19937_64 rng(9);
  const Network net = Network::build(random_config(rng));
  const State back = net.evolve_backward(net.forward(Stage::T4), Stage::T0);
  CHECK(max_diff(back, source_state()) < 1e-14);
}
