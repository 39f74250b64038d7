#include "doctest.h"
#include "oracles.hpp"

#include "nmzi/tsvf.hpp"

#include <random>

using namespace nmzi;

namespace {

NetworkConfig tilt(PathLabel m, double eps, bool prism) {
  NetworkConfig c;
  c.dove_prism = prism;
  c.tilts = {{m, eps, Axis::X}};
  return c;
}

}  // namespace

TEST_CASE("untilted weak values at T2: A and B cancel, C is 1") {
  const WeakValueReport r = presence_report({}, Stage::T2);
  CHECK(std::abs(r.at(PathLabel::A).projector - 1.0) < 1e-12);
  CHECK(std::abs(r.at(PathLabel::B).projector + 1.0) < 1e-12);
  CHECK(std::abs(r.at(PathLabel::C).projector - 1.0) < 1e-12);
  CHECK(std::abs(r.denominator - 1.0 / 3.0) < 1e-15);
}

TEST_CASE("no prism: E has no presence at T1") {
  for (double eps : {0.0, 0.01, 0.1}) {
    const WeakValueReport r = presence_report(tilt(PathLabel::E, eps, false), Stage::T1);
    CHECK(std::abs(r.at(PathLabel::E).projector) < 1e-12);
    CHECK(std::abs(r.at(PathLabel::E).flip_projector) < 1e-12);
    CHECK(std::abs(r.at(PathLabel::C).projector - 1.0) < 1e-12);
  }
}

TEST_CASE("prism + tilted E: weak values match the hand-derived closed forms") {
  for (double eps : {0.005, 0.01, 0.02, 0.05, 0.2}) {
    const WeakValueReport t1 = presence_report(tilt(PathLabel::E, eps, true), Stage::T1);
    CHECK(std::abs(t1.at(PathLabel::E).projector - oracle::prism_pe(eps)) < 1e-14);
    CHECK(std::abs(t1.at(PathLabel::E).flip_projector - oracle::prism_ope(eps)) < 1e-14);
    const WeakValueReport t3 = presence_report(tilt(PathLabel::E, eps, true), Stage::T3);
    CHECK(std::abs(t3.at(PathLabel::F).flip_projector - oracle::prism_opf(eps)) < 1e-14);
  }
}

TEST_CASE("prism + tilted E: small-eps slopes") {
  const double eps = 1e-4;
  const WeakValueReport r = presence_report(tilt(PathLabel::E, eps, true), Stage::T1);
  CHECK(r.at(PathLabel::E).projector.real() / (eps * eps) == doctest::Approx(4.0).epsilon(1e-6));
  CHECK(r.at(PathLabel::E).flip_projector.real() / eps == doctest::Approx(4.0).epsilon(1e-6));
  const WeakValueReport t3 = presence_report(tilt(PathLabel::E, eps, true), Stage::T3);
  CHECK(t3.at(PathLabel::F).flip_projector.real() / eps == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("only F tilted: O P_F vanishes exactly") {
  for (double eps : {0.01, 0.1}) {
    for (bool prism : {false, true}) {
      const WeakValueReport r = presence_report(tilt(PathLabel::F, eps, prism), Stage::T3);
      CHECK(std::abs(r.at(PathLabel::F).flip_projector) <= 1e-12);
    }
  }
}

TEST_CASE("projector weak values sum to one at every stage") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-0.1, 0.1);
  for (int i = 0; i < 100; ++i) {
    NetworkConfig c;
    c.dove_prism = i % 2;
    for (PathLabel m : {PathLabel::A, PathLabel::B, PathLabel::C, PathLabel::E, PathLabel::F}) {
      c.tilts.push_back({m, u(rng), i % 3 ? Axis::X : Axis::Y});
    }
    const Network net = Network::build(c);
    for (Stage s : kAllStages) {
      const State f = net.forward(s);
      const State b = net.backward(s);
      cplx sum = 0.0;
      for (PathLabel p : stage_paths(s)) sum += weak_value(build_operator(Projector{p}, s), f, b);
      CHECK(std::abs(sum - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("weak value errors") {
  const State a = state_new(Stage::T2, {{PathLabel::A, Mode::Chi0, 1.0}});
  const State b = state_new(Stage::T2, {{PathLabel::B, Mode::Chi0, 1.0}});
  CHECK_THROWS_AS(weak_value(build_operator(Projector{PathLabel::A}, Stage::T2), a, b), OrthogonalPostSelection);
  CHECK_THROWS_AS(weak_value(build_operator(Projector{PathLabel::E}, Stage::T1), a, a), std::invalid_argument);
}

TEST_CASE("presence arms exclude dump ports") {
  CHECK(presence_arms(Stage::T3) == std::vector<PathLabel>{PathLabel::F, PathLabel::C});
  CHECK(presence_arms(Stage::T4) == std::vector<PathLabel>{PathLabel::D});
  CHECK(presence_arms(Stage::T1).size() == 3);
}

TEST_CASE("presence classification") {
  CHECK(classify_presence(1.0, 0.01) == Presence::Full);
  CHECK(classify_presence(-1.0, 0.01) == Presence::Full);
  CHECK(classify_presence(oracle::prism_ope(0.01), 0.01) == Presence::Secondary);
  CHECK(classify_presence(oracle::prism_pe(0.01), 0.01) == Presence::Secondary);
  CHECK(classify_presence(1e-17, 0.0) == Presence::Absent);
  CHECK(classify_presence(1e-7, 0.01) == Presence::Absent);
  CHECK(to_string(Presence::Secondary) == "secondary");
}

TEST_CASE("report epsilon is the largest tilt") {
  NetworkConfig c;
  c.tilts = {{PathLabel::E, 0.02, Axis::X}, {PathLabel::A, -0.05, Axis::Y}};
  const WeakValueReport r = presence_report(c, Stage::T2, Axis::Y);
  CHECK(r.epsilon == 0.05);
  CHECK(r.flip_axis == Axis::Y);
  CHECK(r.values.size() == 3);
}
