#include "nmzi/tsvf.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace nmzi {

cplx weak_value(const OperatorMatrix& op, const State& fwd, const State& bwd) {
  if (fwd.stage() != bwd.stage() || op.stage() != fwd.stage()) {
    throw std::invalid_argument("weak value needs operator and states at one stage");
  }
  const cplx denom = inner(bwd, fwd);
  if (std::abs(denom) <= kWeakValueDenominatorFloor) {
    throw OrthogonalPostSelection("orthogonal post-selection: |<Phi|Psi>| = " +
                                  std::to_string(std::abs(denom)));
  }
  return inner(bwd, op.apply(fwd)) / denom;
}

const PathWeakValues& WeakValueReport::at(PathLabel path) const {
  for (const PathWeakValues& v : values) {
    if (v.path == path) return v;
  }
  throw std::out_of_range("no weak value for path " + std::string(to_string(path)));
}

std::vector<PathLabel> presence_arms(Stage stage) {
  std::vector<PathLabel> arms;
  for (PathLabel p : stage_paths(stage)) {
    if (p != PathLabel::InBar && p != PathLabel::Fbar && p != PathLabel::Dbar) arms.push_back(p);
  }
  return arms;
}

WeakValueReport presence_report(const NetworkConfig& config, Stage stage, Axis flip_axis) {
  const Network net = Network::build(config);
  WeakValueReport report;
  report.stage = stage;
  report.dove = config.dove_prism;
  report.flip_axis = flip_axis;
  for (const TiltSetting& t : config.tilts) report.epsilon = std::max(report.epsilon, std::abs(t.epsilon));
  report.forward = net.forward(stage);
  report.backward = net.backward(stage);
  report.denominator = inner(report.backward, report.forward);

  for (PathLabel path : presence_arms(stage)) {
    report.values.push_back(
        {path, weak_value(build_operator(Projector{path}, stage), report.forward, report.backward),
         weak_value(build_operator(FlipProjector{flip_axis, path}, stage), report.forward,
                    report.backward)});
  }
  return report;
}

Presence classify_presence(cplx wv, double epsilon) {
  const double mag = std::abs(wv);
  if (mag >= 0.5) return Presence::Full;
  if (mag >= std::max(0.1 * epsilon * epsilon, 1e-12)) return Presence::Secondary;
  return Presence::Absent;
}

std::string_view to_string(Presence p) {
  switch (p) {
    case Presence::Full: return "full";
    case Presence::Secondary: return "secondary";
    case Presence::Absent: return "absent";
  }
  return "?";
}

}  // namespace nmzi
