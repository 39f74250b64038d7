#include "nmzi/bohmian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nmzi {

namespace {

constexpr double kTiny = 1e-15;
constexpr double kEmptyArm = 1e-24;

struct JunctionSpec {
  const char* name;
  Stage stage_in;
  std::vector<PathLabel> inputs;
  std::vector<PathLabel> outputs;
};

/// Fixed topology of the interferometer: one splitter per stage step plus the
/// arm that passes it by.
const std::vector<JunctionSpec>& topology() {
  static const std::vector<JunctionSpec> specs{
      {"entrance", Stage::T0, {PathLabel::In, PathLabel::InBar}, {PathLabel::E, PathLabel::C}},
      {"pass G", Stage::T0, {PathLabel::G}, {PathLabel::G}},
      {"inner entrance", Stage::T1, {PathLabel::E, PathLabel::G}, {PathLabel::A, PathLabel::B}},
      {"pass C", Stage::T1, {PathLabel::C}, {PathLabel::C}},
      {"inner exit", Stage::T2, {PathLabel::A, PathLabel::B}, {PathLabel::F, PathLabel::Fbar}},
      {"pass C", Stage::T2, {PathLabel::C}, {PathLabel::C}},
      {"exit", Stage::T3, {PathLabel::F, PathLabel::C}, {PathLabel::D, PathLabel::Dbar}},
      {"pass Fbar", Stage::T3, {PathLabel::Fbar}, {PathLabel::Fbar}},
  };
  return specs;
}

Stage next(Stage s) { return static_cast<Stage>(static_cast<int>(s) + 1); }

struct Interval {
  double lo;
  double hi;
};

/// Cumulative interval of `path` in the stage's transverse order.
Interval global_interval(const ArmProbabilities& probs, const ArmOrdering& ordering, Stage stage,
                         PathLabel path) {
  double lo = 0.0;
  for (PathLabel p : ordering.stages[static_cast<int>(stage)]) {
    const double m = probs.at(stage, p);
    if (p == path) return {lo, lo + m};
    lo += m;
  }
  throw std::invalid_argument("path not in ordering");
}

double overlap(Interval a, Interval b) { return std::max(0.0, std::min(a.hi, b.hi) - std::max(a.lo, b.lo)); }

double gap(Interval a, Interval b) { return std::max({0.0, a.lo - b.hi, b.lo - a.hi}); }

/// Index of the first arm whose closed cumulative interval contains `x`.
std::size_t arm_containing(const std::vector<double>& masses, double x) {
  double lo = 0.0;
  for (std::size_t i = 0; i < masses.size(); ++i) {
    if (masses[i] > kTiny && x >= lo - kTiny && x <= lo + masses[i] + kTiny) return i;
    lo += masses[i];
  }
  // Everything empty or x at the very end: attach to the nearest populated arm.
  std::size_t best = masses.size() - 1;
  for (std::size_t i = 0; i < masses.size(); ++i) {
    if (masses[i] > kTiny) best = i;
  }
  return best;
}

Junction couple(const JunctionSpec& spec, const ArmProbabilities& probs, const ArmOrdering& ordering) {
  const Stage in_stage = spec.stage_in;
  const Stage out_stage = next(in_stage);

  Junction j{spec.name, in_stage, out_stage, spec.inputs, spec.outputs, {}};
  auto by_position = [&](Stage s) {
    return [&, s](PathLabel a, PathLabel b) { return ordering.position(s, a) < ordering.position(s, b); };
  };
  std::sort(j.inputs.begin(), j.inputs.end(), by_position(in_stage));
  std::sort(j.outputs.begin(), j.outputs.end(), by_position(out_stage));

  std::vector<double> in_mass, out_mass;
  for (PathLabel p : j.inputs) in_mass.push_back(probs.at(in_stage, p));
  for (PathLabel p : j.outputs) out_mass.push_back(probs.at(out_stage, p));

  const double in_total = j.in_mass(probs);
  const double out_total = j.out_mass(probs);
  if (std::abs(in_total - out_total) > kMarginalTol) {
    throw std::invalid_argument("marginal imbalance at junction " + j.name + ": in " +
                                std::to_string(in_total) + ", out " + std::to_string(out_total));
  }

  // North-west corner rule on the ordered measures is the monotone coupling.
  std::size_t i = 0, o = 0;
  double rem_in = in_mass.empty() ? 0.0 : in_mass[0];
  double rem_out = out_mass.empty() ? 0.0 : out_mass[0];
  while (i < in_mass.size() && o < out_mass.size()) {
    if (rem_in <= kTiny) {
      if (++i < in_mass.size()) rem_in = in_mass[i];
      continue;
    }
    if (rem_out <= kTiny) {
      if (++o < out_mass.size()) rem_out = out_mass[o];
      continue;
    }
    const double m = std::min(rem_in, rem_out);
    j.couplings.push_back({j.inputs[i], j.outputs[o], m, false});
    rem_in -= m;
    rem_out -= m;
  }

  // Empty arms stay attached to the graph at their place in the order.
  double pos = 0.0;
  for (std::size_t k = 0; k < in_mass.size(); ++k) {
    if (in_mass[k] <= kEmptyArm) {
      j.couplings.push_back({j.inputs[k], j.outputs[arm_containing(out_mass, pos)], 0.0, true});
    }
    pos += in_mass[k];
  }
  pos = 0.0;
  for (std::size_t k = 0; k < out_mass.size(); ++k) {
    if (out_mass[k] <= kEmptyArm) {
      const PathLabel from = j.inputs[arm_containing(in_mass, pos)];
      const bool duplicate = std::any_of(j.couplings.begin(), j.couplings.end(), [&](const Coupling& c) {
        return c.from == from && c.to == j.outputs[k];
      });
      if (!duplicate) j.couplings.push_back({from, j.outputs[k], 0.0, true});
    }
    pos += out_mass[k];
  }
  return j;
}

int index_of(const std::vector<PathLabel>& v, PathLabel p) {
  return static_cast<int>(std::find(v.begin(), v.end(), p) - v.begin());
}

}  // namespace

double ArmProbabilities::at(Stage stage, PathLabel path) const {
  return by_stage[static_cast<int>(stage)][require_slot(stage, path)];
}

double ArmProbabilities::of(PathLabel path) const { return at(home_stage(path), path); }

ArmProbabilities arm_probabilities(const NetworkConfig& config) {
  const Network net = Network::build(config);
  ArmProbabilities probs;
  for (Stage s : kAllStages) {
    const State st = net.forward(s);
    for (int slot = 0; slot < kPathsPerStage; ++slot) {
      probs.by_stage[static_cast<int>(s)][slot] = st.path_probability(stage_paths(s)[slot]);
    }
  }
  return probs;
}

ArmOrdering ArmOrdering::figure3() {
  return ArmOrdering{{{
      {PathLabel::In, PathLabel::InBar, PathLabel::G},
      {PathLabel::E, PathLabel::G, PathLabel::C},
      {PathLabel::A, PathLabel::B, PathLabel::C},
      {PathLabel::F, PathLabel::Fbar, PathLabel::C},
      {PathLabel::D, PathLabel::Dbar, PathLabel::Fbar},
  }}};
}

void ArmOrdering::validate() const {
  for (Stage s : kAllStages) {
    const auto& row = stages[static_cast<int>(s)];
    for (PathLabel p : stage_paths(s)) {
      if (std::count(row.begin(), row.end(), p) != 1) {
        throw std::invalid_argument("ordering at " + std::string(to_string(s)) + " must list " +
                                    std::string(to_string(p)) + " exactly once");
      }
    }
  }
}

int ArmOrdering::position(Stage stage, PathLabel path) const {
  const auto& row = stages[static_cast<int>(stage)];
  const auto it = std::find(row.begin(), row.end(), path);
  if (it == row.end()) {
    throw std::invalid_argument("path " + std::string(to_string(path)) + " not ordered at " +
                                std::string(to_string(stage)));
  }
  return static_cast<int>(it - row.begin());
}

double Junction::in_mass(const ArmProbabilities& p) const {
  double m = 0.0;
  for (PathLabel a : inputs) m += p.at(stage_in, a);
  return m;
}

double Junction::out_mass(const ArmProbabilities& p) const {
  double m = 0.0;
  for (PathLabel a : outputs) m += p.at(stage_out, a);
  return m;
}

double Junction::coupled_mass() const {
  double m = 0.0;
  for (const Coupling& c : couplings) m += c.mass;
  return m;
}

TransportMap route_noncrossing(const ArmProbabilities& probs, const ArmOrdering& ordering) {
  ordering.validate();
  TransportMap map;
  for (const JunctionSpec& spec : topology()) map.junctions.push_back(couple(spec, probs, ordering));
  return map;
}

bool is_noncrossing(const Junction& j) {
  for (const Coupling& a : j.couplings) {
    for (const Coupling& b : j.couplings) {
      if (index_of(j.inputs, a.from) < index_of(j.inputs, b.from) &&
          index_of(j.outputs, a.to) > index_of(j.outputs, b.to)) {
        return false;
      }
    }
  }
  return true;
}

std::vector<PathLabel> Trajectory::arms() const {
  std::vector<PathLabel> out;
  for (const TrajectoryStep& s : steps) out.push_back(s.arm);
  return out;
}

Trajectory trajectory(PathLabel port, const ArmProbabilities& probs, const ArmOrdering& ordering,
                      const TransportMap& transport) {
  if (!path_valid(Stage::T4, port)) {
    throw std::invalid_argument("trajectory port " + std::string(to_string(port)) + " is not an output port");
  }
  if (probs.at(Stage::T4, port) <= kEmptyArm) {
    throw std::invalid_argument("port " + std::string(to_string(port)) + " has zero probability");
  }
  const Interval bundle = global_interval(probs, ordering, Stage::T4, port);

  Trajectory tr{port, {}};
  tr.steps.push_back({Stage::T4, port, probs.at(Stage::T4, port), false});
  PathLabel current = port;
  for (int k = static_cast<int>(Stage::T3); k >= 0; --k) {
    const Stage stage = static_cast<Stage>(k);
    std::vector<PathLabel> candidates;
    for (const Junction& j : transport.junctions) {
      if (j.stage_in != stage) continue;
      for (const Coupling& c : j.couplings) {
        if (c.to == current && std::find(candidates.begin(), candidates.end(), c.from) == candidates.end()) {
          candidates.push_back(c.from);
        }
      }
    }
    if (candidates.empty()) {
      throw std::logic_error("transport map has no edge into " + std::string(to_string(current)));
    }

    PathLabel best = candidates.front();
    double best_overlap = -1.0;
    double best_gap = std::numeric_limits<double>::infinity();
    for (PathLabel c : candidates) {
      const Interval iv = global_interval(probs, ordering, stage, c);
      const double ov = overlap(iv, bundle);
      const double g = gap(iv, bundle);
      const bool better =
          ov > best_overlap + kTiny ||
          (std::abs(ov - best_overlap) <= kTiny &&
           (g < best_gap - kTiny ||
            (std::abs(g - best_gap) <= kTiny && ordering.position(stage, c) < ordering.position(stage, best))));
      if (better) {
        best = c;
        best_overlap = ov;
        best_gap = g;
      }
    }
    const double p = probs.at(stage, best);
    tr.steps.push_back({stage, best, p, p <= kEmptyArm});
    current = best;
  }
  std::reverse(tr.steps.begin(), tr.steps.end());
  return tr;
}

Trajectory trajectory(PathLabel port, const NetworkConfig& config, const ArmOrdering& ordering) {
  const ArmProbabilities probs = arm_probabilities(config);
  return trajectory(port, probs, ordering, route_noncrossing(probs, ordering));
}

}  // namespace nmzi
