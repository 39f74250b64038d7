#include "nmzi/report_io.hpp"

#include <cstdio>
#include <stdexcept>

namespace nmzi {

namespace {

template <class T>
T parse_or_throw(std::optional<T> v, const std::string& what, const std::string& text) {
  if (!v) throw std::invalid_argument("unknown " + what + " '" + text + "'");
  return *v;
}

Stage stage_of(const json& j) {
  const auto s = j.get<std::string>();
  return parse_or_throw(parse_stage(s), "stage", s);
}

PathLabel path_of(const json& j) {
  const auto s = j.get<std::string>();
  return parse_or_throw(parse_path(s), "path", s);
}

Axis axis_of(const json& j) {
  const auto s = j.get<std::string>();
  return parse_or_throw(parse_axis(s), "axis", s);
}

std::string str(std::string_view v) { return std::string(v); }

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_trace_csv(std::ostream& os, const SignalTrace& trace) {
  os << "t,signal\n";
  for (std::size_t i = 0; i < trace.samples.size(); ++i) {
    os << format_double(static_cast<double>(i) / trace.sample_rate) << ',' << format_double(trace.samples[i])
       << '\n';
  }
}

void write_spectrum_csv(std::ostream& os, const Spectrum& spectrum) {
  os << "freq_hz,magnitude\n";
  for (std::size_t k = 0; k < spectrum.magnitudes.size(); ++k) {
    os << format_double(spectrum.frequency(k)) << ',' << format_double(spectrum.magnitudes[k]) << '\n';
  }
}

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("complex number must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

json to_json(const State& s) {
  json amps = json::object();
  for (PathLabel p : stage_paths(s.stage())) {
    json modes = json::object();
    for (Mode m : ModeBasis::labels) modes[str(to_string(m))] = complex_to_json(s.amplitude(p, m));
    amps[str(to_string(p))] = modes;
  }
  return {{"stage", str(to_string(s.stage()))}, {"amplitudes", amps}};
}

State state_from_json(const json& j) {
  const Stage stage = stage_of(j.at("stage"));
  std::vector<Entry> entries;
  for (const auto& [path, modes] : j.at("amplitudes").items()) {
    const PathLabel p = parse_or_throw(parse_path(path), "path", path);
    for (const auto& [mode, z] : modes.items()) {
      entries.push_back({p, parse_or_throw(parse_mode(mode), "mode", mode), complex_from_json(z)});
    }
  }
  return state_new(stage, entries);
}

json to_json(const PeakReport& r) {
  json j = json::object();
  for (const PeakEntry& p : r.peaks) {
    j[str(to_string(p.mirror))] = {{"freq", p.frequency}, {"magnitude", p.magnitude}, {"present", p.present}};
  }
  j["floor"] = r.floor;
  j["threshold"] = r.threshold;
  return j;
}

PeakReport peak_report_from_json(const json& j) {
  PeakReport r;
  for (const auto& [key, v] : j.items()) {
    if (key == "floor") {
      r.floor = v.get<double>();
    } else if (key == "threshold") {
      r.threshold = v.get<double>();
    } else {
      r.peaks.push_back({parse_or_throw(parse_path(key), "mirror", key), v.at("freq").get<double>(),
                         v.at("magnitude").get<double>(), v.at("present").get<bool>()});
    }
  }
  return r;
}

json to_json(const WeakValueReport& r) {
  json values = json::object();
  for (const PathWeakValues& v : r.values) {
    values[str(to_string(v.path))] = {{"P", complex_to_json(v.projector)}, {"OP", complex_to_json(v.flip_projector)}};
  }
  return {{"stage", str(to_string(r.stage))},
          {"epsilon", r.epsilon},
          {"dove", r.dove},
          {"flip_axis", str(to_string(r.flip_axis))},
          {"denominator", complex_to_json(r.denominator)},
          {"values", values}};
}

WeakValueReport weak_value_report_from_json(const json& j) {
  WeakValueReport r;
  r.stage = stage_of(j.at("stage"));
  r.epsilon = j.at("epsilon").get<double>();
  r.dove = j.at("dove").get<bool>();
  r.flip_axis = axis_of(j.at("flip_axis"));
  r.denominator = complex_from_json(j.at("denominator"));
  for (const auto& [path, v] : j.at("values").items()) {
    r.values.push_back({parse_or_throw(parse_path(path), "path", path), complex_from_json(v.at("P")),
                        complex_from_json(v.at("OP"))});
  }
  r.forward = State::zero(r.stage);
  r.backward = State::zero(r.stage);
  return r;
}

json to_json(const TuneReport& r) {
  return {{"f_leak", r.f_leak}, {"P_D", r.p_d}, {"snapshots_ok", r.snapshots_ok}};
}

TuneReport tune_report_from_json(const json& j) {
  return {j.at("f_leak").get<double>(), j.at("P_D").get<double>(), j.at("snapshots_ok").get<bool>()};
}

Snapshots snapshots(const Network& net) {
  Snapshots s;
  for (Stage st : kAllStages) {
    s.forward[static_cast<int>(st)] = net.forward(st);
    s.backward[static_cast<int>(st)] = net.backward(st);
  }
  return s;
}

json to_json(const Snapshots& s) {
  json fwd = json::object();
  json bwd = json::object();
  for (Stage st : kAllStages) {
    fwd[str(to_string(st))] = to_json(s.forward[static_cast<int>(st)]);
    bwd[str(to_string(st))] = to_json(s.backward[static_cast<int>(st)]);
  }
  return {{"forward", fwd}, {"backward", bwd}};
}

Snapshots snapshots_from_json(const json& j) {
  Snapshots s;
  for (Stage st : kAllStages) {
    const std::string key = str(to_string(st));
    s.forward[static_cast<int>(st)] = state_from_json(j.at("forward").at(key));
    s.backward[static_cast<int>(st)] = state_from_json(j.at("backward").at(key));
  }
  return s;
}

json to_json(const BohmReport& r) {
  json arms = json::array();
  json steps = json::array();
  for (const TrajectoryStep& s : r.trajectory.steps) {
    arms.push_back(str(to_string(s.arm)));
    steps.push_back({{"stage", str(to_string(s.stage))},
                     {"arm", str(to_string(s.arm))},
                     {"probability", s.probability},
                     {"zero_measure", s.zero_measure}});
  }
  json transport = json::array();
  for (const Junction& jn : r.transport.junctions) {
    json inputs = json::array(), outputs = json::array(), couplings = json::array();
    for (PathLabel p : jn.inputs) inputs.push_back(str(to_string(p)));
    for (PathLabel p : jn.outputs) outputs.push_back(str(to_string(p)));
    for (const Coupling& c : jn.couplings) {
      couplings.push_back({{"from", str(to_string(c.from))},
                           {"to", str(to_string(c.to))},
                           {"mass", c.mass},
                           {"zero_measure", c.zero_measure}});
    }
    transport.push_back({{"junction", jn.name},
                         {"stage_in", str(to_string(jn.stage_in))},
                         {"stage_out", str(to_string(jn.stage_out))},
                         {"inputs", inputs},
                         {"outputs", outputs},
                         {"couplings", couplings}});
  }
  return {{"port", str(to_string(r.trajectory.port))},
          {"trajectory", arms},
          {"steps", steps},
          {"transport", transport}};
}

BohmReport bohm_report_from_json(const json& j) {
  BohmReport r;
  r.trajectory.port = path_of(j.at("port"));
  for (const json& s : j.at("steps")) {
    r.trajectory.steps.push_back({stage_of(s.at("stage")), path_of(s.at("arm")), s.at("probability").get<double>(),
                                  s.at("zero_measure").get<bool>()});
  }
  const json& arms = j.at("trajectory");
  if (arms.size() != r.trajectory.steps.size()) throw std::invalid_argument("trajectory and steps disagree");
  for (std::size_t i = 0; i < arms.size(); ++i) {
    if (path_of(arms[i]) != r.trajectory.steps[i].arm) throw std::invalid_argument("trajectory and steps disagree");
  }
  for (const json& jn : j.at("transport")) {
    Junction junction{jn.at("junction").get<std::string>(), stage_of(jn.at("stage_in")),
                      stage_of(jn.at("stage_out")), {}, {}, {}};
    for (const json& p : jn.at("inputs")) junction.inputs.push_back(path_of(p));
    for (const json& p : jn.at("outputs")) junction.outputs.push_back(path_of(p));
    for (const json& c : jn.at("couplings")) {
      junction.couplings.push_back({path_of(c.at("from")), path_of(c.at("to")), c.at("mass").get<double>(),
                                    c.at("zero_measure").get<bool>()});
    }
    r.transport.junctions.push_back(std::move(junction));
  }
  return r;
}

}  // namespace nmzi
