#include "nmzi/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace nmzi {

namespace {

using json = nlohmann::json;

int line_at(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

/// Best-effort source line of a pointer: follows its object keys through the
/// text in order. Array indices are not resolved, so elements of an array of
/// objects report the line of their first matching key.
int locate(std::string_view text, const std::string& pointer) {
  std::size_t pos = 0;
  std::size_t found = std::string_view::npos;
  std::istringstream tokens(pointer);
  std::string token;
  while (std::getline(tokens, token, '/')) {
    if (token.empty() || std::all_of(token.begin(), token.end(), ::isdigit)) continue;
    const std::string quoted = "\"" + token + "\"";
    const std::size_t at = text.find(quoted, pos);
    if (at == std::string_view::npos) break;
    found = at;
    pos = at + quoted.size();
  }
  return found == std::string_view::npos ? 1 : line_at(text, found);
}

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  [[noreturn]] void fail(const std::string& pointer, const std::string& message) const {
    throw ConfigError(pointer, locate(text_, pointer), message);
  }

  void require_object(const json& j, const std::string& ptr, std::initializer_list<std::string_view> keys) const {
    if (!j.is_object()) fail(ptr, "expected an object");
    for (const auto& [k, v] : j.items()) {
      if (std::find(keys.begin(), keys.end(), k) == keys.end()) fail(ptr + "/" + k, "unknown key '" + k + "'");
    }
  }

  bool boolean(const json& j, const std::string& ptr) const {
    if (!j.is_boolean()) fail(ptr, "expected true or false");
    return j.get<bool>();
  }

  double number(const json& j, const std::string& ptr) const {
    if (!j.is_number()) fail(ptr, "expected a number");
    return j.get<double>();
  }

  std::uint64_t unsigned_integer(const json& j, const std::string& ptr) const {
    if (!j.is_number_unsigned()) fail(ptr, "expected a non-negative integer");
    return j.get<std::uint64_t>();
  }

  std::string string(const json& j, const std::string& ptr) const {
    if (!j.is_string()) fail(ptr, "expected a string");
    return j.get<std::string>();
  }

  template <class T>
  T named(const json& j, const std::string& ptr, std::optional<T> (*parse)(std::string_view), const char* what) const {
    const std::string s = string(j, ptr);
    const auto v = parse(s);
    if (!v) fail(ptr, std::string("unknown ") + what + " '" + s + "'");
    return *v;
  }

  PathLabel mirror(const json& j, const std::string& ptr) const {
    const PathLabel p = named(j, ptr, parse_path, "mirror");
    if (!is_mirror(p)) fail(ptr, "'" + std::string(to_string(p)) + "' is not a tiltable mirror (A, B, C, E, F)");
    return p;
  }

 private:
  std::string_view text_;
};

TiltSetting read_tilt(const Reader& r, const json& j, const std::string& ptr) {
  r.require_object(j, ptr, {"mirror", "epsilon", "axis"});
  if (!j.contains("mirror")) r.fail(ptr, "tilt needs 'mirror'");
  if (!j.contains("epsilon")) r.fail(ptr, "tilt needs 'epsilon'");
  TiltSetting t{r.mirror(j["mirror"], ptr + "/mirror"), r.number(j["epsilon"], ptr + "/epsilon"), Axis::X};
  if (j.contains("axis")) t.axis = r.named(j["axis"], ptr + "/axis", parse_axis, "axis");
  return t;
}

WigglePlan read_wiggle(const Reader& r, const json& j, const std::string& ptr) {
  r.require_object(j, ptr,
                   {"entries", "axis", "epsilon", "duration", "sample_rate", "noise_sigma", "rng_seed", "detector_axis"});
  const Axis axis = j.contains("axis") ? r.named(j["axis"], ptr + "/axis", parse_axis, "axis") : Axis::X;
  const double eps = j.contains("epsilon") ? r.number(j["epsilon"], ptr + "/epsilon") : 0.01;

  WigglePlan plan = WigglePlan::danan_default(axis, eps);
  if (j.contains("entries")) {
    const json& entries = j["entries"];
    if (!entries.is_array()) r.fail(ptr + "/entries", "expected an array");
    plan.entries.clear();
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const std::string ep = ptr + "/entries/" + std::to_string(i);
      const json& e = entries[i];
      r.require_object(e, ep, {"mirror", "frequency", "epsilon", "axis", "phase"});
      if (!e.contains("mirror")) r.fail(ep, "wiggle entry needs 'mirror'");
      if (!e.contains("frequency")) r.fail(ep, "wiggle entry needs 'frequency'");
      WiggleEntry w{r.mirror(e["mirror"], ep + "/mirror"), r.number(e["frequency"], ep + "/frequency"), eps, axis,
                    0.0};
      if (e.contains("epsilon")) w.epsilon = r.number(e["epsilon"], ep + "/epsilon");
      if (e.contains("axis")) w.axis = r.named(e["axis"], ep + "/axis", parse_axis, "axis");
      if (e.contains("phase")) w.phase = r.number(e["phase"], ep + "/phase");
      plan.entries.push_back(w);
    }
  }
  if (j.contains("duration")) plan.duration = r.number(j["duration"], ptr + "/duration");
  if (j.contains("sample_rate")) plan.sample_rate = r.number(j["sample_rate"], ptr + "/sample_rate");
  if (j.contains("noise_sigma")) plan.noise_sigma = r.number(j["noise_sigma"], ptr + "/noise_sigma");
  if (j.contains("rng_seed")) plan.rng_seed = r.unsigned_integer(j["rng_seed"], ptr + "/rng_seed");
  if (j.contains("detector_axis")) {
    plan.detector_axis = r.named(j["detector_axis"], ptr + "/detector_axis", parse_axis, "axis");
  }
  return plan;
}

}  // namespace

ConfigError::ConfigError(std::string pointer, int line, const std::string& message)
    : std::invalid_argument((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) +
                            (pointer.empty() ? "/" : pointer) + ": " + message),
      pointer_(std::move(pointer)),
      line_(line) {}

void RunConfig::validate() const {
  network.validate();
  plan.validate(network.epsilon_limit);
  for (const WiggleEntry& e : plan.entries) {
    if (network.tilt_of(e.mirror) != 0.0) {
      throw std::invalid_argument("mirror " + std::string(to_string(e.mirror)) +
                                  " has both a static tilt and a wiggle");
    }
  }
  if (!path_valid(Stage::T4, port)) throw std::invalid_argument("port must be D, Dbar or Fbar");
  if (!(std::abs(probe_epsilon) < network.epsilon_limit)) {
    throw std::invalid_argument("probe_epsilon must be below epsilon_limit");
  }
  if (threads == 0) throw std::invalid_argument("threads must be >= 1");
  if (output_dir.empty()) throw std::invalid_argument("output_dir must not be empty");
}

RunConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::string what = e.what();
    if (const auto cut = what.find("] "); cut != std::string::npos) what = what.substr(cut + 2);
    throw ConfigError("", line_at(text, e.byte == 0 ? 0 : e.byte - 1), "invalid JSON: " + what);
  }

  const Reader r(text);
  r.require_object(doc, "",
                   {"dove_prism", "prism_arm", "inner_phase", "tilts", "epsilon_limit", "wiggle", "output_dir", "stage",
                    "flip_axis", "port", "probe_epsilon", "threads"});

  RunConfig cfg;
  NetworkConfig& net = cfg.network;
  if (doc.contains("dove_prism")) net.dove_prism = r.boolean(doc["dove_prism"], "/dove_prism");
  if (doc.contains("prism_arm")) {
    net.prism_arm = r.named(doc["prism_arm"], "/prism_arm", parse_path, "arm");
    if (net.prism_arm != PathLabel::A && net.prism_arm != PathLabel::B) r.fail("/prism_arm", "prism arm must be A or B");
  }
  if (doc.contains("inner_phase")) net.inner_phase = r.number(doc["inner_phase"], "/inner_phase");
  if (doc.contains("epsilon_limit")) net.epsilon_limit = r.number(doc["epsilon_limit"], "/epsilon_limit");
  if (doc.contains("tilts")) {
    if (!doc["tilts"].is_array()) r.fail("/tilts", "expected an array");
    std::set<PathLabel> seen;
    for (std::size_t i = 0; i < doc["tilts"].size(); ++i) {
      const std::string ptr = "/tilts/" + std::to_string(i);
      const TiltSetting t = read_tilt(r, doc["tilts"][i], ptr);
      if (!seen.insert(t.mirror).second) r.fail(ptr + "/mirror", "mirror tilted twice");
      try {
        validate_tilt(t, net.epsilon_limit);
      } catch (const std::invalid_argument& e) {
        r.fail(ptr + "/epsilon", e.what());
      }
      net.tilts.push_back(t);
    }
  }
  if (doc.contains("wiggle")) cfg.plan = read_wiggle(r, doc["wiggle"], "/wiggle");
  if (doc.contains("output_dir")) cfg.output_dir = r.string(doc["output_dir"], "/output_dir");
  if (doc.contains("stage")) cfg.stage = r.named(doc["stage"], "/stage", parse_stage, "stage");
  if (doc.contains("flip_axis")) cfg.flip_axis = r.named(doc["flip_axis"], "/flip_axis", parse_axis, "axis");
  if (doc.contains("port")) cfg.port = r.named(doc["port"], "/port", parse_path, "port");
  if (doc.contains("probe_epsilon")) cfg.probe_epsilon = r.number(doc["probe_epsilon"], "/probe_epsilon");
  if (doc.contains("threads")) {
    const std::uint64_t n = r.unsigned_integer(doc["threads"], "/threads");
    if (n == 0 || n > 1024) r.fail("/threads", "threads must be in [1, 1024]");
    cfg.threads = static_cast<unsigned>(n);
  }

  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    std::string ptr;
    if (msg.find("wiggle") != std::string::npos || msg.find("frequenc") != std::string::npos ||
        msg.find("duration") != std::string::npos || msg.find("sample") != std::string::npos ||
        msg.find("noise") != std::string::npos || msg.find("axis") != std::string::npos) {
      ptr = "/wiggle";
    } else if (msg.find("port") != std::string::npos) {
      ptr = "/port";
    } else if (msg.find("probe") != std::string::npos) {
      ptr = "/probe_epsilon";
    } else if (msg.find("prism") != std::string::npos) {
      ptr = "/prism_arm";
    }
    r.fail(ptr, msg);
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", 0, "cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace nmzi
