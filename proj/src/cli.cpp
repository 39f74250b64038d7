#include "nmzi/cli.hpp"

#include "nmzi/config.hpp"
#include "nmzi/report_io.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>

namespace nmzi {

namespace {

namespace fs = std::filesystem;

struct Options {
  std::string config;
  std::string out;
};

fs::path output_dir(const Options& opt, const RunConfig& cfg) {
  if (!opt.out.empty()) return opt.out;
  if (const char* env = std::getenv("NMZI_OUTPUT_DIR"); env && *env) return env;
  return cfg.output_dir;
}

fs::path prepare(const fs::path& dir) {
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << content;
  if (!f) throw std::runtime_error("write failed for " + path.string());
}

void write_json(const fs::path& path, const json& j) { write_file(path, j.dump(2) + "\n"); }

int tune_check_cmd(const RunConfig& cfg, std::ostream& out) {
  const TuneReport r = tune_check(Network::build(cfg.network), cfg.probe_epsilon);
  out << to_json(r).dump(2) << '\n';
  return kExitOk;
}

int snapshots_cmd(const RunConfig& cfg, std::ostream& out) {
  out << to_json(snapshots(Network::build(cfg.network))).dump(2) << '\n';
  return kExitOk;
}

int spectrum_cmd(const RunConfig& cfg, const fs::path& dir, std::ostream& out) {
  const SignalTrace trace = simulate_trace(cfg.network, cfg.plan, cfg.threads);
  const Spectrum spectrum = power_spectrum(trace);
  const PeakReport peaks = peak_report(spectrum, cfg.plan);

  prepare(dir);
  std::ostringstream trace_csv, spectrum_csv;
  write_trace_csv(trace_csv, trace);
  write_spectrum_csv(spectrum_csv, spectrum);
  write_file(dir / "trace.csv", trace_csv.str());
  write_file(dir / "spectrum.csv", spectrum_csv.str());
  write_json(dir / "peaks.json", to_json(peaks));

  out << to_json(peaks).dump(2) << '\n';
  return kExitOk;
}

int weak_values_cmd(const RunConfig& cfg, const fs::path& dir, std::ostream& out) {
  const json j = to_json(presence_report(cfg.network, cfg.stage, cfg.flip_axis));
  write_json(prepare(dir) / "weak_values.json", j);
  out << j.dump(2) << '\n';
  return kExitOk;
}

int bohm_cmd(const RunConfig& cfg, const fs::path& dir, std::ostream& out) {
  const ArmProbabilities probs = arm_probabilities(cfg.network);
  const ArmOrdering ordering = ArmOrdering::figure3();
  BohmReport report{{}, route_noncrossing(probs, ordering)};
  report.trajectory = trajectory(cfg.port, probs, ordering, report.transport);
  const json j = to_json(report);
  write_json(prepare(dir) / "bohm.json", j);
  out << j.dump(2) << '\n';
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Nested Mach-Zehnder interferometer simulator", "nmzi"};
  app.require_subcommand(1, 1);

  Options opt;
  const std::vector<std::pair<const char*, const char*>> commands{
      {"tune-check", "Check the tuned interferometer: F leak, P(D), snapshot closed forms"},
      {"snapshots", "Print forward and backward states at every stage"},
      {"spectrum", "Simulate the wiggled-mirror quad-cell trace; write trace, spectrum and peaks"},
      {"weak-values", "Write path and mode-flip weak values at one stage"},
      {"bohm", "Write the non-crossing trajectory and junction transport maps"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("-c,--config", opt.config, "JSON configuration file")->required();
    sub->add_option("-o,--out", opt.out, "Output directory");
  }

  std::vector<const char*> argv{"nmzi"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    const RunConfig cfg = load_config(opt.config);
    const fs::path dir = output_dir(opt, cfg);
    if (command == "tune-check") return tune_check_cmd(cfg, out);
    if (command == "snapshots") return snapshots_cmd(cfg, out);
    if (command == "spectrum") return spectrum_cmd(cfg, dir, out);
    if (command == "weak-values") return weak_values_cmd(cfg, dir, out);
    return bohm_cmd(cfg, dir, out);
  } catch (const ConfigError& e) {
    err << opt.config << ":" << e.what() << '\n';
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "runtime error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace nmzi
