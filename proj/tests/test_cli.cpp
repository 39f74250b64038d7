#include "doctest.h"

#include "nmzi/cli.hpp"
#include "nmzi/report_io.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace nmzi;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const char* base = std::getenv("NMZI_TEST_TMP");
  const fs::path dir = fs::path(base ? base : fs::temp_directory_path() / "nmzi_cli_tests") / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "config.json";
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("tune-check on the default config") {
  const fs::path dir = scratch("tune");
  const Result r = run_cli({"tune-check", "--config", write_config(dir, "{}").string()});
  REQUIRE(r.code == kExitOk);
  const json j = json::parse(r.out);
  CHECK(j["P_D"].get<double>() == doctest::Approx(1.0 / 9.0).epsilon(1e-12));
  CHECK(j["snapshots_ok"].get<bool>());
}

TEST_CASE("spectrum on the default plan writes trace, spectrum and peaks") {
  const fs::path dir = scratch("spectrum");
  const fs::path cfg = write_config(dir, "{}");
  const Result r = run_cli({"spectrum", "--config", cfg.string(), "--out", (dir / "a").string()});
  REQUIRE(r.code == kExitOk);
  const json peaks = json::parse(slurp(dir / "a" / "peaks.json"));
  for (const char* m : {"A", "B", "C"}) CHECK(peaks[m]["present"].get<bool>());
  for (const char* m : {"E", "F"}) CHECK_FALSE(peaks[m]["present"].get<bool>());
  CHECK(slurp(dir / "a" / "trace.csv").rfind("t,signal\n", 0) == 0);
  CHECK(slurp(dir / "a" / "spectrum.csv").rfind("freq_hz,magnitude\n", 0) == 0);
}

TEST_CASE("identical config and seed give byte-identical CSV") {
  const fs::path dir = scratch("repro");
  const fs::path cfg =
      write_config(dir, R"({"dove_prism": true, "threads": 3, "wiggle": {"noise_sigma": 1e-5, "rng_seed": 7}})");
  REQUIRE(run_cli({"spectrum", "-c", cfg.string(), "-o", (dir / "a").string()}).code == kExitOk);
  REQUIRE(run_cli({"spectrum", "-c", cfg.string(), "-o", (dir / "b").string()}).code == kExitOk);
  for (const char* f : {"trace.csv", "spectrum.csv", "peaks.json"}) {
    CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
  }
}

TEST_CASE("weak-values, bohm and snapshots") {
  const fs::path dir = scratch("reports");
  const fs::path cfg = write_config(dir, R"({"dove_prism": true, "tilts": [{"mirror": "E", "epsilon": 0.01}],
                                            "wiggle": {"entries": []}, "stage": "T1"})");
  const Result wv = run_cli({"weak-values", "-c", cfg.string(), "-o", dir.string()});
  REQUIRE(wv.code == kExitOk);
  const json w = json::parse(slurp(dir / "weak_values.json"));
  CHECK(w["dove"].get<bool>());
  CHECK(w["values"]["E"]["OP"][0].get<double>() > 0.03);

  const Result bohm = run_cli({"bohm", "-c", cfg.string(), "-o", dir.string()});
  REQUIRE(bohm.code == kExitOk);
  const json b = json::parse(slurp(dir / "bohm.json"));
  CHECK(b["trajectory"] == json::array({"In", "E", "A", "F", "D"}));

  const Result snap = run_cli({"snapshots", "-c", cfg.string()});
  REQUIRE(snap.code == kExitOk);
  const Snapshots s = snapshots_from_json(json::parse(snap.out));
  CHECK(s.forward[4].norm_squared() == doctest::Approx(1.0));
}

TEST_CASE("output directory precedence: --out, then NMZI_OUTPUT_DIR, then config") {
  const fs::path dir = scratch("precedence");
  const fs::path cfg = write_config(dir, R"({"output_dir": ")" + (dir / "from_config").string() + R"("})");
  unsetenv("NMZI_OUTPUT_DIR");
  REQUIRE(run_cli({"weak-values", "-c", cfg.string()}).code == kExitOk);
  CHECK(fs::exists(dir / "from_config" / "weak_values.json"));

  setenv("NMZI_OUTPUT_DIR", (dir / "from_env").c_str(), 1);
  REQUIRE(run_cli({"weak-values", "-c", cfg.string()}).code == kExitOk);
  CHECK(fs::exists(dir / "from_env" / "weak_values.json"));
  REQUIRE(run_cli({"weak-values", "-c", cfg.string(), "--out", (dir / "from_flag").string()}).code == kExitOk);
  CHECK(fs::exists(dir / "from_flag" / "weak_values.json"));
  unsetenv("NMZI_OUTPUT_DIR");
}

TEST_CASE("validation errors exit 1 with a line-anchored message") {
  const fs::path dir = scratch("invalid");
  const Result typo = run_cli({"tune-check", "-c", write_config(dir, "{\n  \"dove_prisim\": true\n}").string()});
  CHECK(typo.code == kExitValidation);
  CHECK(typo.err.find("line 2") != std::string::npos);
  CHECK(typo.err.find("/dove_prisim") != std::string::npos);

  CHECK(run_cli({"tune-check", "-c", (dir / "missing.json").string()}).code == kExitValidation);
  CHECK(run_cli({"tune-check"}).code == kExitValidation);
  CHECK(run_cli({"launch", "-c", "x.json"}).code == kExitValidation);
  CHECK(run_cli({}).code == kExitValidation);
}

TEST_CASE("runtime errors exit 2") {
  const fs::path dir = scratch("runtime");
  const fs::path cfg = write_config(dir, "{}");
  std::ofstream(dir / "blocker") << "file";
  const Result r = run_cli({"weak-values", "-c", cfg.string(), "-o", (dir / "blocker" / "sub").string()});
  CHECK(r.code == kExitRuntime);
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("help exits 0") {
  CHECK(run_cli({"--help"}).code == kExitOk);
}
