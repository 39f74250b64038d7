#pragma once

// Strict JSON run configuration. Every key is optional; `{}` is the tuned
// interferometer without prism, driven by the default five-mirror wiggle plan.

#include "nmzi/signal.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

namespace nmzi {

struct RunConfig {
  NetworkConfig network;
  WigglePlan plan = WigglePlan::danan_default();
  std::string output_dir = "nmzi_out";
  Stage stage = Stage::T1;          // weak-values
  Axis flip_axis = Axis::X;         // weak-values
  PathLabel port = PathLabel::D;    // bohm
  double probe_epsilon = 0.01;      // tune-check
  unsigned threads = 1;             // spectrum

  /// Network and plan validation plus cross checks (no mirror both tilted and wiggled).
  void validate() const;
};

/// Schema or semantic error. `pointer` is the JSON pointer of the offending
/// value ("" for the document), `line` its 1-based line in the source text.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string pointer, int line, const std::string& message);

  const std::string& pointer() const { return pointer_; }
  int line() const { return line_; }

 private:
  std::string pointer_;
  int line_;
};

/// Throws ConfigError.
RunConfig parse_config(std::string_view text);

/// Reads and parses a file; an unreadable file is a ConfigError at line 0.
RunConfig load_config(const std::filesystem::path& path);

}  // namespace nmzi
