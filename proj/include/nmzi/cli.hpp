#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace nmzi {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;

/// `args` excludes the program name:
///   nmzi <tune-check|snapshots|spectrum|weak-values|bohm> --config FILE [--out DIR]
/// The output directory is --out, else $NMZI_OUTPUT_DIR, else the config's output_dir.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nmzi
