#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pmaps::cli {

inline constexpr const char* kToolVersion = "pmaps 1.0.0";
inline constexpr const char* kCacheEnv = "PMAPS_CACHE_DIR";

enum ExitCode { kOk = 0, kUsage = 1, kResource = 2, kInternal = 3 };

// Runs one command line (args[0] is the program name). Reports go to the
// files named by the options; the summary document goes to out, diagnostics
// to err. With timing disabled the outputs are byte-identical across runs.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, bool timing = true);

}  // namespace pmaps::cli
