#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fsl::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitDomain = 2;

/// Runs one command line (args[0] is the program name). Domain errors are
/// written to `err` as JSON and give exit code 2; usage errors give 1.
///
/// `--job file.json` runs either a single step {"command", "args"} or a list
/// {"steps": [...]}; "threads" and "out_dir" may be set at the top level.
/// With an output directory, every relative path resolves inside it.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fsl::cli
