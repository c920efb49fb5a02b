#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace zb::cli {

/// Process exit status of the zinc-bridge executable.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,  // bad arguments or unreadable/unwritable files
  kParse = 2,
  kValidation = 3,  // semantic errors and out-of-scope input
  kIncorrect = 4,   // check found a translation that changes the result
  kExternal = 5,    // external compiler failed
};

/// Runs one invocation. `args` excludes the program name. Artifacts go to
/// the named files, or to `out` when no output path is given.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace zb::cli
