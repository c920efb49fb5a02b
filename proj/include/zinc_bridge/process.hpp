#pragma once

#include <string>
#include <vector>

namespace zb {

struct ProcessResult {
  int exit_code = 0;
  std::string out;
  std::string err;
};

/// Splits a command line on whitespace, honouring single and double quotes
/// and backslash escapes. No other shell syntax is interpreted.
std::vector<std::string> split_command(const std::string& command);

/// Runs argv[0] (looked up in PATH) and collects its output. Throws
/// ExternalError when the process cannot be started; the message carries the
/// attempted command line.
ProcessResult run_process(const std::vector<std::string>& argv);

}  // namespace zb
