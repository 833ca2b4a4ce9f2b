#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ksep::cli {

/// Runs one CLI invocation. `args` excludes the program name. Returns the process
/// exit code: 0 on success, 1 when the oracle finds a violation, 2 on invalid
/// input or a failed computation.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses an integer list such as "4,6,8", "2-20" or "2-20:2". The token "n"
/// (for k lists) maps to 0, standing for k = n.
std::vector<int> parse_int_list(const std::string& text, bool allow_n = false);

/// Parses a comma-separated list of reals.
std::vector<double> parse_real_list(const std::string& text);

}  // namespace ksep::cli
