#pragma once

#include <string>

namespace pnask {

/// Parses and runs one CLI invocation; returns the process exit code.
/// Errors are reported on stderr with the violated constraint named.
int run_cli(int argc, const char* const* argv);

/// Numeric formatting used for every CSV column (%.12g): stable across
/// reruns and platforms for the value ranges produced here.
std::string format_number(double value);

}  // namespace pnask
