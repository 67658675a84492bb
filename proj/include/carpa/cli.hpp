#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace carpa {

/// Command-line entry point; args excludes the program name. CSV output goes
/// to the --out path when given, otherwise to `out`. Returns 0 on success,
/// 2 on argument errors, 1 on runtime errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace carpa
