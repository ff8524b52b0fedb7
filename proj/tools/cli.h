#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace snapsearch {

// Runs one command line (without the program name). Returns 0 on success, 2
// for a usage error, 1 for a data error; diagnostics go to `err`, CSV
// reports to `out` unless --out names a file.
int run_command(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace snapsearch
