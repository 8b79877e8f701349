#pragma once

// Command-line front end shared by the `deq` executable and the tests.

#include <ostream>
#include <string>
#include <vector>

namespace deq {

enum ExitCode : int { kExitOk = 0, kExitInvalid = 1, kExitNotConverged = 2 };

/// Subcommands: flatten, areapreserve, remesh, verify. Returns an ExitCode.
/// Warnings emitted while running are written to `err`.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace deq
