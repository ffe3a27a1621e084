#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qdct::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 2,
    kParse = 3,
    kIo = 4,
    kVerification = 5,
    kFallbackOnly = 6,
};

/// Runs one command line (args excludes the program name). Primary output
/// goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qdct::cli
