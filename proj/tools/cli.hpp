#pragma once

#include <iosfwd>

namespace pfrac::cli {

enum ExitCode : int {
    ok = 0,
    failure = 1,
    search_exhausted = 2,
    resample_exhausted = 3,
    io_error = 4,
    usage = 64,
};

/// Entry point of the `pfrac` tool. stdout carries machine-readable
/// results, stderr the resolved configuration and log lines.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pfrac::cli
