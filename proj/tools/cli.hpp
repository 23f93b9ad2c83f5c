#pragma once

#include <iosfwd>

namespace qfact::cli {

/// Exit codes of the qfact tool.
enum Exit : int {
    kOk = 0,
    kVerifyFailed = 1,
    kDomainError = 2, ///< hereditary level, degenerate form, non-member, unit, ...
    kParseError = 3,
    kOverflow = 4,
    kIoError = 5,
    kInternalError = 6,
};

/// Runs the command line tool; the artifact goes to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace qfact::cli
