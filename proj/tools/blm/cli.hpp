#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "blm/error.hpp"

namespace blm::cli {

enum ExitCode : int {
    kOk = 0,
    kInputError = 2,
    kDegenerate = 3,
    kNumericFailure = 4,
};

int exit_code_for(ErrorKind kind) noexcept;

/// Runs one CLI invocation. args excludes the program name. Reports go to
/// `out`, diagnostics to `err`; `in` feeds the monitor command.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

/// Shortest decimal with at most 9 significant digits, '.' separator.
std::string format_float(double v);

}  // namespace blm::cli
