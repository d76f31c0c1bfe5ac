#pragma once

#include <iosfwd>

namespace isogk::cli {

/// Process exit codes.
enum ExitCode : int { kPass = 0, kVerificationFailure = 1, kUsageError = 2, kNumericalFailure = 3 };

/// Runs the isogk command line. Errors go to err as one line of the form
/// "error[<reason>]: <message>".
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace isogk::cli
