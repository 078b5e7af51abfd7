#pragma once

#include <iosfwd>

namespace lraaa::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kIoFormat = 2, kNumerical = 3 };

/// Entry point behind the `lraaa` executable; diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lraaa::cli
