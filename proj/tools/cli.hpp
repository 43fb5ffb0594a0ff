#pragma once

// Batch command-line surface: classify, verify-hopf, verify-rmatrix,
// simulate and pde. Reports are JSON with "schema": "v1".

#include <iosfwd>
#include <string>
#include <vector>

namespace galilei::cli {

enum ExitCode : int { kPass = 0, kFail = 1, kUsage = 2, kNotImplemented = 3 };

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
/// Convenience overload; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace galilei::cli
