#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ybforge::cli {

// Exit codes of a job.
inline constexpr int kSuccess = 0;
inline constexpr int kVerificationFailure = 1;
inline constexpr int kInputError = 2;

// Parses argv, runs one subcommand and writes its report to --out or to out.
// Diagnostics go to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace ybforge::cli
