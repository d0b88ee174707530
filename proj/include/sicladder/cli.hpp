#ifndef SICLADDER_CLI_HPP
#define SICLADDER_CLI_HPP

// Command-line front end. Exit codes: 0 success, 1 verification failure,
// 2 usage or input error.

#include <iosfwd>
#include <string>
#include <vector>

namespace sicladder::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command; `args` excludes the program name.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sicladder::cli

#endif  // SICLADDER_CLI_HPP
