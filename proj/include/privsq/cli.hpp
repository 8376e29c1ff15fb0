#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace privsq {

inline constexpr const char* kToolVersion = "1.0.0";

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kCheckFailed = 1;
inline constexpr int kUsage = 2;
}  // namespace exit_code

/// Runs one command. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(const std::vector<std::string>& args);

}  // namespace privsq
