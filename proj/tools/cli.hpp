#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace horolab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitRuntime = 3;

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// "%.15g"
std::string format15(double v);
std::string sha256_file(const std::string& path);

}  // namespace horolab::cli
