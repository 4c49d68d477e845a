#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ejst {

// Exit codes
inline constexpr int kOk = 0;
inline constexpr int kFailed = 1;
inline constexpr int kUsage = 2;
inline constexpr int kBudget = 3;

// args excludes the program name
int ejst_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ejst
