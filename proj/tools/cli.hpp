#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fss::cli {

inline constexpr const char* kToolName = "fss";
inline constexpr const char* kToolVersion = "0.1.0";

// Exit codes: 0 success, 1 computation error, 2 input error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fss::cli
