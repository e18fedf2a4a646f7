#pragma once

#include <string_view>

namespace leaklint {

inline constexpr std::string_view kToolName = "leaklint";
inline constexpr std::string_view kToolVersion = "0.1.0";

}  // namespace leaklint
