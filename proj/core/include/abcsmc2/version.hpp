#pragma once

namespace abcsmc2 {

inline constexpr const char* version_string = "0.1.0";

}  // namespace abcsmc2
