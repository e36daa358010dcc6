#pragma once

namespace ubcov {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace ubcov
