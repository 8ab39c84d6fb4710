#pragma once

namespace orthoglide {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace orthoglide
