#pragma once

namespace lbs {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace lbs
