#pragma once

namespace repeval {

inline constexpr const char* kVersion = "0.1.0";

} // namespace repeval
