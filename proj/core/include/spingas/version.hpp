#pragma once

namespace spingas {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace spingas
