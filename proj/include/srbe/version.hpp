#pragma once

namespace srbe {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace srbe
