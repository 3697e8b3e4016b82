#pragma once

namespace capgrav {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace capgrav
