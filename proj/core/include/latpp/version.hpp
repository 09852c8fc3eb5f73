#pragma once

namespace latpp {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace latpp
