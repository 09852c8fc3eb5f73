#pragma once

#include <cstdio>
#include <string>

namespace latpp {

/// Reporting precision: 12 significant digits.
inline std::string fmt12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

/// Round-trip precision: 17 significant digits reproduce an IEEE double exactly.
inline std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace latpp
