#pragma once

#include <cstdio>
#include <string>

namespace mqcloc {

/// Round-trippable decimal text ("%.17g"), used for every float in CSV output.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace mqcloc
