#pragma once

#include <cstdio>
#include <string>

namespace optomech {

// Fixed 17-significant-digit decimal formatting; bit-stable across platforms
// and enough to round-trip any double.
inline std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace optomech
