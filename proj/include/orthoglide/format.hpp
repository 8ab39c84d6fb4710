#pragma once

#include <cstdio>
#include <string>

namespace orthoglide {

/// Fixed 12-significant-digit formatting; every emitted CSV/report number
/// goes through this so identical runs produce byte-identical files.
inline std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

/// Round to the 12-digit printed value (used before embedding in JSON docs).
inline double round12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return std::strtod(buf, nullptr);
}

}  // namespace orthoglide
