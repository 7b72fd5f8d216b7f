#pragma once

#include <cstdio>
#include <string>

namespace specount {

// 17 significant digits: enough for a lossless double round trip.
inline std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return std::string(buf);
}

}  // namespace specount
