#pragma once

#include <cstdio>
#include <string>

namespace sumhess {

/// Shortest text that round-trips a double exactly ("%.17g").
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace sumhess
