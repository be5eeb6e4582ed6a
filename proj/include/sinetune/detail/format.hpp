#pragma once

#include <cstdio>
#include <string>

namespace sinetune::detail {

// Locale-independent, stable formatting for CSV/JSON emission.
inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace sinetune::detail
