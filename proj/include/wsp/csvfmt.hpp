#pragma once

#include <cstdio>
#include <string>

#include "wsp/market.hpp"

namespace wsp {

// Fixed 12-significant-digit formatting so CSV output is byte-identical for
// identical inputs.
inline std::string csv_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

// The never strategy serializes as the literal token "inf".
inline std::string csv_time(const ExtendedTime& t) {
    return t.is_never() ? "inf" : csv_num(t.value());
}

}  // namespace wsp
