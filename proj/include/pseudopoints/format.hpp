#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace pseudopoints {

/// Reals in CSV/JSON text: 9 significant digits, "%.9g" style, with -0 shown
/// as 0 and non-finite values as "nan" / "inf" / "-inf".
inline std::string format_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) v = 0.0;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

} // namespace pseudopoints
