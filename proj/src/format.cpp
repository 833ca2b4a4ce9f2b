#include "ksep/format.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace ksep {

std::string format_number(double value) {
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    if (std::isnan(value)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    if (std::string(buf) == "-0") return "0";
    return buf;
}

double round_significant(double value) {
    if (!std::isfinite(value)) return value;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    const double r = std::strtod(buf, nullptr);
    return r == 0.0 ? 0.0 : r;
}

}  // namespace ksep
