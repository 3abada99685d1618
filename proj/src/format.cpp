#include "oqo/format.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace oqo {

std::string format_number(double x)
{
    if (x == 0.0) {
        return "0";  // folds -0
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

double round_significant(double x)
{
    if (!std::isfinite(x)) {
        return x;
    }
    return std::strtod(format_number(x).c_str(), nullptr);
}

}  // namespace oqo
