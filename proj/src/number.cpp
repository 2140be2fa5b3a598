#include "runlen/number.hpp"

#include <cstdio>

namespace runlen {

std::string to_string(NumericMode mode) {
    return mode == NumericMode::Rational ? "rational" : "float";
}

std::string Number::str() const {
    if (is_rational()) return rational_to_string(rat());
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", dbl());
    return buf;
}

} // namespace runlen
