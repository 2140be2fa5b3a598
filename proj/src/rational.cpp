#include "runlen/rational.hpp"

#include "runlen/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace runlen {

Rational rational_pow(const Rational& base, unsigned n) {
    Rational result(1);
    Rational b = base;
    while (n > 0) {
        if (n & 1u) result *= b;
        b *= b;
        n >>= 1u;
    }
    return result;
}

Rational rational_from_double(double x) {
    if (!std::isfinite(x)) {
        throw InvalidArgumentError("cannot convert non-finite double to rational");
    }
    // cpp_rational's converting constructor preserves the exact binary value.
    return Rational(x);
}

std::string rational_to_string(const Rational& r) {
    const BigInt num = boost::multiprecision::numerator(r);
    const BigInt den = boost::multiprecision::denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

Rational rational_from_string(std::string_view text) {
    const auto slash = text.find('/');
    try {
        if (slash == std::string_view::npos) {
            return Rational(BigInt(std::string(text)));
        }
        BigInt num{std::string(text.substr(0, slash))};
        BigInt den{std::string(text.substr(slash + 1))};
        if (den == 0) throw InvalidArgumentError("rational with zero denominator");
        return Rational(num, den);
    } catch (const std::runtime_error& e) {
        throw InvalidArgumentError("cannot parse rational from '" + std::string(text) + "': " + e.what());
    }
}

BigInt factorial(unsigned n) {
    BigInt f(1);
    for (unsigned k = 2; k <= n; ++k) f *= k;
    return f;
}

} // namespace runlen
