#pragma once

#include "runlen/errors.hpp"
#include "runlen/rational.hpp"

#include <compare>
#include <cstdint>
#include <string>
#include <variant>

namespace runlen {

enum class NumericMode { Rational, Float };

std::string to_string(NumericMode mode);

/// A scalar tagged with its arithmetic mode. Rational values are exact and
/// arbitrary precision; float values are IEEE doubles. Mixing modes in any
/// binary operation throws ModeError -- there is no silent promotion.
class Number {
public:
    Number() : value_(Rational(0)) {}

    static Number rational(Rational r) { return Number(std::move(r)); }
    static Number real(double d) { return Number(d); }
    static Number from_int(std::int64_t i, NumericMode mode) {
        return mode == NumericMode::Rational ? rational(Rational(i)) : real(static_cast<double>(i));
    }
    static Number zero(NumericMode mode) { return from_int(0, mode); }
    static Number one(NumericMode mode) { return from_int(1, mode); }

    NumericMode mode() const noexcept {
        return std::holds_alternative<Rational>(value_) ? NumericMode::Rational : NumericMode::Float;
    }
    bool is_rational() const noexcept { return mode() == NumericMode::Rational; }

    const Rational& rat() const {
        if (!is_rational()) throw ModeError("expected a rational-mode value");
        return std::get<Rational>(value_);
    }
    double dbl() const {
        if (is_rational()) throw ModeError("expected a float-mode value");
        return std::get<double>(value_);
    }
    /// Lossy in rational mode; exact in float mode.
    double to_double() const {
        return is_rational() ? std::get<Rational>(value_).convert_to<double>() : std::get<double>(value_);
    }
    /// Exact in both modes (a double is a dyadic rational).
    Rational to_rational() const {
        return is_rational() ? std::get<Rational>(value_) : rational_from_double(std::get<double>(value_));
    }

    Number operator-() const {
        return is_rational() ? rational(-std::get<Rational>(value_)) : real(-std::get<double>(value_));
    }

    friend Number operator+(const Number& a, const Number& b) {
        check_same_mode(a, b, "+");
        if (a.is_rational()) return rational(a.rat() + b.rat());
        return real(a.dbl() + b.dbl());
    }
    friend Number operator-(const Number& a, const Number& b) {
        check_same_mode(a, b, "-");
        if (a.is_rational()) return rational(a.rat() - b.rat());
        return real(a.dbl() - b.dbl());
    }
    friend Number operator*(const Number& a, const Number& b) {
        check_same_mode(a, b, "*");
        if (a.is_rational()) return rational(a.rat() * b.rat());
        return real(a.dbl() * b.dbl());
    }
    friend Number operator/(const Number& a, const Number& b) {
        check_same_mode(a, b, "/");
        if (a.is_rational()) {
            if (b.rat() == 0) throw InvalidArgumentError("rational division by zero");
            return rational(a.rat() / b.rat());
        }
        return real(a.dbl() / b.dbl());
    }

    Number& operator+=(const Number& b) { return *this = *this + b; }
    Number& operator-=(const Number& b) { return *this = *this - b; }
    Number& operator*=(const Number& b) { return *this = *this * b; }
    Number& operator/=(const Number& b) { return *this = *this / b; }

    friend bool operator==(const Number& a, const Number& b) {
        check_same_mode(a, b, "==");
        return a.is_rational() ? a.rat() == b.rat() : a.dbl() == b.dbl();
    }
    friend bool operator!=(const Number& a, const Number& b) { return !(a == b); }
    friend bool operator<(const Number& a, const Number& b) {
        check_same_mode(a, b, "<");
        return a.is_rational() ? a.rat() < b.rat() : a.dbl() < b.dbl();
    }
    friend bool operator>(const Number& a, const Number& b) { return b < a; }
    friend bool operator<=(const Number& a, const Number& b) { return !(b < a); }
    friend bool operator>=(const Number& a, const Number& b) { return !(a < b); }

    bool is_zero() const { return is_rational() ? rat() == 0 : dbl() == 0.0; }
    bool is_negative() const { return is_rational() ? rat() < 0 : dbl() < 0.0; }

    Number pow(unsigned n) const {
        if (is_rational()) return rational(rational_pow(rat(), n));
        double r = 1.0, b = dbl();
        for (unsigned k = 0; k < n; ++k) r *= b;
        return real(r);
    }

    Number converted_to(NumericMode target) const {
        if (target == mode()) return *this;
        return target == NumericMode::Float ? real(to_double()) : rational(to_rational());
    }

    std::string str() const;

private:
    explicit Number(Rational r) : value_(std::move(r)) {}
    explicit Number(double d) : value_(d) {}

    static void check_same_mode(const Number& a, const Number& b, const char* op) {
        if (a.mode() != b.mode()) {
            throw ModeError(std::string("numeric mode mismatch in '") + op +
                            "': rational and float values cannot be combined");
        }
    }

    std::variant<Rational, double> value_;
};

} // namespace runlen
