#include "runlen/number.hpp"

#include <doctest.h>

using namespace runlen;

namespace {
Number R(const char* text) { return Number::rational(rational_from_string(text)); }
} // namespace

TEST_CASE("rational arithmetic is exact") {
    CHECK(R("1/3") + R("1/6") == R("1/2"));
    CHECK(R("2/3") * R("3/4") == R("1/2"));
    CHECK(R("1/3") / R("2/9") == R("3/2"));
    CHECK((R("1/3") - R("1/3")).is_zero());
    CHECK(R("2/3").pow(2) == R("4/9"));
}

TEST_CASE("mode mixing is a hard error") {
    const Number rational = R("1/2");
    const Number real = Number::real(0.5);
    CHECK_THROWS_AS(rational + real, ModeError);
    CHECK_THROWS_AS(rational * real, ModeError);
    CHECK_THROWS_AS((void)(rational == real), ModeError);
    CHECK_THROWS_AS((void)(rational < real), ModeError);
    CHECK_THROWS_AS(rational.dbl(), ModeError);
    CHECK_THROWS_AS(real.rat(), ModeError);
}

TEST_CASE("double conversion is exact where it should be") {
    CHECK(rational_from_double(0.5) == Rational(1, 2));
    CHECK(rational_from_double(0.75) == Rational(3, 4));
    // 0.1 is not 1/10 in binary; conversion preserves the actual double.
    CHECK(rational_from_double(0.1) != Rational(1, 10));
    CHECK(Number::real(0.1).to_rational().convert_to<double>() == 0.1);
    CHECK(R("1/2").to_double() == 0.5);
}

TEST_CASE("string round trips") {
    CHECK(rational_to_string(Rational(12, 7)) == "12/7");
    CHECK(rational_to_string(Rational(4)) == "4");
    CHECK(rational_from_string("-3/9") == Rational(-1, 3));
    CHECK(rational_from_string("7") == Rational(7));
    CHECK_THROWS_AS(rational_from_string("1/0"), InvalidArgumentError);
    CHECK_THROWS_AS(rational_from_string("abc"), InvalidArgumentError);
}

TEST_CASE("mode conversions are explicit") {
    const Number r = R("1/2");
    CHECK(r.converted_to(NumericMode::Float).dbl() == 0.5);
    CHECK(Number::real(0.25).converted_to(NumericMode::Rational).rat() == Rational(1, 4));
    CHECK(r.converted_to(NumericMode::Rational) == r);
}
