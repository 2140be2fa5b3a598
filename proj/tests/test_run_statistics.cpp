#include "runlen/run_statistics.hpp"

#include "runlen/errors.hpp"
#include "runlen/examples.hpp"

#include <doctest.h>

#include <cmath>

using namespace runlen;

namespace {

Number R(const char* text) { return Number::rational(rational_from_string(text)); }

MeasureExpr degenerate_singleton() {
    TotalLeaf leaf;
    leaf.diffuse = R("0");
    leaf.dropped_mass = R("0");
    leaf.atoms.push_back(Atom{0.5, R("1")});
    return MeasureExpr::leaf(std::move(leaf));
}

/// PGF value from the pmf coefficients, in long double so finite differences
/// stay above the rounding floor.
long double pgf_value(const RunStatistics& stats, long double z) {
    long double acc = 0.0L;
    for (std::size_t i = stats.pgf_coeffs.size(); i-- > 0;) {
        acc = acc * z + static_cast<long double>(stats.pgf_coeffs[i].to_double());
    }
    return acc;
}

} // namespace

TEST_CASE("pgf: degenerate strict initial is the point mass at 1") {
    const auto stats = pgf(degenerate_singleton(), RunKind::Strict, Position::Initial, 8);
    CHECK(stats.pgf_coeffs[0] == R("0"));
    CHECK(stats.pgf_coeffs[1] == R("1"));
    for (std::size_t n = 2; n < stats.pgf_coeffs.size(); ++n) CHECK(stats.pgf_coeffs[n] == R("0"));
    CHECK(stats.mass_deficit == R("0"));
}

TEST_CASE("pgf: die-6 interior values") {
    const auto stats = pgf(make_die(6), RunKind::Strict, Position::Interior, 8);
    CHECK(stats.pgf_coeffs[1] == R("4/9"));
    // start-prob identity at n=1: P(N=1 | started) * (1 - L2) = L1 - 2 L2 + L3.
    CHECK(stats.pgf_coeffs[1] * (R("1") - R("5/12")) == R("1") - R("2") * R("5/12") + R("5/54"));
}

TEST_CASE("pgf: error paths") {
    CHECK_THROWS_AS(pgf(degenerate_singleton(), RunKind::NonStrict, Position::Initial, 8),
                    DegenerateMeasureError);
    const auto short_mass = parse_measure_spec(R"({"type":"total","diffuse":0.9,"atoms":[]})");
    CHECK_THROWS_AS(pgf(short_mass, RunKind::Strict, Position::Initial, 8), NotProbabilityError);
}

TEST_CASE("means: die 6") {
    const auto die = make_die(6);
    CHECK(mean(die, RunKind::Strict, Position::Interior) == R("12/7"));
    CHECK(mean(die, RunKind::NonStrict, Position::Interior) == R("12/5"));
    CHECK(mean(die, RunKind::Strict, Position::Initial) == R("70993/46656"));
    CHECK(mean(die, RunKind::NonStrict, Position::Initial) == R("31031/15625"));
}

TEST_CASE("means: dart and the float fallback") {
    const auto dart = make_dart(Rational(1, 2));
    CHECK(mean(dart, RunKind::Strict, Position::Interior) == R("8/5"));
    CHECK(mean(dart, RunKind::NonStrict, Position::Interior) == R("8/3"));

    // Diffuse mass forces the initial mean to the float path even in rational mode.
    const Number initial = mean(dart, RunKind::Strict, Position::Initial);
    CHECK_FALSE(initial.is_rational());
    CHECK(initial.dbl() == doctest::Approx(std::exp(0.5) * 1.5 - 1.0).epsilon(1e-12));
}

TEST_CASE("means: truncated geometric approaches the closed forms") {
    const auto bulb = make_bulb(Rational(1, 2), rational_from_double(1e-12));
    CHECK(mean(bulb, RunKind::Strict, Position::Interior).to_double() ==
          doctest::Approx(1.5).epsilon(1e-9));
    CHECK(mean(bulb, RunKind::NonStrict, Position::Interior).to_double() ==
          doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("variances") {
    const double e = std::exp(1.0);
    const auto diffuse = make_diffuse_unit();
    for (const RunKind kind : {RunKind::Strict, RunKind::NonStrict}) {
        CHECK(variance(diffuse, kind, Position::Initial) == doctest::Approx(e * (3 - e)).epsilon(1e-12));
        CHECK(variance(diffuse, kind, Position::Interior) == doctest::Approx(4 * e - 10).epsilon(1e-12));
        CHECK(mean(diffuse, kind, Position::Interior) == R("2"));
        CHECK(mean(diffuse, kind, Position::Initial).to_double() ==
              doctest::Approx(e - 1).epsilon(1e-12));
    }
    CHECK(variance(degenerate_singleton(), RunKind::Strict, Position::Initial) ==
          doctest::Approx(0.0));
    CHECK(mean(degenerate_singleton(), RunKind::Strict, Position::Initial) == R("1"));
}

TEST_CASE("total_order_stats agrees with the generic path") {
    std::vector<MeasureExpr> total_orders;
    total_orders.push_back(make_two_atom(Rational(1, 3)));
    total_orders.push_back(make_die(2));
    total_orders.push_back(make_die(6));
    total_orders.push_back(make_dart(Rational(1, 2)));
    total_orders.push_back(make_bulb(Rational(1, 2), Rational(1, 64)));
    total_orders.push_back(make_diffuse_unit());

    for (const auto& expr : total_orders) {
        for (const RunKind kind : {RunKind::Strict, RunKind::NonStrict}) {
            const auto [closed_init, closed_int] = total_order_stats(expr, kind, 16);
            const auto generic_init = full_statistics(expr, kind, Position::Initial, 16);
            const auto generic_int = full_statistics(expr, kind, Position::Interior, 16);

            CHECK(closed_init.mean->to_double() ==
                  doctest::Approx(generic_init.mean->to_double()).epsilon(1e-12));
            CHECK(closed_int.mean->to_double() ==
                  doctest::Approx(generic_int.mean->to_double()).epsilon(1e-12));
            CHECK(*closed_init.variance ==
                  doctest::Approx(*generic_init.variance).epsilon(1e-10));
            CHECK(*closed_int.variance ==
                  doctest::Approx(*generic_int.variance).epsilon(1e-10));
            if (closed_int.mean->is_rational() && generic_int.mean->is_rational()) {
                CHECK(*closed_int.mean == *generic_int.mean);
            }
        }
    }
    CHECK_THROWS_AS(total_order_stats(make_even_die(2), RunKind::Strict, 8), NotTotalOrderError);
}

TEST_CASE("total_order_stats: dart interior means match the closed fractions") {
    const auto [init_s, int_s] = total_order_stats(make_dart(Rational(1, 2)), RunKind::Strict, 8);
    CHECK(*int_s.mean == R("8/5"));
    const auto [init_n, int_n] = total_order_stats(make_dart(Rational(1, 2)), RunKind::NonStrict, 8);
    CHECK(*int_n.mean == R("8/3"));
}

TEST_CASE("even die statistics") {
    const auto means3 = even_die_stats(3);
    CHECK(means3.strict_interior == R("6/5"));
    CHECK(means3.nonstrict_interior == R("3/2"));
    CHECK(means3.strict_initial == R("127/108"));
    CHECK(means3.nonstrict_initial == R("182/125"));

    // General n: interior means are 4n/(3n+1) and 4n/(3n-1).
    for (int n = 1; n <= 5; ++n) {
        const auto means = even_die_stats(n);
        CHECK(means.strict_interior.rat() == Rational(4 * n, 3 * n + 1));
        CHECK(means.nonstrict_interior.rat() == Rational(4 * n, 3 * n - 1));
        CHECK(means.strict_initial.rat() == 2 * rational_pow(Rational(2 * n + 1, 2 * n), n) - 2);
        CHECK(means.nonstrict_initial.rat() ==
              2 * rational_pow(Rational(2 * n, 2 * n - 1), n) - 2);
    }
}

TEST_CASE("interior mean three ways") {
    std::vector<MeasureExpr> corpus;
    corpus.push_back(make_die(6));
    corpus.push_back(make_two_atom(Rational(1, 3)));
    corpus.push_back(make_even_die(3));
    corpus.push_back(make_nested_tree());
    for (const auto& expr : corpus) {
        for (const RunKind kind : {RunKind::Strict, RunKind::NonStrict}) {
            const Number l2 = second_coefficient(expr, kind);
            const Number via_l2 = R("1") / (R("1") - l2);
            const Number via_pp0 = R("2") / (R("2") - R("2") * l2); // P''(0) = 2 L2
            const Number direct = mean(expr, kind, Position::Interior);
            CHECK(direct == via_l2);
            CHECK(direct == via_pp0);

            const auto stats = pgf(expr, kind, Position::Interior, kDefaultOrder);
            double weighted = 0.0;
            for (std::size_t n = 0; n < stats.pgf_coeffs.size(); ++n) {
                weighted += static_cast<double>(n) * stats.pgf_coeffs[n].to_double();
            }
            const double slack =
                stats.mass_deficit.to_double() * static_cast<double>(stats.pgf_coeffs.size()) + 1e-9;
            CHECK(std::abs(weighted - direct.to_double()) <= slack);
        }
    }
}

TEST_CASE("pgf normalization and coefficient ranges") {
    std::vector<MeasureExpr> corpus;
    corpus.push_back(make_die(6));
    corpus.push_back(make_two_atom(Rational(1, 3)));
    corpus.push_back(make_even_die(2));
    corpus.push_back(make_parallel_singletons());
    corpus.push_back(make_nested_tree());
    corpus.push_back(make_dart(Rational(1, 2)));
    corpus.push_back(make_diffuse_unit());
    for (const auto& expr : corpus) {
        for (const RunKind kind : {RunKind::Strict, RunKind::NonStrict}) {
            for (const Position position : {Position::Initial, Position::Interior}) {
                const auto stats = pgf(expr, kind, position, kDefaultOrder);
                Number sum = R("0");
                for (const auto& c : stats.pgf_coeffs) {
                    CHECK(c.rat() >= 0);
                    CHECK(c.rat() <= 1);
                    sum += c;
                }
                CHECK(sum + stats.mass_deficit == R("1")); // exact in rational mode
                CHECK(stats.mass_deficit.rat() >= 0);
            }
        }
    }
}

TEST_CASE("interior mean ranges for total orders") {
    std::vector<MeasureExpr> total_orders;
    total_orders.push_back(make_die(2));
    total_orders.push_back(make_die(6));
    total_orders.push_back(make_two_atom(Rational(1, 3)));
    total_orders.push_back(make_dart(Rational(1, 2)));
    total_orders.push_back(make_diffuse_unit());
    for (const auto& expr : total_orders) {
        const double strict_mean = mean(expr, RunKind::Strict, Position::Interior).to_double();
        const double nonstrict_mean = mean(expr, RunKind::NonStrict, Position::Interior).to_double();
        CHECK(strict_mean > 1.0);
        CHECK(strict_mean <= 2.0);
        CHECK(nonstrict_mean >= 2.0);
    }
}

TEST_CASE("closed forms match finite differences of the pgf") {
    std::vector<MeasureExpr> corpus;
    corpus.push_back(make_die(6));
    corpus.push_back(make_two_atom(Rational(1, 3)));
    corpus.push_back(make_dart(Rational(1, 2)));
    const long double h = 1e-5L;
    for (const auto& expr : corpus) {
        for (const RunKind kind : {RunKind::Strict, RunKind::NonStrict}) {
            for (const Position position : {Position::Initial, Position::Interior}) {
                const auto stats = full_statistics(expr, kind, position, kDefaultOrder);
                const long double up = pgf_value(stats, 1.0L + h);
                const long double at = pgf_value(stats, 1.0L);
                const long double down = pgf_value(stats, 1.0L - h);
                const double fd_mean = static_cast<double>((up - down) / (2.0L * h));
                const double g2 = static_cast<double>((up - 2.0L * at + down) / (h * h));
                const double fd_var =
                    g2 + fd_mean - fd_mean * fd_mean; // var = G'' + G' - G'^2 at z=1
                CHECK(stats.mean->to_double() == doctest::Approx(fd_mean).epsilon(1e-5));
                CHECK(*stats.variance == doctest::Approx(fd_var).epsilon(1e-5));
            }
        }
    }
}
