#include "runlen/run_statistics.hpp"

#include "runlen/errors.hpp"
#include "runlen/examples.hpp"

#include <cmath>

namespace runlen {

namespace {

void require_probability(const MeasureExpr& expr, RunKind kind) {
    const ValidationReport report = validate(expr);
    if (!report.is_valid) {
        std::string msg = "invalid measure";
        for (const auto& issue : report.issues) msg += "; " + issue;
        throw NotProbabilityError(msg);
    }
    if (!report.is_probability) {
        throw NotProbabilityError("run statistics need a probability measure; total mass is " +
                                  report.total_mass.str());
    }
    if (kind == RunKind::NonStrict && report.is_degenerate) {
        throw DegenerateMeasureError("non-strict run lengths are infinite for a degenerate measure");
    }
}

} // namespace

RunStatistics pgf(const MeasureExpr& expr, RunKind kind, Position position, int order) {
    require_probability(expr, kind);
    if (order < 1) order = 1;

    const RunFunctionResult rf = run_coefficients(expr, kind, order + 2);
    const TruncatedSeries& L = rf.series;
    const NumericMode mode = L.mode();

    RunStatistics out;
    out.kind = kind;
    out.position = position;
    out.pgf_coeffs.reserve(static_cast<std::size_t>(order) + 1);

    if (position == Position::Initial) {
        for (int n = 0; n <= order; ++n) {
            out.pgf_coeffs.push_back(L.coeff(n) - L.coeff(n + 1));
        }
        out.mass_deficit = L.coeff(order + 1);
    } else {
        const Number one = Number::one(mode);
        const Number two = Number::from_int(2, mode);
        const Number started = one - L.coeff(2); // P(a run starts at i >= 1)
        out.pgf_coeffs.push_back(Number::zero(mode));
        for (int n = 1; n <= order; ++n) {
            const Number second_diff = L.coeff(n) - two * L.coeff(n + 1) + L.coeff(n + 2);
            out.pgf_coeffs.push_back(second_diff / started);
        }
        out.mass_deficit = (L.coeff(order + 1) - L.coeff(order + 2)) / started;
    }
    return out;
}

Number mean(const MeasureExpr& expr, RunKind kind, Position position) {
    require_probability(expr, kind);
    if (position == Position::Interior) {
        const Number l2 = second_coefficient(expr, kind);
        const Number one = Number::one(l2.mode());
        return one / (one - l2);
    }
    if (expr.mode() == NumericMode::Rational && is_purely_atomic(expr)) {
        return Number::rational(eval_run_function_exact(expr, kind, Rational(1)) - 1);
    }
    return Number::real(eval_run_function(expr, kind, 1.0) - 1.0);
}

double variance(const MeasureExpr& expr, RunKind kind, Position position) {
    require_probability(expr, kind);
    const ValueDeriv p = eval_run_function_with_derivative(expr, kind, 1.0);
    if (position == Position::Initial) {
        return p.value - p.value * p.value + 2.0 * p.derivative;
    }
    const double denom = 2.0 - 2.0 * second_coefficient(expr, kind).to_double(); // 2 - P''(0)
    return (4.0 * p.value - 6.0) / denom - 4.0 / (denom * denom);
}

RunStatistics full_statistics(const MeasureExpr& expr, RunKind kind, Position position, int order) {
    RunStatistics stats = pgf(expr, kind, position, order);
    stats.mean = mean(expr, kind, position);
    stats.variance = variance(expr, kind, position);
    return stats;
}

std::pair<RunStatistics, RunStatistics> total_order_stats(const MeasureExpr& expr, RunKind kind,
                                                          int order) {
    const auto flat = flatten_total_order(expr);
    if (!flat) throw NotTotalOrderError("total_order_stats requires a total order");
    require_probability(expr, kind);

    const NumericMode mode = expr.mode();
    const bool strict = kind == RunKind::Strict;

    // Atom sums feeding the closed forms.
    Number sum_sq = Number::zero(mode);
    double prod = 1.0;       // prod (1 + m) or prod 1/(1 - m)
    double sum_frac = 0.0;   // sum m^2/(1 + m) or m^2/(1 - m)
    for (const auto& atom : flat->atoms) {
        sum_sq += atom.mass * atom.mass;
        const double m = atom.mass.to_double();
        if (strict) {
            prod *= 1.0 + m;
            sum_frac += m * m / (1.0 + m);
        } else {
            prod /= 1.0 - m;
            sum_frac += m * m / (1.0 - m);
        }
    }
    const double p1 = std::exp(flat->diffuse.to_double()) * prod;

    RunStatistics initial = pgf(expr, kind, Position::Initial, order);
    RunStatistics interior = pgf(expr, kind, Position::Interior, order);

    // E[N_0] = P(1) - 1 with P(1) the finite product; exact when it is rational.
    if (mode == NumericMode::Rational && flat->diffuse.is_zero()) {
        initial.mean = Number::rational(eval_run_function_exact(expr, kind, Rational(1)) - 1);
    } else {
        initial.mean = Number::real(p1 - 1.0);
    }
    initial.variance = p1 * (3.0 - p1 + (strict ? -2.0 : 2.0) * sum_frac);

    const Number one = Number::one(mode);
    const Number two = Number::from_int(2, mode);
    const Number denom = strict ? one + sum_sq : one - sum_sq;
    interior.mean = two / denom;
    const double mi = interior.mean->to_double();
    interior.variance = mi * (-3.0 + 2.0 * p1 - mi);

    return {std::move(initial), std::move(interior)};
}

EvenDieMeans even_die_stats(int n) {
    const MeasureExpr expr = make_even_die(n, NumericMode::Rational);
    EvenDieMeans out;
    out.strict_initial = mean(expr, RunKind::Strict, Position::Initial);
    out.nonstrict_initial = mean(expr, RunKind::NonStrict, Position::Initial);
    out.strict_interior = mean(expr, RunKind::Strict, Position::Interior);
    out.nonstrict_interior = mean(expr, RunKind::NonStrict, Position::Interior);
    return out;
}

} // namespace runlen
