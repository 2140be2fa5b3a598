#include "runlen/run_functions.hpp"

#include "runlen/errors.hpp"

#include <cmath>
#include <limits>

namespace runlen {

namespace {

constexpr double kPoleTolerance = 1e-12;

TruncatedSeries leaf_coefficients(const FlatTotalOrder& flat, RunKind kind, int order) {
    std::vector<TruncatedSeries> factors;
    factors.reserve(flat.atoms.size() + 1);
    factors.push_back(exp_series(flat.diffuse, order));
    const NumericMode mode = flat.diffuse.mode();
    for (const auto& atom : flat.atoms) {
        if (kind == RunKind::Strict) {
            factors.push_back(TruncatedSeries::linear(Number::one(mode), atom.mass, order));
        } else {
            factors.push_back(geometric_inverse(atom.mass, order));
        }
    }
    return product_all(factors, order, mode);
}

TruncatedSeries coefficients_node(const MeasureExpr& expr, RunKind kind, int order) {
    if (auto flat = flatten_total_order(expr)) {
        return leaf_coefficients(*flat, kind, order);
    }
    if (expr.is_series()) {
        const auto& children = expr.as_series().children;
        TruncatedSeries acc = coefficients_node(children.front(), kind, order);
        for (std::size_t i = 1; i < children.size(); ++i) {
            acc = mul(acc, coefficients_node(children[i], kind, order));
        }
        return acc;
    }
    const auto& children = expr.as_parallel().children;
    const NumericMode mode = expr.mode();
    const TruncatedSeries unit = TruncatedSeries::one(order, mode);
    TruncatedSeries acc = unit;
    for (const auto& child : children) {
        acc = add(acc, sub(coefficients_node(child, kind, order), unit));
    }
    return acc;
}

} // namespace

SeriesTailModel tail_model_for(const RunFunctionResult& rf) {
    SeriesTailModel model;
    model.kind = rf.kind;
    model.l1 = rf.series.coeff(1).to_double();
    model.total_mass = model.l1;
    model.l2 = rf.series.order() >= 2 ? rf.series.coeff(2).to_double() : 0.0;
    return model;
}

RunFunctionResult run_coefficients(const MeasureExpr& expr, RunKind kind, int order) {
    if (order < 2) order = 2; // L_0, L_1, L_2 are always meaningful
    RunFunctionResult result{coefficients_node(expr, kind, order), kind, 0.0};

    const double gap = total_dropped_mass(expr).to_double();
    const SeriesTailModel model = tail_model_for(result);
    double p_bound;
    if (kind == RunKind::Strict) {
        p_bound = std::exp(model.total_mass + gap);
    } else {
        // Inflate the truncated measure's L_2 to cover the untruncated one:
        // |L_2(full) - L_2(trunc)| <= gap * (||mu_full|| + ||mu_trunc||).
        const double l1_full = model.l1 + gap;
        const double l2_full = model.l2 + gap * (model.l1 + l1_full);
        p_bound = l2_full < 1.0 ? (1.0 + l1_full) / (1.0 - l2_full)
                                : std::numeric_limits<double>::infinity();
    }
    result.trunc_error_at_one =
        truncation_error_bound(gap, 1.0, p_bound) + series_tail_bound(model, order, 1.0);
    return result;
}

namespace {

double eval_node(const MeasureExpr& expr, RunKind kind, double z) {
    if (expr.is_leaf()) {
        const TotalLeaf& leaf = expr.as_leaf();
        double v = std::exp(leaf.diffuse.to_double() * z);
        for (const auto& atom : leaf.atoms) {
            const double m = atom.mass.to_double();
            if (kind == RunKind::Strict) {
                v *= 1.0 + m * z;
            } else {
                const double f = 1.0 - m * z;
                if (std::abs(f) < kPoleTolerance) {
                    throw PoleError("non-strict run function has a pole at z = 1/" + std::to_string(m));
                }
                v /= f;
            }
        }
        return v;
    }
    if (expr.is_series()) {
        double v = 1.0;
        for (const auto& child : expr.as_series().children) v *= eval_node(child, kind, z);
        return v;
    }
    double v = 1.0;
    for (const auto& child : expr.as_parallel().children) v += eval_node(child, kind, z) - 1.0;
    return v;
}

ValueDeriv eval_node_deriv(const MeasureExpr& expr, RunKind kind, double z) {
    if (expr.is_leaf()) {
        const TotalLeaf& leaf = expr.as_leaf();
        const double md = leaf.diffuse.to_double();
        ValueDeriv acc{std::exp(md * z), md * std::exp(md * z)};
        for (const auto& atom : leaf.atoms) {
            const double m = atom.mass.to_double();
            ValueDeriv factor;
            if (kind == RunKind::Strict) {
                factor = {1.0 + m * z, m};
            } else {
                const double f = 1.0 - m * z;
                if (std::abs(f) < kPoleTolerance) {
                    throw PoleError("non-strict run function has a pole at z = 1/" + std::to_string(m));
                }
                factor = {1.0 / f, m / (f * f)};
            }
            acc = {acc.value * factor.value, acc.value * factor.derivative + acc.derivative * factor.value};
        }
        return acc;
    }
    if (expr.is_series()) {
        ValueDeriv acc{1.0, 0.0};
        for (const auto& child : expr.as_series().children) {
            const ValueDeriv c = eval_node_deriv(child, kind, z);
            acc = {acc.value * c.value, acc.value * c.derivative + acc.derivative * c.value};
        }
        return acc;
    }
    ValueDeriv acc{1.0, 0.0};
    for (const auto& child : expr.as_parallel().children) {
        const ValueDeriv c = eval_node_deriv(child, kind, z);
        acc.value += c.value - 1.0;
        acc.derivative += c.derivative;
    }
    return acc;
}

Rational eval_node_exact(const MeasureExpr& expr, RunKind kind, const Rational& z) {
    if (expr.is_leaf()) {
        const TotalLeaf& leaf = expr.as_leaf();
        if (!leaf.diffuse.is_zero()) {
            throw ModeError("exact evaluation is unavailable with diffuse mass:"
                            " exp of a non-zero rational is irrational");
        }
        Rational v(1);
        for (const auto& atom : leaf.atoms) {
            const Rational m = atom.mass.to_rational();
            if (kind == RunKind::Strict) {
                v *= 1 + m * z;
            } else {
                const Rational f = 1 - m * z;
                if (f == 0) throw PoleError("non-strict run function has a pole at this z");
                v /= f;
            }
        }
        return v;
    }
    if (expr.is_series()) {
        Rational v(1);
        for (const auto& child : expr.as_series().children) v *= eval_node_exact(child, kind, z);
        return v;
    }
    Rational v(1);
    for (const auto& child : expr.as_parallel().children) v += eval_node_exact(child, kind, z) - 1;
    return v;
}

} // namespace

double eval_run_function(const MeasureExpr& expr, RunKind kind, double z) {
    return eval_node(expr, kind, z);
}

Number eval_run_function(const MeasureExpr& expr, RunKind kind, const Number& z) {
    if (z.is_rational()) {
        throw ModeError("eval_run_function works in float mode only (exp of a rational is"
                        " irrational); use eval_run_function_exact for purely atomic measures");
    }
    return Number::real(eval_node(expr, kind, z.dbl()));
}

Rational eval_run_function_exact(const MeasureExpr& expr, RunKind kind, const Rational& z) {
    return eval_node_exact(expr, kind, z);
}

ValueDeriv eval_run_function_with_derivative(const MeasureExpr& expr, RunKind kind, double z) {
    return eval_node_deriv(expr, kind, z);
}

Number second_coefficient(const MeasureExpr& expr, RunKind kind) {
    if (auto flat = flatten_total_order(expr)) {
        const NumericMode mode = flat->diffuse.mode();
        Number total = flat->diffuse;
        Number sum_sq = Number::zero(mode);
        for (const auto& atom : flat->atoms) {
            total += atom.mass;
            sum_sq += atom.mass * atom.mass;
        }
        const Number two = Number::from_int(2, mode);
        const Number sq = total * total;
        return kind == RunKind::Strict ? (sq - sum_sq) / two : (sq + sum_sq) / two;
    }
    return run_coefficients(expr, kind, 2).series.coeff(2);
}

double truncation_error_bound(double full_mass_gap, double z, double p_bound) {
    if (full_mass_gap < 0 || p_bound < 0) {
        throw InvalidArgumentError("truncation_error_bound requires non-negative inputs");
    }
    return full_mass_gap * std::abs(z) * p_bound * p_bound;
}

} // namespace runlen
