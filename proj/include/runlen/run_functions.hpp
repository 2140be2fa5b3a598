#pragma once

#include "runlen/measure.hpp"
#include "runlen/run_kind.hpp"
#include "runlen/series.hpp"

namespace runlen {

struct RunFunctionResult {
    TruncatedSeries series;
    RunKind kind = RunKind::Strict;
    /// Bound on |truncated P(1) - exact P(1)|: dropped-mass contribution from
    /// truncated countable families plus the series tail past the truncation
    /// order. Infinite when the non-strict tail cannot be bounded.
    double trunc_error_at_one = 0.0;
};

/// Coefficients L_0..L_order of the run function, by structural recursion:
/// total-order components use exp(m_d Z) times the per-atom factors, series
/// nodes multiply, parallel nodes combine as 1 + sum(child - 1). Exact in
/// rational mode.
RunFunctionResult run_coefficients(const MeasureExpr& expr, RunKind kind, int order = kDefaultOrder);

/// Closed-form point evaluation (float path). Non-strict evaluation throws
/// PoleError when any factor 1 - m_alpha z is within 1e-12 of zero.
double eval_run_function(const MeasureExpr& expr, RunKind kind, double z);

/// Mode-checked variant: a rational evaluation point throws ModeError, since
/// exp of a non-zero rational is irrational. Use eval_run_function_exact for
/// the purely atomic case.
Number eval_run_function(const MeasureExpr& expr, RunKind kind, const Number& z);

/// Exact rational evaluation, available when no leaf carries diffuse mass.
Rational eval_run_function_exact(const MeasureExpr& expr, RunKind kind, const Rational& z);

struct ValueDeriv {
    double value = 0.0;
    double derivative = 0.0;
};

/// Forward-mode (value, d/dz) pairs pushed through the same recursion as
/// eval_run_function.
ValueDeriv eval_run_function_with_derivative(const MeasureExpr& expr, RunKind kind, double z);

/// Exact L_2. Total orders use (|mu|^2 -+ sum m_alpha^2) / 2 with - for strict
/// and + for non-strict; other trees fall back to the coefficient recursion.
Number second_coefficient(const MeasureExpr& expr, RunKind kind);

/// |P_{mu1}(z) - P_{mu2}(z)| <= gap * |z| * p_bound^2, where gap bounds
/// ||mu1 - mu2|| and p_bound bounds both P(|z|) values.
double truncation_error_bound(double full_mass_gap, double z, double p_bound);

/// Tail model matching a computed run-function series, for eval_horner.
SeriesTailModel tail_model_for(const RunFunctionResult& rf);

} // namespace runlen
