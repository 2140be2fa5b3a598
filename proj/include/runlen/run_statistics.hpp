#pragma once

#include "runlen/measure.hpp"
#include "runlen/run_functions.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace runlen {

struct RunStatistics {
    RunKind kind = RunKind::Strict;
    Position position = Position::Initial;
    /// pgf_coeffs[n] = P(N = n) for n = 0..order; index 0 is always zero.
    std::vector<Number> pgf_coeffs;
    /// Mass above the truncation order: L_{order+1} at the initial position,
    /// (L_{order+1} - L_{order+2}) / (1 - L_2) at interior positions. With
    /// this closed form, sum(pgf_coeffs) + mass_deficit == 1 is an exact
    /// identity in rational mode.
    Number mass_deficit;
    std::optional<Number> mean;
    std::optional<double> variance;
};

/// Distribution of the run length at the given position, from the run
/// coefficients: initial P(N=n) = L_n - L_{n+1}, interior
/// P(N=n | run starts) = (L_n - 2 L_{n+1} + L_{n+2}) / (1 - L_2).
RunStatistics pgf(const MeasureExpr& expr, RunKind kind, Position position,
                  int order = kDefaultOrder);

/// Initial: P(1) - 1, exact for purely atomic rational measures, float
/// otherwise (visible as the result's mode). Interior: 1 / (1 - L_2).
Number mean(const MeasureExpr& expr, RunKind kind, Position position);

/// Initial: P(1) - P(1)^2 + 2 P'(1). Interior:
/// (4 P(1) - 6) / (2 - P''(0)) - 4 / (2 - P''(0))^2.
double variance(const MeasureExpr& expr, RunKind kind, Position position);

/// pgf plus mean and variance in one bundle.
RunStatistics full_statistics(const MeasureExpr& expr, RunKind kind, Position position,
                              int order = kDefaultOrder);

/// (Initial, Interior) statistics of a total order with the means and
/// variances taken from the atom-sum closed forms instead of the generic
/// recursion. Throws NotTotalOrderError on parallel branching.
std::pair<RunStatistics, RunStatistics> total_order_stats(const MeasureExpr& expr, RunKind kind,
                                                          int order = kDefaultOrder);

struct EvenDieMeans {
    Number strict_initial;
    Number nonstrict_initial;
    Number strict_interior;
    Number nonstrict_interior;
};

/// All four run-length means of the parity die with 2n faces, computed
/// through the full parallel-composition pipeline. Exact rationals.
EvenDieMeans even_die_stats(int n);

} // namespace runlen
