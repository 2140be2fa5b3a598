#pragma once

#include "runlen/number.hpp"
#include "runlen/run_kind.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace runlen {

inline constexpr int kDefaultOrder = 64;

/// The first order+1 coefficients of a formal power series in one
/// indeterminate. All coefficients share one numeric mode; operations touching
/// two series require equal modes and truncate to the shorter order.
class TruncatedSeries {
public:
    explicit TruncatedSeries(std::vector<Number> coeffs);

    static TruncatedSeries zero(int order, NumericMode mode);
    static TruncatedSeries one(int order, NumericMode mode);
    static TruncatedSeries constant(const Number& c, int order);
    /// c0 + c1 Z, padded with zeros.
    static TruncatedSeries linear(const Number& c0, const Number& c1, int order);

    int order() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    NumericMode mode() const noexcept { return mode_; }
    const Number& coeff(std::size_t n) const { return coeffs_.at(n); }
    const std::vector<Number>& coeffs() const noexcept { return coeffs_; }

    friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) {
        return a.mode_ == b.mode_ && a.coeffs_ == b.coeffs_;
    }

private:
    std::vector<Number> coeffs_;
    NumericMode mode_;
};

/// Coefficient-wise sum, truncated to the shorter order.
TruncatedSeries add(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries sub(const TruncatedSeries& a, const TruncatedSeries& b);

/// Cauchy product, truncated to the shorter order.
TruncatedSeries mul(const TruncatedSeries& a, const TruncatedSeries& b);

/// Coefficients c^n / n!; exact when c is rational.
TruncatedSeries exp_series(const Number& c, int order);

/// Coefficients m^n, i.e. the expansion of 1 / (1 - m Z).
TruncatedSeries geometric_inverse(const Number& m, int order);

/// Left fold of mul; the empty product is the series 1 at the fallback
/// order/mode.
TruncatedSeries product_all(const std::vector<TruncatedSeries>& factors,
                            int order_if_empty = kDefaultOrder,
                            NumericMode mode_if_empty = NumericMode::Rational);

/// Explicit coefficient-mode conversion (rational -> float rounds).
TruncatedSeries convert_mode(const TruncatedSeries& s, NumericMode target);

/// Inputs for the truncation tail bound attached to point evaluations. For
/// Strict the tail uses total_mass^n / n!; for NonStrict it uses the geometric
/// bounds L_{2n} <= l2^n and L_{2n+1} <= l2^n l1, finite only when l2 z^2 < 1.
struct SeriesTailModel {
    RunKind kind = RunKind::Strict;
    double total_mass = 0.0;
    double l1 = 0.0;
    double l2 = 0.0;
};

struct HornerEval {
    Number value;
    double tail_bound = 0.0;
};

/// Horner evaluation of the truncated polynomial. The tail bound covers the
/// discarded coefficients of the run-function model when one is supplied;
/// callers may ignore it.
HornerEval eval_horner(const TruncatedSeries& s, const Number& z,
                       const std::optional<SeriesTailModel>& model = std::nullopt);

double series_tail_bound(const SeriesTailModel& model, int order, double abs_z);

} // namespace runlen
