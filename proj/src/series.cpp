#include "runlen/series.hpp"

#include "runlen/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace runlen {

TruncatedSeries::TruncatedSeries(std::vector<Number> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw InvalidArgumentError("a truncated series needs at least the constant term");
    mode_ = coeffs_.front().mode();
    for (const auto& c : coeffs_) {
        if (c.mode() != mode_) throw ModeError("series coefficients mix rational and float modes");
    }
}

TruncatedSeries TruncatedSeries::zero(int order, NumericMode mode) {
    return constant(Number::zero(mode), order);
}

TruncatedSeries TruncatedSeries::one(int order, NumericMode mode) {
    return constant(Number::one(mode), order);
}

TruncatedSeries TruncatedSeries::constant(const Number& c, int order) {
    if (order < 0) throw InvalidArgumentError("series order must be non-negative");
    std::vector<Number> coeffs(static_cast<std::size_t>(order) + 1, Number::zero(c.mode()));
    coeffs[0] = c;
    return TruncatedSeries(std::move(coeffs));
}

TruncatedSeries TruncatedSeries::linear(const Number& c0, const Number& c1, int order) {
    TruncatedSeries s = constant(c0, order);
    if (order >= 1) s.coeffs_[1] = c1;
    return s;
}

namespace {

void check_modes(const TruncatedSeries& a, const TruncatedSeries& b, const char* op) {
    if (a.mode() != b.mode()) {
        throw ModeError(std::string("series mode mismatch in '") + op + "'");
    }
}

} // namespace

TruncatedSeries add(const TruncatedSeries& a, const TruncatedSeries& b) {
    check_modes(a, b, "add");
    const std::size_t n = std::min(a.coeffs().size(), b.coeffs().size());
    std::vector<Number> out(n, Number::zero(a.mode()));
    for (std::size_t i = 0; i < n; ++i) out[i] = a.coeff(i) + b.coeff(i);
    return TruncatedSeries(std::move(out));
}

TruncatedSeries sub(const TruncatedSeries& a, const TruncatedSeries& b) {
    check_modes(a, b, "sub");
    const std::size_t n = std::min(a.coeffs().size(), b.coeffs().size());
    std::vector<Number> out(n, Number::zero(a.mode()));
    for (std::size_t i = 0; i < n; ++i) out[i] = a.coeff(i) - b.coeff(i);
    return TruncatedSeries(std::move(out));
}

TruncatedSeries mul(const TruncatedSeries& a, const TruncatedSeries& b) {
    check_modes(a, b, "mul");
    const std::size_t n = std::min(a.coeffs().size(), b.coeffs().size());
    std::vector<Number> out(n, Number::zero(a.mode()));
    for (std::size_t i = 0; i < n; ++i) {
        if (a.coeff(i).is_zero()) continue;
        for (std::size_t j = 0; i + j < n; ++j) {
            out[i + j] += a.coeff(i) * b.coeff(j);
        }
    }
    return TruncatedSeries(std::move(out));
}

TruncatedSeries exp_series(const Number& c, int order) {
    if (c.is_negative()) throw InvalidArgumentError("exp_series requires a non-negative argument");
    if (order < 0) throw InvalidArgumentError("series order must be non-negative");
    std::vector<Number> coeffs;
    coeffs.reserve(static_cast<std::size_t>(order) + 1);
    Number term = Number::one(c.mode());
    coeffs.push_back(term);
    for (int n = 1; n <= order; ++n) {
        term = term * c / Number::from_int(n, c.mode());
        coeffs.push_back(term);
    }
    return TruncatedSeries(std::move(coeffs));
}

TruncatedSeries geometric_inverse(const Number& m, int order) {
    if (m.is_negative()) throw InvalidArgumentError("geometric_inverse requires a non-negative argument");
    if (order < 0) throw InvalidArgumentError("series order must be non-negative");
    std::vector<Number> coeffs;
    coeffs.reserve(static_cast<std::size_t>(order) + 1);
    Number term = Number::one(m.mode());
    coeffs.push_back(term);
    for (int n = 1; n <= order; ++n) {
        term = term * m;
        coeffs.push_back(term);
    }
    return TruncatedSeries(std::move(coeffs));
}

TruncatedSeries product_all(const std::vector<TruncatedSeries>& factors,
                            int order_if_empty, NumericMode mode_if_empty) {
    if (factors.empty()) return TruncatedSeries::one(order_if_empty, mode_if_empty);
    TruncatedSeries acc = factors.front();
    for (std::size_t i = 1; i < factors.size(); ++i) acc = mul(acc, factors[i]);
    return acc;
}

TruncatedSeries convert_mode(const TruncatedSeries& s, NumericMode target) {
    if (s.mode() == target) return s;
    std::vector<Number> coeffs;
    coeffs.reserve(s.coeffs().size());
    for (const auto& c : s.coeffs()) coeffs.push_back(c.converted_to(target));
    return TruncatedSeries(std::move(coeffs));
}

double series_tail_bound(const SeriesTailModel& model, int order, double abs_z) {
    if (abs_z < 0) abs_z = -abs_z;
    if (model.kind == RunKind::Strict) {
        const double mz = model.total_mass * abs_z;
        if (mz == 0.0) return 0.0;
        // sum_{n > N} (M|z|)^n / n!  <=  (M|z|)^{N+1} / (N+1)! * e^{M|z|}
        const double log_bound =
            (order + 1) * std::log(mz) - std::lgamma(static_cast<double>(order) + 2.0) + mz;
        return std::exp(log_bound);
    }
    const double q = model.l2 * abs_z * abs_z;
    if (q >= 1.0) return std::numeric_limits<double>::infinity();
    // Even terms n = 2k start at k = ceil((N+1)/2); odd terms n = 2k+1 at k = ceil(N/2).
    const int ke = (order + 2) / 2;
    const int ko = (order + 1) / 2;
    const double even_part = std::pow(q, ke) / (1.0 - q);
    const double odd_part = model.l1 * abs_z * std::pow(q, ko) / (1.0 - q);
    return even_part + odd_part;
}

HornerEval eval_horner(const TruncatedSeries& s, const Number& z,
                       const std::optional<SeriesTailModel>& model) {
    if (z.mode() != s.mode()) throw ModeError("evaluation point mode differs from series mode");
    Number acc = Number::zero(s.mode());
    for (std::size_t i = s.coeffs().size(); i-- > 0;) {
        acc = acc * z + s.coeff(i);
    }
    HornerEval out{acc, 0.0};
    if (model) out.tail_bound = series_tail_bound(*model, s.order(), z.to_double());
    return out;
}

} // namespace runlen
