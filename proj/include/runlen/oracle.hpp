#pragma once

#include "runlen/measure.hpp"
#include "runlen/run_kind.hpp"

#include <cstdint>
#include <vector>

namespace runlen {

enum class Relation { Less, Equal, Greater, Incomparable };

struct OrderedAtom {
    Rational mass;
    std::vector<int> path; // child indices root -> leaf
    double pos = 0.0;      // leaf-local position
};

/// Materialization of a purely atomic measure: every atom with its exact mass
/// plus the full pairwise order matrix, derived directly from the tree
/// structure (independent of the series/sampler machinery).
class AtomTable {
public:
    static AtomTable build(const MeasureExpr& expr);

    std::size_t size() const noexcept { return atoms_.size(); }
    const OrderedAtom& atom(std::size_t i) const { return atoms_.at(i); }
    Relation relation(std::size_t i, std::size_t j) const {
        return matrix_[i * atoms_.size() + j];
    }
    Rational total_mass() const;

private:
    std::vector<OrderedAtom> atoms_;
    std::vector<Relation> matrix_;
};

inline constexpr std::uint64_t kDefaultTupleBudget = 10'000'000;

/// L_n by direct tuple enumeration: the total mass of ascending n-tuples.
/// Exact; throws DiffuseUnsupportedError or BudgetExceededError.
Rational oracle_run_coefficient(const MeasureExpr& expr, RunKind kind, int n,
                                std::uint64_t budget = kDefaultTupleBudget);

/// P(N = n) at the given position straight from the event definition
/// (tuples of length n+1 initially, n+2 interior, the interior case divided
/// by 1 - L_2). Never uses the coefficient-difference identities, so it
/// checks them independently.
Rational oracle_run_length_pmf(const MeasureExpr& expr, RunKind kind, Position position, int n,
                               std::uint64_t budget = kDefaultTupleBudget);

/// P(X_n >= max(X_0..X_{n-1})) for a purely atomic total order; the
/// rearrangement-sensitivity witness.
Rational oracle_record_probability(const MeasureExpr& expr, int n,
                                   std::uint64_t budget = kDefaultTupleBudget);

} // namespace runlen
