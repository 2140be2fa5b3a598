#include "runlen/oracle.hpp"

#include "runlen/errors.hpp"
#include "runlen/run_kind.hpp"

#include <algorithm>
#include <functional>
#include <string>

namespace runlen {

namespace {

void require_atomic(const MeasureExpr& expr) {
    if (!is_purely_atomic(expr)) {
        throw DiffuseUnsupportedError("the enumeration oracle needs a purely atomic measure");
    }
}

void check_budget(std::size_t atom_count, int tuple_len, std::uint64_t budget) {
    if (tuple_len <= 0) return;
    std::uint64_t total = 1;
    for (int i = 0; i < tuple_len; ++i) {
        if (atom_count != 0 && total > budget / atom_count) {
            throw BudgetExceededError("enumeration of " + std::to_string(atom_count) + "^" +
                                      std::to_string(tuple_len) + " tuples exceeds the budget of " +
                                      std::to_string(budget));
        }
        total *= atom_count;
    }
}

} // namespace

AtomTable AtomTable::build(const MeasureExpr& expr) {
    AtomTable table;

    // First pass: collect atoms with their paths.
    std::vector<int> path;
    const std::function<void(const MeasureExpr&)> collect = [&](const MeasureExpr& e) {
        if (e.is_leaf()) {
            for (const auto& atom : e.as_leaf().atoms) {
                table.atoms_.push_back(OrderedAtom{atom.mass.to_rational(), path, atom.pos});
            }
            return;
        }
        const auto& children = e.is_series() ? e.as_series().children : e.as_parallel().children;
        for (std::size_t i = 0; i < children.size(); ++i) {
            path.push_back(static_cast<int>(i));
            collect(children[i]);
            path.pop_back();
        }
    };
    collect(expr);

    // Second pass: pairwise relations from the lowest diverging node.
    const std::size_t n = table.atoms_.size();
    table.matrix_.assign(n * n, Relation::Incomparable);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const OrderedAtom& a = table.atoms_[i];
            const OrderedAtom& b = table.atoms_[j];
            Relation rel;
            if (i == j) {
                rel = Relation::Equal;
            } else if (a.path == b.path) {
                rel = a.pos < b.pos ? Relation::Less : Relation::Greater;
            } else {
                std::size_t d = 0;
                while (d < a.path.size() && d < b.path.size() && a.path[d] == b.path[d]) ++d;
                const MeasureExpr* node = &expr;
                for (std::size_t k = 0; k < d; ++k) {
                    node = node->is_series() ? &node->as_series().children[a.path[k]]
                                             : &node->as_parallel().children[a.path[k]];
                }
                if (node->is_series()) {
                    rel = a.path[d] < b.path[d] ? Relation::Less : Relation::Greater;
                } else {
                    rel = Relation::Incomparable;
                }
            }
            table.matrix_[i * n + j] = rel;
        }
    }
    return table;
}

Rational AtomTable::total_mass() const {
    Rational sum(0);
    for (const auto& a : atoms_) sum += a.mass;
    return sum;
}

namespace {

enum class Step { Ascend, NotAscend };

bool ascends(const AtomTable& t, std::size_t i, std::size_t j, RunKind kind) {
    const Relation rel = t.relation(i, j);
    if (kind == RunKind::Strict) return rel == Relation::Less;
    return rel == Relation::Less || rel == Relation::Equal;
}

/// Sum of mass products over all tuples (a_0..a_L) whose consecutive pairs
/// satisfy the step pattern. The recursion walks tuple prefixes and abandons
/// a prefix as soon as a constraint fails, which changes nothing about the
/// summed set.
Rational enumerate_tuples(const AtomTable& t, RunKind kind, const std::vector<Step>& steps,
                          std::uint64_t budget) {
    const int tuple_len = static_cast<int>(steps.size()) + 1;
    check_budget(t.size(), tuple_len, budget);

    Rational sum(0);
    std::function<void(std::size_t, int, const Rational&)> extend =
        [&](std::size_t prev, int depth, const Rational& product) {
            if (depth == tuple_len) {
                sum += product;
                return;
            }
            for (std::size_t next = 0; next < t.size(); ++next) {
                const bool up = ascends(t, prev, next, kind);
                if ((steps[depth - 1] == Step::Ascend) != up) continue;
                extend(next, depth + 1, product * t.atom(next).mass);
            }
        };
    for (std::size_t first = 0; first < t.size(); ++first) {
        extend(first, 1, t.atom(first).mass);
    }
    return sum;
}

} // namespace

Rational oracle_run_coefficient(const MeasureExpr& expr, RunKind kind, int n, std::uint64_t budget) {
    if (n < 0) throw InvalidArgumentError("run coefficient index must be non-negative");
    require_atomic(expr);
    if (n == 0) return Rational(1);
    const AtomTable table = AtomTable::build(expr);
    if (n == 1) return table.total_mass();
    return enumerate_tuples(table, kind, std::vector<Step>(n - 1, Step::Ascend), budget);
}

Rational oracle_run_length_pmf(const MeasureExpr& expr, RunKind kind, Position position, int n,
                               std::uint64_t budget) {
    if (n < 0) throw InvalidArgumentError("run length must be non-negative");
    require_atomic(expr);
    if (n == 0) return Rational(0); // no run has length zero
    const AtomTable table = AtomTable::build(expr);

    std::vector<Step> steps;
    if (position == Position::Interior) steps.push_back(Step::NotAscend);
    steps.insert(steps.end(), static_cast<std::size_t>(n - 1), Step::Ascend);
    steps.push_back(Step::NotAscend);

    const Rational event_mass = enumerate_tuples(table, kind, steps, budget);
    if (position == Position::Initial) return event_mass;

    const Rational l2 = oracle_run_coefficient(expr, kind, 2, budget);
    const Rational started = 1 - l2;
    if (started == 0) {
        throw DegenerateMeasureError("interior run lengths are undefined: no run ever starts"
                                     " at i >= 1 (degenerate non-strict measure)");
    }
    return event_mass / started;
}

Rational oracle_record_probability(const MeasureExpr& expr, int n, std::uint64_t budget) {
    if (n < 1) throw InvalidArgumentError("record event needs n >= 1");
    require_atomic(expr);
    if (!flatten_total_order(expr)) {
        throw NotTotalOrderError("record probabilities are defined on total orders only");
    }
    const AtomTable table = AtomTable::build(expr);
    check_budget(table.size(), n + 1, budget);

    Rational sum(0);
    // Track the running maximum of the first n draws; the last draw must not
    // be below it (>= in a total order means Greater or Equal).
    std::function<void(std::size_t, int, const Rational&)> extend =
        [&](std::size_t max_idx, int depth, const Rational& product) {
            if (depth == n) {
                for (std::size_t last = 0; last < table.size(); ++last) {
                    const Relation rel = table.relation(last, max_idx);
                    if (rel == Relation::Greater || rel == Relation::Equal) {
                        sum += product * table.atom(last).mass;
                    }
                }
                return;
            }
            for (std::size_t next = 0; next < table.size(); ++next) {
                const Relation rel = table.relation(next, max_idx);
                const std::size_t new_max = rel == Relation::Greater ? next : max_idx;
                extend(new_max, depth + 1, product * table.atom(next).mass);
            }
        };
    for (std::size_t first = 0; first < table.size(); ++first) {
        extend(first, 1, table.atom(first).mass);
    }
    return sum;
}

} // namespace runlen
