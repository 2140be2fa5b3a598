#pragma once

#include "runlen/number.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace runlen {

class MeasureExpr;

/// A point carrying positive mass. Positions are leaf-local coordinates in
/// [0,1]; the in-leaf order is the numeric order of positions.
struct Atom {
    double pos = 0.0;
    Number mass;

    friend bool operator==(const Atom& a, const Atom& b) {
        return a.pos == b.pos && a.mass == b.mass;
    }
};

/// A totally ordered component: finitely many atoms plus a diffuse remainder
/// (uniform on [0,1] as far as the sampler is concerned). `dropped_mass` is a
/// certified bound on mass discarded when a countable atom family was
/// truncated to this finite list; zero for ordinary leaves.
struct TotalLeaf {
    std::vector<Atom> atoms;
    Number diffuse;
    Number dropped_mass;

    // Atom lists are sets keyed by position; equality ignores storage order.
    friend bool operator==(const TotalLeaf& a, const TotalLeaf& b);
};

/// Children stacked bottom-to-top: every element of children[i] lies below
/// every element of children[j] for i < j.
struct SeriesNode {
    std::vector<MeasureExpr> children;

    friend bool operator==(const SeriesNode& a, const SeriesNode& b);
};

/// Children side by side: cross-child pairs are incomparable.
struct ParallelNode {
    std::vector<MeasureExpr> children;

    friend bool operator==(const ParallelNode& a, const ParallelNode& b);
};

/// Expression tree describing a finite non-negative measure on a countably
/// series-parallel partial order (finite compositions only; countable atom
/// families enter through truncation builders).
class MeasureExpr {
public:
    using Node = std::variant<TotalLeaf, SeriesNode, ParallelNode>;

    MeasureExpr() : node_(TotalLeaf{{}, Number::rational(Rational(0)), Number::rational(Rational(0))}) {}
    explicit MeasureExpr(Node node) : node_(std::move(node)) {}

    static MeasureExpr leaf(TotalLeaf l) { return MeasureExpr(Node(std::move(l))); }
    static MeasureExpr series(std::vector<MeasureExpr> children) {
        return MeasureExpr(Node(SeriesNode{std::move(children)}));
    }
    static MeasureExpr parallel(std::vector<MeasureExpr> children) {
        return MeasureExpr(Node(ParallelNode{std::move(children)}));
    }

    const Node& node() const noexcept { return node_; }

    bool is_leaf() const noexcept { return std::holds_alternative<TotalLeaf>(node_); }
    bool is_series() const noexcept { return std::holds_alternative<SeriesNode>(node_); }
    bool is_parallel() const noexcept { return std::holds_alternative<ParallelNode>(node_); }

    const TotalLeaf& as_leaf() const { return std::get<TotalLeaf>(node_); }
    const SeriesNode& as_series() const { return std::get<SeriesNode>(node_); }
    const ParallelNode& as_parallel() const { return std::get<ParallelNode>(node_); }

    /// Mode of the first mass encountered; trees are mode-uniform by
    /// construction (validate() reports violations).
    NumericMode mode() const;

    friend bool operator==(const MeasureExpr& a, const MeasureExpr& b) { return a.node_ == b.node_; }

private:
    Node node_;
};

struct ValidationReport {
    bool is_valid = false;
    Number total_mass;
    bool is_probability = false;
    bool is_degenerate = false;
    std::vector<std::string> issues;
};

enum class ModeRequest { Auto, Rational, Float };

/// Parses the UTF-8 JSON spec format. With ModeRequest::Auto the numeric mode
/// is rational unless some mass appears as a non-integer JSON number.
/// Geometric nodes are expanded into truncated leaves with a recorded
/// dropped-mass bound. Throws ParseError with a byte offset on bad input.
MeasureExpr parse_measure_spec(const std::string& text, ModeRequest mode = ModeRequest::Auto);

/// Inverse of parse_measure_spec up to structural equality.
std::string serialize_measure(const MeasureExpr& expr);

ValidationReport validate(const MeasureExpr& expr);

Number total_mass(const MeasureExpr& expr);

/// Total dropped-mass bound accumulated over all truncated leaves.
Number total_dropped_mass(const MeasureExpr& expr);

struct AtomMassProfile {
    std::vector<Number> masses; // sorted ascending
    Number diffuse;
};

/// Aggregated atom masses and diffuse mass of a total order.
/// Throws NotTotalOrderError when the tree has real parallel branching.
AtomMassProfile atom_mass_multiset(const MeasureExpr& expr);

struct GeometricAtoms {
    MeasureExpr leaf;
    Number dropped_mass;
    int atom_count = 0;
};

/// Truncates the geometric family m_k = p(1-p)^k, k >= 0, to the minimal K
/// with (1-p)^K <= tail_epsilon (at least one atom is always emitted). Atom k
/// sits at position k/(k+1).
GeometricAtoms build_geometric_atoms(const Rational& p, const Rational& tail_epsilon);

/// Reassigns atom positions by a bijection: atom i moves to the canonical
/// position previously held by atom perm[i]. Multi-leaf total orders are
/// first collapsed onto one leaf with fresh order-preserving positions,
/// because leaf-local coordinates are not globally unique.
MeasureExpr rearrange_atoms(const MeasureExpr& expr, const std::vector<std::size_t>& perm);

struct FlatTotalOrder {
    std::vector<Atom> atoms; // ascending canonical positions
    Number diffuse;
    Number dropped_mass;
};

/// Collapses the tree to a single total order when possible (series nesting
/// and parallel nodes with at most one positive-mass child are transparent).
std::optional<FlatTotalOrder> flatten_total_order(const MeasureExpr& expr);

bool is_purely_atomic(const MeasureExpr& expr);

/// Scales every mass so the total becomes 1. Exact in rational mode.
MeasureExpr normalize_to_probability(const MeasureExpr& expr);

/// Explicit mode conversion of every mass in the tree (float -> rational is
/// exact; rational -> float rounds).
MeasureExpr convert_mode(const MeasureExpr& expr, NumericMode target);

} // namespace runlen
