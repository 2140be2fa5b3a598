#include "runlen/examples.hpp"

#include "runlen/errors.hpp"

namespace runlen {

namespace {

Number rat(long num, long den = 1) { return Number::rational(Rational(num, den)); }

MeasureExpr in_mode(MeasureExpr expr, NumericMode mode) {
    return mode == NumericMode::Rational ? expr : convert_mode(expr, NumericMode::Float);
}

/// Evenly spaced interior positions (k+1)/(n+1), ascending.
double chain_pos(int k, int n) {
    return static_cast<double>(k + 1) / static_cast<double>(n + 1);
}

} // namespace

MeasureExpr make_diffuse_unit(NumericMode mode) {
    TotalLeaf leaf;
    leaf.diffuse = rat(1);
    leaf.dropped_mass = rat(0);
    return in_mode(MeasureExpr::leaf(std::move(leaf)), mode);
}

MeasureExpr make_die(int n, NumericMode mode) {
    if (n < 1) throw InvalidArgumentError("die needs at least one face");
    TotalLeaf leaf;
    leaf.diffuse = rat(0);
    leaf.dropped_mass = rat(0);
    for (int k = 0; k < n; ++k) {
        leaf.atoms.push_back(Atom{chain_pos(k, n), rat(1, n)});
    }
    return in_mode(MeasureExpr::leaf(std::move(leaf)), mode);
}

MeasureExpr make_dart(const Rational& p, NumericMode mode) {
    if (!(p > 0 && p < 1)) throw InvalidArgumentError("dart bullseye mass must lie in (0,1)");
    TotalLeaf leaf;
    leaf.diffuse = Number::rational(1 - p);
    leaf.dropped_mass = rat(0);
    leaf.atoms.push_back(Atom{1.0, Number::rational(p)}); // bullseye beats every ring throw
    return in_mode(MeasureExpr::leaf(std::move(leaf)), mode);
}

MeasureExpr make_bulb(const Rational& p, const Rational& tail_epsilon, NumericMode mode) {
    GeometricAtoms g = build_geometric_atoms(p, tail_epsilon);
    MeasureExpr normalized = normalize_to_probability(g.leaf);
    // Keep the certified bound from the truncation, not its scaled image.
    TotalLeaf leaf = normalized.as_leaf();
    leaf.dropped_mass = g.dropped_mass;
    return in_mode(MeasureExpr::leaf(std::move(leaf)), mode);
}

MeasureExpr make_even_die(int n, NumericMode mode) {
    if (n < 1) throw InvalidArgumentError("even die needs at least one face per chain");
    auto chain = [&]() {
        TotalLeaf leaf;
        leaf.diffuse = rat(0);
        leaf.dropped_mass = rat(0);
        for (int k = 0; k < n; ++k) {
            leaf.atoms.push_back(Atom{chain_pos(k, n), rat(1, 2L * n)});
        }
        return MeasureExpr::leaf(std::move(leaf));
    };
    std::vector<MeasureExpr> children;
    children.push_back(chain()); // odd faces 1, 3, ..., 2n-1
    children.push_back(chain()); // even faces 2, 4, ..., 2n
    return in_mode(MeasureExpr::parallel(std::move(children)), mode);
}

MeasureExpr make_two_atom(const Rational& p, NumericMode mode) {
    if (!(p > 0 && p < 1)) throw InvalidArgumentError("two-atom mass must lie in (0,1)");
    TotalLeaf leaf;
    leaf.diffuse = rat(0);
    leaf.dropped_mass = rat(0);
    leaf.atoms.push_back(Atom{0.3, Number::rational(p)});
    leaf.atoms.push_back(Atom{0.7, Number::rational(1 - p)});
    return in_mode(MeasureExpr::leaf(std::move(leaf)), mode);
}

MeasureExpr make_parallel_singletons(NumericMode mode) {
    auto singleton = []() {
        TotalLeaf leaf;
        leaf.diffuse = rat(0);
        leaf.dropped_mass = rat(0);
        leaf.atoms.push_back(Atom{0.5, rat(1, 2)});
        return MeasureExpr::leaf(std::move(leaf));
    };
    std::vector<MeasureExpr> children;
    children.push_back(singleton());
    children.push_back(singleton());
    return in_mode(MeasureExpr::parallel(std::move(children)), mode);
}

MeasureExpr make_nested_tree(NumericMode mode) {
    auto atom_leaf = [](double pos, long num, long den) {
        TotalLeaf leaf;
        leaf.diffuse = Number::rational(Rational(0));
        leaf.dropped_mass = Number::rational(Rational(0));
        leaf.atoms.push_back(Atom{pos, Number::rational(Rational(num, den))});
        return MeasureExpr::leaf(std::move(leaf));
    };
    auto pair_leaf = []() {
        TotalLeaf leaf;
        leaf.diffuse = Number::rational(Rational(0));
        leaf.dropped_mass = Number::rational(Rational(0));
        leaf.atoms.push_back(Atom{0.3, Number::rational(Rational(1, 8))});
        leaf.atoms.push_back(Atom{0.7, Number::rational(Rational(1, 8))});
        return MeasureExpr::leaf(std::move(leaf));
    };

    std::vector<MeasureExpr> inner_series;
    inner_series.push_back(atom_leaf(0.5, 1, 4));
    inner_series.push_back(atom_leaf(0.5, 1, 4));

    std::vector<MeasureExpr> par;
    par.push_back(pair_leaf());
    par.push_back(MeasureExpr::series(std::move(inner_series)));

    std::vector<MeasureExpr> top;
    top.push_back(atom_leaf(0.5, 1, 4));
    top.push_back(MeasureExpr::parallel(std::move(par)));
    return in_mode(MeasureExpr::series(std::move(top)), mode);
}

} // namespace runlen
