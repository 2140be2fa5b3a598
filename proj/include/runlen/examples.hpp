#pragma once

#include "runlen/measure.hpp"

namespace runlen {

/// Atomless unit-mass total order (the decay-time example: any diffuse
/// probability measure has these run statistics).
MeasureExpr make_diffuse_unit(NumericMode mode = NumericMode::Rational);

/// Fair n-sided die: n atoms of mass 1/n on one chain.
MeasureExpr make_die(int n, NumericMode mode = NumericMode::Rational);

/// Bullseye atom of mass p at the top of a uniform diffuse ring of mass 1-p.
MeasureExpr make_dart(const Rational& p, NumericMode mode = NumericMode::Rational);

/// Geometric lifetime distribution truncated at tail mass <= tail_epsilon and
/// renormalized to a probability; the dropped-mass bound stays recorded on
/// the leaf.
MeasureExpr make_bulb(const Rational& p, const Rational& tail_epsilon,
                      NumericMode mode = NumericMode::Rational);

/// 2n-sided die where runs must keep parity: two n-atom chains in parallel,
/// every face of mass 1/(2n).
MeasureExpr make_even_die(int n, NumericMode mode = NumericMode::Rational);

/// Two atoms of mass p and 1-p at positions 0.3 and 0.7 of one chain.
MeasureExpr make_two_atom(const Rational& p, NumericMode mode = NumericMode::Rational);

/// Two parallel singleton leaves of mass 1/2 each.
MeasureExpr make_parallel_singletons(NumericMode mode = NumericMode::Rational);

/// Three-level series/parallel tree with five atoms, total mass 1.
MeasureExpr make_nested_tree(NumericMode mode = NumericMode::Rational);

} // namespace runlen
