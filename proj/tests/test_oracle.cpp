#include "runlen/oracle.hpp"

#include "runlen/errors.hpp"
#include "runlen/examples.hpp"
#include "runlen/run_kind.hpp"
#include "runlen/sampler.hpp"

#include <doctest.h>

using namespace runlen;

namespace {
Rational R(const char* text) { return rational_from_string(text); }
} // namespace

TEST_CASE("atom table relations") {
    const auto evendie = make_even_die(3);
    const auto table = AtomTable::build(evendie);
    REQUIRE(table.size() == 6);
    CHECK(table.total_mass() == R("1"));
    // Within one chain: position order. Across chains: incomparable.
    CHECK(table.relation(0, 1) == Relation::Less);
    CHECK(table.relation(1, 0) == Relation::Greater);
    CHECK(table.relation(0, 0) == Relation::Equal);
    CHECK(table.relation(0, 3) == Relation::Incomparable);
    CHECK(table.relation(5, 2) == Relation::Incomparable);

    std::vector<MeasureExpr> chain;
    chain.push_back(make_die(2));
    chain.push_back(make_die(2));
    const auto series_table = AtomTable::build(MeasureExpr::series(std::move(chain)));
    CHECK(series_table.relation(0, 2) == Relation::Less); // earlier component below later
    CHECK(series_table.relation(3, 1) == Relation::Greater);
}

TEST_CASE("atom table relations agree with element comparison") {
    // Same semantics reached through two independent code paths.
    std::vector<MeasureExpr> corpus;
    corpus.push_back(make_even_die(3));
    corpus.push_back(make_nested_tree());
    corpus.push_back(make_die(4));
    for (const auto& expr : corpus) {
        const auto table = AtomTable::build(expr);
        std::vector<Element> elements;
        for (std::size_t i = 0; i < table.size(); ++i) {
            Element e;
            e.path = std::vector<int>(table.atom(i).path.begin(), table.atom(i).path.end());
            int slot = 0;
            // Recover the atom's slot index inside its leaf from its position.
            const MeasureExpr* node = &expr;
            for (const int step : e.path) {
                node = node->is_series() ? &node->as_series().children[static_cast<std::size_t>(step)]
                                         : &node->as_parallel().children[static_cast<std::size_t>(step)];
            }
            for (std::size_t a = 0; a < node->as_leaf().atoms.size(); ++a) {
                if (node->as_leaf().atoms[a].pos == table.atom(i).pos) slot = static_cast<int>(a);
            }
            e.value = AtomIndex{slot};
            elements.push_back(std::move(e));
        }
        for (std::size_t i = 0; i < table.size(); ++i) {
            for (std::size_t j = 0; j < table.size(); ++j) {
                CHECK(table.relation(i, j) == compare(elements[i], elements[j], expr));
            }
        }
    }
}

TEST_CASE("run coefficients by enumeration") {
    CHECK(oracle_run_coefficient(make_two_atom(Rational(1, 3)), RunKind::Strict, 2) == R("2/9"));
    CHECK(oracle_run_coefficient(make_die(6), RunKind::Strict, 3) == R("5/54"));
    CHECK(oracle_run_coefficient(make_parallel_singletons(), RunKind::NonStrict, 3) == R("1/4"));
    CHECK(oracle_run_coefficient(make_die(6), RunKind::Strict, 0) == R("1"));
    CHECK(oracle_run_coefficient(make_die(6), RunKind::Strict, 1) == R("1"));
    CHECK(oracle_run_coefficient(make_die(6), RunKind::Strict, 7) == R("0")); // only 6 distinct values
}

TEST_CASE("run length pmf by enumeration") {
    const auto die = make_die(6);
    CHECK(oracle_run_length_pmf(die, RunKind::Strict, Position::Interior, 1) == R("4/9"));
    CHECK(oracle_run_length_pmf(make_two_atom(Rational(1, 3)), RunKind::Strict, Position::Initial, 2) ==
          R("2/9"));

    TotalLeaf leaf;
    leaf.diffuse = Number::rational(Rational(0));
    leaf.dropped_mass = Number::rational(Rational(0));
    leaf.atoms.push_back(Atom{0.5, Number::rational(Rational(1))});
    const auto degenerate = MeasureExpr::leaf(std::move(leaf));
    CHECK(oracle_run_length_pmf(degenerate, RunKind::Strict, Position::Initial, 1) == R("1"));
    CHECK_THROWS_AS(oracle_run_length_pmf(degenerate, RunKind::NonStrict, Position::Interior, 1),
                    DegenerateMeasureError);
}

TEST_CASE("record probabilities witness rearrangement sensitivity") {
    const auto mu_xy = make_two_atom(Rational(1, 3));
    const auto mu_yx = rearrange_atoms(mu_xy, {1, 0});
    CHECK(oracle_record_probability(mu_xy, 2) == R("19/27"));
    CHECK(oracle_record_probability(mu_yx, 2) == R("17/27"));
    CHECK(oracle_record_probability(mu_xy, 2) - oracle_record_probability(mu_yx, 2) == R("2/27"));

    // The closed forms p^{n+1} + (1-p) and (1-p)^{n+1} + p for larger n.
    for (int n = 2; n <= 5; ++n) {
        CHECK(oracle_record_probability(mu_xy, n) ==
              rational_pow(Rational(1, 3), static_cast<unsigned>(n + 1)) + Rational(2, 3));
        CHECK(oracle_record_probability(mu_yx, n) ==
              rational_pow(Rational(2, 3), static_cast<unsigned>(n + 1)) + Rational(1, 3));
    }

    TotalLeaf leaf;
    leaf.diffuse = Number::rational(Rational(0));
    leaf.dropped_mass = Number::rational(Rational(0));
    leaf.atoms.push_back(Atom{0.5, Number::rational(Rational(1))});
    const auto degenerate = MeasureExpr::leaf(std::move(leaf));
    for (int n = 1; n <= 4; ++n) CHECK(oracle_record_probability(degenerate, n) == R("1"));
}

TEST_CASE("run-length pmfs are rearrangement invariant where records are not") {
    const auto mu_xy = make_two_atom(Rational(1, 3));
    const auto mu_yx = rearrange_atoms(mu_xy, {1, 0});
    for (const RunKind kind : {RunKind::Strict, RunKind::NonStrict}) {
        for (const Position position : {Position::Initial, Position::Interior}) {
            for (int n = 1; n <= 4; ++n) {
                CHECK(oracle_run_length_pmf(mu_xy, kind, position, n) ==
                      oracle_run_length_pmf(mu_yx, kind, position, n));
            }
        }
    }
    CHECK(oracle_record_probability(mu_xy, 2) != oracle_record_probability(mu_yx, 2));
}

TEST_CASE("oracle guard rails") {
    CHECK_THROWS_AS(oracle_run_coefficient(make_dart(Rational(1, 2)), RunKind::Strict, 2),
                    DiffuseUnsupportedError);
    CHECK_THROWS_AS(oracle_run_coefficient(make_die(6), RunKind::Strict, 12, 1000),
                    BudgetExceededError);
    CHECK_THROWS_AS(oracle_record_probability(make_even_die(2), 2), NotTotalOrderError);
    CHECK_THROWS_AS(oracle_run_length_pmf(make_die(6), RunKind::Strict, Position::Interior, 20, 1000),
                    BudgetExceededError);
}
