#include "runlen/sampler.hpp"

#include "runlen/errors.hpp"
#include "runlen/examples.hpp"
#include "runlen/run_statistics.hpp"

#include <doctest.h>

#include <boost/math/distributions/chi_squared.hpp>

#include <cmath>
#include <random>

using namespace runlen;

namespace {

MeasureExpr degenerate_singleton() {
    TotalLeaf leaf;
    leaf.diffuse = Number::rational(Rational(0));
    leaf.dropped_mass = Number::rational(Rational(0));
    leaf.atoms.push_back(Atom{0.5, Number::rational(Rational(1))});
    return MeasureExpr::leaf(std::move(leaf));
}

/// Face of the 2n-sided parity die as an element: odd faces on child 0,
/// even faces on child 1, both chains ordered by value.
Element face(int value) {
    Element e;
    e.path = {value % 2 == 1 ? 0 : 1};
    e.value = AtomIndex{(value - 1) / 2};
    return e;
}

/// Two-sample chi-squared p-value over run-length histograms; lengths with
/// combined count below 10 are pooled into one tail bin.
double chi_squared_p_value(const RunHistogram& a, const RunHistogram& b) {
    std::map<std::uint64_t, std::pair<double, double>> bins;
    for (const auto& [len, count] : a.counts_by_length) bins[len].first += static_cast<double>(count);
    for (const auto& [len, count] : b.counts_by_length) bins[len].second += static_cast<double>(count);

    std::vector<std::pair<double, double>> pooled;
    std::pair<double, double> tail{0.0, 0.0};
    for (const auto& [len, counts] : bins) {
        if (counts.first + counts.second < 10.0) {
            tail.first += counts.first;
            tail.second += counts.second;
        } else {
            pooled.push_back(counts);
        }
    }
    if (tail.first + tail.second > 0.0) pooled.push_back(tail);
    REQUIRE(pooled.size() >= 2);

    double k1 = 0.0, k2 = 0.0;
    for (const auto& [o1, o2] : pooled) {
        k1 += o1;
        k2 += o2;
    }
    double chi2 = 0.0;
    for (const auto& [o1, o2] : pooled) {
        const double scaled = std::sqrt(k2 / k1) * o1 - std::sqrt(k1 / k2) * o2;
        chi2 += scaled * scaled / (o1 + o2);
    }
    const boost::math::chi_squared dist(static_cast<double>(pooled.size() - 1));
    return boost::math::cdf(boost::math::complement(dist, chi2));
}

} // namespace

TEST_CASE("sampling is deterministic per seed") {
    const auto die = make_die(6);
    const auto h1 = simulate_histogram(die, RunKind::Strict, 20'000, 7);
    const auto h2 = simulate_histogram(die, RunKind::Strict, 20'000, 7);
    CHECK(h1.counts_by_length == h2.counts_by_length);
    CHECK(h1.runs_started == h2.runs_started);
    CHECK(h1.scanned == h2.scanned);
    const auto h3 = simulate_histogram(die, RunKind::Strict, 20'000, 8);
    CHECK(h1.counts_by_length != h3.counts_by_length);
}

TEST_CASE("degenerate sampling and runs") {
    const auto expr = degenerate_singleton();
    Sampler sampler(expr);
    Rng rng(1);
    for (int i = 0; i < 100; ++i) {
        const Element e = sampler.sample(rng);
        CHECK(std::get<AtomIndex>(e.value).index == 0);
    }
    const auto hist = simulate_histogram(expr, RunKind::Strict, 1000, 1);
    CHECK(hist.runs_started == 1000);
    REQUIRE(hist.counts_by_length.size() == 1);
    CHECK(hist.counts_by_length.at(1) == 1000);
}

TEST_CASE("compare semantics") {
    SUBCASE("series components order by index") {
        std::vector<MeasureExpr> chain;
        chain.push_back(make_die(2));
        chain.push_back(make_die(2));
        const auto expr = MeasureExpr::series(std::move(chain));
        Element low;
        low.path = {0};
        low.value = AtomIndex{1};
        Element high;
        high.path = {1};
        high.value = AtomIndex{0};
        CHECK(compare(low, high, expr) == Relation::Less);
        CHECK(compare(high, low, expr) == Relation::Greater);
    }
    SUBCASE("different parity is incomparable") {
        const auto evendie = make_even_die(3);
        CHECK(compare(face(1), face(2), evendie) == Relation::Incomparable);
        CHECK(compare(face(1), face(3), evendie) == Relation::Less);
        CHECK(compare(face(6), face(2), evendie) == Relation::Greater);
    }
    SUBCASE("same atom is equal") {
        const auto evendie = make_even_die(3);
        CHECK(compare(face(4), face(4), evendie) == Relation::Equal);
    }
    SUBCASE("invalid paths are rejected") {
        const auto evendie = make_even_die(3);
        Element bogus;
        bogus.path = {5};
        bogus.value = AtomIndex{0};
        CHECK_THROWS_AS(compare(bogus, face(1), evendie), InvalidArgumentError);
    }
}

TEST_CASE("detect_runs splits the parity-die walkthrough") {
    // Faces 1,3,7,8,2,4,5,9 on a 10-sided parity die: runs 1,3,7 | 8 | 2,4 | 5,9.
    const auto evendie = make_even_die(5);
    std::vector<Element> seq;
    for (const int v : {1, 3, 7, 8, 2, 4, 5, 9}) seq.push_back(face(v));
    const auto scan = detect_runs(seq, RunKind::Strict, evendie);
    CHECK(scan.lengths == std::vector<std::uint64_t>{3, 1, 2, 2});
    CHECK(scan.final_censored);
}

TEST_CASE("detect_runs on constant sequences") {
    const auto expr = degenerate_singleton();
    std::vector<Element> seq(6);
    for (auto& e : seq) {
        e.path = {};
        e.value = AtomIndex{0};
    }
    const auto strict = detect_runs(seq, RunKind::Strict, expr);
    CHECK(strict.lengths == std::vector<std::uint64_t>(6, 1));
    const auto nonstrict = detect_runs(seq, RunKind::NonStrict, expr);
    CHECK(nonstrict.lengths == std::vector<std::uint64_t>{6});
}

TEST_CASE("histogram partitions the scanned prefix") {
    std::vector<MeasureExpr> corpus;
    corpus.push_back(make_die(6));
    corpus.push_back(make_even_die(3));
    corpus.push_back(make_dart(Rational(1, 2)));
    corpus.push_back(make_nested_tree());
    for (const auto& expr : corpus) {
        for (const RunKind kind : {RunKind::Strict, RunKind::NonStrict}) {
            const auto hist = simulate_histogram(expr, kind, 5000, 3);
            std::uint64_t weighted = 0;
            std::uint64_t runs = 0;
            for (const auto& [len, count] : hist.counts_by_length) {
                weighted += len * count;
                runs += count;
            }
            CHECK(weighted == hist.scanned);
            CHECK(runs == hist.runs_started);
            CHECK(hist.scanned >= 5000);
        }
    }
}

TEST_CASE("sample frequencies match the masses") {
    SUBCASE("dart bullseye frequency") {
        Sampler sampler(make_dart(Rational(1, 2)));
        Rng rng(11);
        const int n = 100'000;
        int bullseye = 0;
        for (int i = 0; i < n; ++i) {
            if (std::holds_alternative<AtomIndex>(sampler.sample(rng).value)) ++bullseye;
        }
        const double se = std::sqrt(0.25 / n);
        CHECK(std::abs(bullseye / static_cast<double>(n) - 0.5) <= 4 * se);
    }
    SUBCASE("parity die face frequencies") {
        const auto evendie = make_even_die(3);
        Sampler sampler(evendie);
        Rng rng(12);
        const int n = 120'000;
        std::map<std::pair<int, int>, int> counts;
        for (int i = 0; i < n; ++i) {
            const Element e = sampler.sample(rng);
            counts[{e.path.at(0), std::get<AtomIndex>(e.value).index}] += 1;
        }
        REQUIRE(counts.size() == 6);
        const double p = 1.0 / 6.0;
        const double se = std::sqrt(p * (1 - p) / n);
        for (const auto& [key, count] : counts) {
            CHECK(std::abs(count / static_cast<double>(n) - p) <= 4 * se);
        }
    }
}

TEST_CASE("compare is antisymmetric and transitive on sampled triples") {
    std::vector<MeasureExpr> corpus;
    corpus.push_back(make_even_die(3));
    corpus.push_back(make_nested_tree());
    corpus.push_back(make_dart(Rational(1, 2)));
    for (const auto& expr : corpus) {
        Sampler sampler(expr);
        Rng rng(21);
        for (int i = 0; i < 2000; ++i) {
            const Element a = sampler.sample(rng);
            const Element b = sampler.sample(rng);
            const Element c = sampler.sample(rng);

            const Relation ab = compare(a, b, expr);
            const Relation ba = compare(b, a, expr);
            switch (ab) {
                case Relation::Less: CHECK(ba == Relation::Greater); break;
                case Relation::Greater: CHECK(ba == Relation::Less); break;
                case Relation::Equal: CHECK(ba == Relation::Equal); break;
                case Relation::Incomparable: CHECK(ba == Relation::Incomparable); break;
            }

            const Relation bc = compare(b, c, expr);
            if (ab == Relation::Less && bc == Relation::Less) {
                CHECK(compare(a, c, expr) == Relation::Less);
            }
            if ((ab == Relation::Less || ab == Relation::Equal) &&
                (bc == Relation::Less || bc == Relation::Equal)) {
                const Relation ac = compare(a, c, expr);
                CHECK((ac == Relation::Less || ac == Relation::Equal));
            }
        }
    }
}

TEST_CASE("empirical interior pmf tracks the theoretical one") {
    std::vector<MeasureExpr> corpus;
    corpus.push_back(make_die(6));
    corpus.push_back(make_even_die(3));
    corpus.push_back(make_two_atom(Rational(1, 3)));
    corpus.push_back(make_dart(Rational(1, 2)));
    for (const auto& expr : corpus) {
        for (const RunKind kind : {RunKind::Strict, RunKind::NonStrict}) {
            const std::uint64_t b = 100'000;
            const auto hist = simulate_histogram(expr, kind, b, 31);
            const auto stats = pgf(expr, kind, Position::Interior, 8);
            const double w = static_cast<double>(hist.runs_started);
            for (std::uint64_t n = 1; n <= 2; ++n) {
                const double p = stats.pgf_coeffs[static_cast<std::size_t>(n)].to_double();
                const auto it = hist.counts_by_length.find(n);
                const double observed =
                    (it == hist.counts_by_length.end() ? 0.0 : static_cast<double>(it->second)) / w;
                const double se = std::sqrt(p * (1 - p) / w);
                // 1/w covers the index-0 run, which follows the initial law.
                CHECK(std::abs(observed - p) <= 4 * se + 1.0 / w);
            }
        }
    }
}

TEST_CASE("rearranged measures give chi-squared-indistinguishable histograms") {
    const auto original = make_two_atom(Rational(1, 3));
    const auto rearranged = rearrange_atoms(original, {1, 0});
    for (const RunKind kind : {RunKind::Strict, RunKind::NonStrict}) {
        const auto h1 = simulate_histogram(original, kind, 100'000, 51);
        const auto h2 = simulate_histogram(rearranged, kind, 100'000, 52);
        CHECK(chi_squared_p_value(h1, h2) >= 0.001);
    }
}

TEST_CASE("slln trace") {
    SUBCASE("degenerate strict path sits at 1") {
        const auto trace =
            slln_trace(degenerate_singleton(), RunKind::Strict, 1, {10, 100, 1000}, 5);
        REQUIRE(trace.size() == 3);
        for (const auto& point : trace) CHECK(point.ratio == doctest::Approx(1.0));
    }
    SUBCASE("die-6 ratio approaches 4/9") {
        const auto trace = slln_trace(make_die(6), RunKind::Strict, 1, {1000, 100'000}, 77);
        REQUIRE(trace.size() == 2);
        CHECK(std::abs(trace[1].ratio - 4.0 / 9.0) < 0.01);
    }
    SUBCASE("impossible lengths have vanishing ratio") {
        const auto trace = slln_trace(make_die(6), RunKind::Strict, 7, {10'000}, 9);
        REQUIRE(trace.size() == 1);
        CHECK(trace[0].ratio == 0.0);
    }
    SUBCASE("checkpoints must increase") {
        CHECK_THROWS_AS(slln_trace(make_die(6), RunKind::Strict, 1, {100, 100}, 1),
                        InvalidArgumentError);
    }
}

TEST_CASE("replicas merge deterministically") {
    const auto die = make_die(6);
    const auto merged = simulate_replicated(die, RunKind::Strict, 10'000, 5, 4);
    RunHistogram manual = simulate_histogram(die, RunKind::Strict, 10'000, 5);
    for (unsigned r = 1; r < 4; ++r) {
        manual = merge(manual, simulate_histogram(die, RunKind::Strict, 10'000, 5 + r));
    }
    CHECK(merged.counts_by_length == manual.counts_by_length);
    CHECK(merged.runs_started == manual.runs_started);
    CHECK(merged.scanned == manual.scanned);
}

TEST_CASE("a never-ending run is cut at the lookahead cap and flagged") {
    const auto expr = degenerate_singleton();
    const auto hist = simulate_histogram(expr, RunKind::NonStrict, 10, 3, /*lookahead_cap=*/1000);
    CHECK(hist.includes_final_open_run);
    CHECK(hist.runs_started == 1);
    REQUIRE(hist.counts_by_length.size() == 1);
    CHECK(hist.counts_by_length.begin()->first == 1000);
    CHECK(hist.scanned == 1000); // partition still holds at the cap

    const auto resolved = simulate_histogram(make_die(6), RunKind::Strict, 1000, 3);
    CHECK_FALSE(resolved.includes_final_open_run);
}

TEST_CASE("diffuse points compare by value, atoms by position") {
    const auto dart = make_dart(Rational(1, 2)); // bullseye atom at pos 1.0
    Element bullseye;
    bullseye.path = {};
    bullseye.value = AtomIndex{0};
    Element low;
    low.path = {};
    low.value = DiffusePoint{0.25};
    Element at_bullseye;
    at_bullseye.path = {};
    at_bullseye.value = DiffusePoint{1.0}; // bit-identical to the atom position
    CHECK(compare(low, bullseye, dart) == Relation::Less);
    CHECK(compare(bullseye, low, dart) == Relation::Greater);
    CHECK(compare(low, low, dart) == Relation::Equal);
    CHECK(compare(at_bullseye, bullseye, dart) == Relation::Equal);
}

TEST_CASE("sampler rejects non-probability measures") {
    const auto short_mass = parse_measure_spec(R"({"type":"total","diffuse":0.9,"atoms":[]})");
    CHECK_THROWS_AS(Sampler{short_mass}, NotProbabilityError);
    CHECK_THROWS_AS(simulate_histogram(short_mass, RunKind::Strict, 100, 1), NotProbabilityError);
}
