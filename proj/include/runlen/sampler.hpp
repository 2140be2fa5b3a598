#pragma once

#include "runlen/measure.hpp"
#include "runlen/oracle.hpp" // Relation
#include "runlen/run_kind.hpp"

#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <variant>
#include <vector>

namespace runlen {

struct AtomIndex {
    int index = 0;
    friend bool operator==(AtomIndex a, AtomIndex b) { return a.index == b.index; }
};

struct DiffusePoint {
    double value = 0.0;
    friend bool operator==(DiffusePoint a, DiffusePoint b) { return a.value == b.value; }
};

/// A sampled point of the poset: which leaf it fell in (child indices from
/// the root) and where inside the leaf.
struct Element {
    std::vector<int> path;
    std::variant<AtomIndex, DiffusePoint> value;
};

/// Deterministic 64-bit generator: mt19937_64 with 53-bit uniforms. Replica
/// streams are derived as seed + replica_index.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }
    /// Uniform on [0, 1) with 53 random bits.
    double next_unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

/// Draws i.i.d. elements: a leaf with probability proportional to its mass,
/// then an atom with probability mass/leaf_mass, else a uniform diffuse
/// point. Construction throws NotProbabilityError unless the measure is a
/// probability. The expression must outlive the sampler.
class Sampler {
public:
    explicit Sampler(const MeasureExpr& expr);

    Element sample(Rng& rng) const;

private:
    struct LeafSlot {
        std::vector<int> path;
        double cum_upper = 0.0;       // cumulative mass bound for leaf selection
        std::vector<double> atom_cum; // cumulative atom masses within the leaf
        double leaf_mass = 0.0;
    };
    std::vector<LeafSlot> leaves_;
};

/// Order of two sampled elements under the series-parallel semantics: walk to
/// the lowest diverging node (series decides by child index, parallel is
/// incomparable); within one leaf compare positions numerically, with Equal
/// exactly for the same atom or bit-identical diffuse reals.
Relation compare(const Element& a, const Element& b, const MeasureExpr& expr);

/// a then b may extend one run: Less for strict runs, Less-or-Equal for
/// non-strict.
bool extends_run(const Element& a, const Element& b, RunKind kind, const MeasureExpr& expr);

struct RunScan {
    std::vector<std::uint64_t> lengths;
    bool final_censored = false; // the last run ends with the sequence, not with a break
};

RunScan detect_runs(std::span<const Element> seq, RunKind kind, const MeasureExpr& expr);

struct RunHistogram {
    RunKind kind = RunKind::Strict;
    std::uint64_t requested_b = 0;
    std::uint64_t scanned = 0; // indices covered by counted runs; sum of length*count
    std::uint64_t runs_started = 0;
    std::map<std::uint64_t, std::uint64_t> counts_by_length;
    bool includes_final_open_run = false; // lookahead cap hit before a run closed
};

inline constexpr std::uint64_t kDefaultLookahead = 1'000'000;

/// Histogram of the lengths of all runs starting in [0, b) along one seeded
/// path. The trailing run is resolved by sampling past b (up to
/// lookahead_cap extra steps; a still-open run is counted at the cap and
/// flagged).
RunHistogram simulate_histogram(const MeasureExpr& expr, RunKind kind, std::uint64_t b,
                                std::uint64_t seed, std::uint64_t lookahead_cap = kDefaultLookahead);

/// Pointwise merge; associative and commutative.
RunHistogram merge(const RunHistogram& a, const RunHistogram& b);

/// replicas independent histograms with seeds seed..seed+replicas-1, merged.
/// Replicas run on separate threads.
RunHistogram simulate_replicated(const MeasureExpr& expr, RunKind kind, std::uint64_t b,
                                 std::uint64_t seed, unsigned replicas,
                                 std::uint64_t lookahead_cap = kDefaultLookahead);

struct SllnPoint {
    std::uint64_t b = 0;
    std::uint64_t runs_started = 0;
    std::uint64_t runs_of_length = 0;
    double ratio = 0.0; // U_{b,n} / W_b
};

/// Ratios U_{b,n}/W_b along one sample path at the given checkpoints
/// (strictly increasing).
std::vector<SllnPoint> slln_trace(const MeasureExpr& expr, RunKind kind, std::uint64_t n,
                                  const std::vector<std::uint64_t>& checkpoints, std::uint64_t seed,
                                  std::uint64_t lookahead_cap = kDefaultLookahead);

struct HistogramSummary {
    double mean = 0.0;
    double variance = 0.0;
    double stderr_mean = 0.0;
};

HistogramSummary summarize(const RunHistogram& hist);

} // namespace runlen
