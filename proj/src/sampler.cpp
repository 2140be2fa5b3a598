#include "runlen/sampler.hpp"

#include "runlen/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>

namespace runlen {

Sampler::Sampler(const MeasureExpr& expr) {
    const ValidationReport report = validate(expr);
    if (!report.is_valid || !report.is_probability) {
        throw NotProbabilityError("sampling needs a valid probability measure");
    }

    double cum = 0.0;
    std::vector<int> path;
    const std::function<void(const MeasureExpr&)> walk = [&](const MeasureExpr& e) {
        if (e.is_leaf()) {
            const TotalLeaf& leaf = e.as_leaf();
            LeafSlot slot;
            slot.path = path;
            double leaf_cum = 0.0;
            for (const auto& atom : leaf.atoms) {
                leaf_cum += atom.mass.to_double();
                slot.atom_cum.push_back(leaf_cum);
            }
            slot.leaf_mass = leaf_cum + leaf.diffuse.to_double();
            cum += slot.leaf_mass;
            slot.cum_upper = cum;
            if (slot.leaf_mass > 0.0) leaves_.push_back(std::move(slot));
            return;
        }
        const auto& children = e.is_series() ? e.as_series().children : e.as_parallel().children;
        for (std::size_t i = 0; i < children.size(); ++i) {
            path.push_back(static_cast<int>(i));
            walk(children[i]);
            path.pop_back();
        }
    };
    walk(expr);
    if (leaves_.empty()) throw NotProbabilityError("probability measure with no mass-bearing leaf");
    // Guard against rounding drift in the cumulative total.
    leaves_.back().cum_upper = std::max(leaves_.back().cum_upper, 1.0);
}

Element Sampler::sample(Rng& rng) const {
    const double u = rng.next_unit();
    const auto it = std::lower_bound(leaves_.begin(), leaves_.end(), u,
                                     [](const LeafSlot& slot, double v) { return slot.cum_upper <= v; });
    const LeafSlot& slot = it == leaves_.end() ? leaves_.back() : *it;

    Element out;
    out.path = slot.path;
    const double v = rng.next_unit() * slot.leaf_mass;
    const auto atom_it = std::lower_bound(slot.atom_cum.begin(), slot.atom_cum.end(), v,
                                          [](double cum, double x) { return cum <= x; });
    if (atom_it != slot.atom_cum.end()) {
        out.value = AtomIndex{static_cast<int>(atom_it - slot.atom_cum.begin())};
    } else {
        out.value = DiffusePoint{rng.next_unit()};
    }
    return out;
}

namespace {

double position_in_leaf(const Element& e, const TotalLeaf& leaf) {
    if (const auto* atom = std::get_if<AtomIndex>(&e.value)) {
        if (atom->index < 0 || atom->index >= static_cast<int>(leaf.atoms.size())) {
            throw InvalidArgumentError("element atom index is out of range for its leaf");
        }
        return leaf.atoms[static_cast<std::size_t>(atom->index)].pos;
    }
    return std::get<DiffusePoint>(e.value).value;
}

} // namespace

Relation compare(const Element& a, const Element& b, const MeasureExpr& expr) {
    const MeasureExpr* node = &expr;
    std::size_t depth = 0;
    while (!node->is_leaf()) {
        const auto& children =
            node->is_series() ? node->as_series().children : node->as_parallel().children;
        if (depth >= a.path.size() || depth >= b.path.size()) {
            throw InvalidArgumentError("element path does not reach a leaf of this measure");
        }
        const int ca = a.path[depth];
        const int cb = b.path[depth];
        if (ca < 0 || ca >= static_cast<int>(children.size()) || cb < 0 ||
            cb >= static_cast<int>(children.size())) {
            throw InvalidArgumentError("element path leaves the measure tree");
        }
        if (ca != cb) {
            if (node->is_parallel()) return Relation::Incomparable;
            return ca < cb ? Relation::Less : Relation::Greater;
        }
        node = &children[static_cast<std::size_t>(ca)];
        ++depth;
    }
    if (a.path.size() != depth || b.path.size() != depth) {
        throw InvalidArgumentError("element path does not end at a leaf");
    }

    const TotalLeaf& leaf = node->as_leaf();
    if (a.value == b.value) return Relation::Equal;
    const double pa = position_in_leaf(a, leaf);
    const double pb = position_in_leaf(b, leaf);
    if (pa < pb) return Relation::Less;
    if (pa > pb) return Relation::Greater;
    // Distinct variants landing on the same real: an atom and a bit-identical
    // diffuse point coincide in the order.
    return Relation::Equal;
}

bool extends_run(const Element& a, const Element& b, RunKind kind, const MeasureExpr& expr) {
    const Relation rel = compare(a, b, expr);
    if (kind == RunKind::Strict) return rel == Relation::Less;
    return rel == Relation::Less || rel == Relation::Equal;
}

RunScan detect_runs(std::span<const Element> seq, RunKind kind, const MeasureExpr& expr) {
    if (seq.empty()) throw InvalidArgumentError("detect_runs needs a non-empty sequence");
    RunScan scan;
    std::uint64_t run_len = 1;
    for (std::size_t i = 1; i < seq.size(); ++i) {
        if (extends_run(seq[i - 1], seq[i], kind, expr)) {
            ++run_len;
        } else {
            scan.lengths.push_back(run_len);
            run_len = 1;
        }
    }
    scan.lengths.push_back(run_len);
    scan.final_censored = true; // the sequence ended; the last run might have continued
    return scan;
}

namespace {

/// Streams one seeded path and reports each run as (start, length, open);
/// stops when the callback declines more. `open` marks a run cut by the
/// lookahead cap rather than an actual descent.
template <typename Callback>
void scan_runs(const MeasureExpr& expr, RunKind kind, std::uint64_t seed,
               std::uint64_t lookahead_cap, Callback&& cb) {
    if (lookahead_cap < 1) throw InvalidArgumentError("lookahead cap must be at least 1");
    Sampler sampler(expr);
    Rng rng(seed);
    Element prev = sampler.sample(rng);
    std::uint64_t run_start = 0;
    std::uint64_t i = 1;
    while (true) {
        Element cur = sampler.sample(rng);
        const bool extends = extends_run(prev, cur, kind, expr);
        bool emitted = false;
        bool open = false;
        if (!extends) {
            emitted = true;
        } else if (i - run_start >= lookahead_cap) {
            emitted = true;
            open = true;
        }
        if (emitted) {
            if (!cb(run_start, i - run_start, open)) return;
            run_start = i;
        }
        prev = std::move(cur);
        ++i;
    }
}

} // namespace

RunHistogram simulate_histogram(const MeasureExpr& expr, RunKind kind, std::uint64_t b,
                                std::uint64_t seed, std::uint64_t lookahead_cap) {
    if (b < 1) throw InvalidArgumentError("simulation length must be at least 1");
    RunHistogram hist;
    hist.kind = kind;
    hist.requested_b = b;
    scan_runs(expr, kind, seed, lookahead_cap,
              [&](std::uint64_t start, std::uint64_t length, bool open) {
                  hist.runs_started += 1;
                  hist.counts_by_length[length] += 1;
                  hist.scanned = start + length;
                  if (open) hist.includes_final_open_run = true;
                  return start + length < b; // next run starts at start+length
              });
    return hist;
}

RunHistogram merge(const RunHistogram& a, const RunHistogram& b) {
    if (a.kind != b.kind) throw InvalidArgumentError("cannot merge histograms of different run kinds");
    RunHistogram out = a;
    out.requested_b += b.requested_b;
    out.scanned += b.scanned;
    out.runs_started += b.runs_started;
    for (const auto& [len, count] : b.counts_by_length) out.counts_by_length[len] += count;
    out.includes_final_open_run = a.includes_final_open_run || b.includes_final_open_run;
    return out;
}

RunHistogram simulate_replicated(const MeasureExpr& expr, RunKind kind, std::uint64_t b,
                                 std::uint64_t seed, unsigned replicas,
                                 std::uint64_t lookahead_cap) {
    if (replicas == 0) throw InvalidArgumentError("need at least one replica");
    if (replicas == 1) return simulate_histogram(expr, kind, b, seed, lookahead_cap);
    std::vector<std::future<RunHistogram>> futures;
    futures.reserve(replicas);
    for (unsigned r = 0; r < replicas; ++r) {
        futures.push_back(std::async(std::launch::async, [&, r]() {
            return simulate_histogram(expr, kind, b, seed + r, lookahead_cap);
        }));
    }
    RunHistogram out = futures.front().get();
    for (unsigned r = 1; r < replicas; ++r) out = merge(out, futures[r].get());
    return out;
}

std::vector<SllnPoint> slln_trace(const MeasureExpr& expr, RunKind kind, std::uint64_t n,
                                  const std::vector<std::uint64_t>& checkpoints, std::uint64_t seed,
                                  std::uint64_t lookahead_cap) {
    for (std::size_t i = 1; i < checkpoints.size(); ++i) {
        if (checkpoints[i] <= checkpoints[i - 1]) {
            throw InvalidArgumentError("checkpoints must be strictly increasing");
        }
    }
    std::vector<SllnPoint> trace;
    if (checkpoints.empty()) return trace;

    std::uint64_t runs = 0;
    std::uint64_t hits = 0;
    std::size_t next = 0;
    scan_runs(expr, kind, seed, lookahead_cap,
              [&](std::uint64_t start, std::uint64_t length, bool /*open*/) {
                  // Runs close in start order, so once the next run starts at or
                  // past a checkpoint every run counted below started before it.
                  while (next < checkpoints.size() && start + length >= checkpoints[next]) {
                      const std::uint64_t w = runs + 1;
                      const std::uint64_t u = hits + (length == n ? 1 : 0);
                      // include this run if it started before the checkpoint
                      const bool counted = start < checkpoints[next];
                      const std::uint64_t w_cp = counted ? w : runs;
                      const std::uint64_t u_cp = counted ? u : hits;
                      trace.push_back(SllnPoint{checkpoints[next], w_cp, u_cp,
                                                w_cp == 0 ? 0.0
                                                          : static_cast<double>(u_cp) /
                                                                static_cast<double>(w_cp)});
                      ++next;
                  }
                  runs += 1;
                  if (length == n) hits += 1;
                  return next < checkpoints.size();
              });
    return trace;
}

HistogramSummary summarize(const RunHistogram& hist) {
    HistogramSummary s;
    if (hist.runs_started == 0) return s;
    const double w = static_cast<double>(hist.runs_started);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (const auto& [len, count] : hist.counts_by_length) {
        const double l = static_cast<double>(len);
        const double c = static_cast<double>(count);
        sum += l * c;
        sum_sq += l * l * c;
    }
    s.mean = sum / w;
    s.variance = sum_sq / w - s.mean * s.mean;
    s.stderr_mean = std::sqrt(std::max(s.variance, 0.0) / w);
    return s;
}

} // namespace runlen
