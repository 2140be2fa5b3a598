#include "runlen/report.hpp"

#include "runlen/errors.hpp"
#include "runlen/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>

namespace runlen {

using nlohmann::json;

json number_to_json(const Number& n) {
    if (!n.is_rational()) return json(n.dbl());
    static const BigInt kMax = BigInt(std::numeric_limits<std::int64_t>::max());
    static const BigInt kMin = BigInt(std::numeric_limits<std::int64_t>::min());
    const BigInt num = boost::multiprecision::numerator(n.rat());
    const BigInt den = boost::multiprecision::denominator(n.rat());
    json out;
    out["num"] = (num <= kMax && num >= kMin) ? json(num.convert_to<std::int64_t>()) : json(num.str());
    out["den"] = (den <= kMax) ? json(den.convert_to<std::int64_t>()) : json(den.str());
    return out;
}

namespace {

json pmf_to_json(const std::vector<Number>& coeffs) {
    json arr = json::array();
    for (const auto& c : coeffs) arr.push_back(number_to_json(c));
    return arr;
}

std::vector<RunKind> requested_kinds(const StatsRequest& req) {
    std::vector<RunKind> kinds;
    if (req.strict) kinds.push_back(RunKind::Strict);
    if (req.nonstrict) kinds.push_back(RunKind::NonStrict);
    if (kinds.empty()) throw InvalidArgumentError("no run kind requested");
    return kinds;
}

std::vector<Position> requested_positions(const StatsRequest& req) {
    std::vector<Position> positions;
    if (req.initial) positions.push_back(Position::Initial);
    if (req.interior) positions.push_back(Position::Interior);
    if (positions.empty()) throw InvalidArgumentError("no position requested");
    return positions;
}

} // namespace

json measure_summary_json(const MeasureExpr& expr) {
    const ValidationReport report = validate(expr);
    std::size_t atom_count = 0;
    Number diffuse = Number::zero(expr.mode());
    const std::function<void(const MeasureExpr&)> walk = [&](const MeasureExpr& e) {
        if (e.is_leaf()) {
            atom_count += e.as_leaf().atoms.size();
            diffuse += e.as_leaf().diffuse;
            return;
        }
        const auto& cs = e.is_series() ? e.as_series().children : e.as_parallel().children;
        for (const auto& c : cs) walk(c);
    };
    walk(expr);

    json out;
    out["atom_count"] = atom_count;
    out["diffuse_mass"] = number_to_json(diffuse);
    out["total_mass"] = number_to_json(report.total_mass);
    out["dropped_mass_bound"] = number_to_json(total_dropped_mass(expr));
    out["valid"] = report.is_valid;
    out["probability"] = report.is_probability;
    out["degenerate"] = report.is_degenerate;
    if (!report.issues.empty()) out["issues"] = report.issues;
    return out;
}

json stats_report(const MeasureExpr& expr, const StatsRequest& req) {
    json results;
    json trunc_errors;
    const NumericMode mode = expr.mode();
    for (const RunKind kind : requested_kinds(req)) {
        json per_kind;
        trunc_errors[to_string(kind)] =
            run_coefficients(expr, kind, req.order).trunc_error_at_one;
        for (const Position position : requested_positions(req)) {
            const RunStatistics stats = full_statistics(expr, kind, position, req.order);
            json cell;
            cell["mean"] = number_to_json(*stats.mean);
            cell["mean_exact"] = stats.mean->is_rational();
            if (mode == NumericMode::Rational && !stats.mean->is_rational()) {
                cell["mode_downgraded"] = true; // e^{m_d} forced a float fallback
            }
            cell["variance"] = *stats.variance;
            cell["pmf"] = pmf_to_json(stats.pgf_coeffs);
            cell["mass_deficit"] = number_to_json(stats.mass_deficit);
            per_kind[to_string(position)] = std::move(cell);
        }
        results[to_string(kind)] = std::move(per_kind);
    }

    json out;
    out["command"] = "stats";
    out["mode"] = to_string(mode);
    out["order"] = req.order;
    out["measure"] = measure_summary_json(expr);
    out["results"] = std::move(results);
    out["trunc_error_at_one"] = std::move(trunc_errors);
    return out;
}

json coeffs_report(const MeasureExpr& expr, const StatsRequest& req) {
    const ValidationReport vr = validate(expr);
    if (!vr.is_valid) {
        std::string msg = "invalid measure";
        for (const auto& issue : vr.issues) msg += "; " + issue;
        throw NotProbabilityError(msg);
    }
    json results;
    const int order = std::max(req.order, 0);
    for (const RunKind kind : requested_kinds(req)) {
        const RunFunctionResult rf = run_coefficients(expr, kind, order);
        // run_coefficients always computes through L_2; print what was asked for.
        std::vector<Number> coeffs(rf.series.coeffs().begin(),
                                   rf.series.coeffs().begin() + order + 1);
        json cell;
        cell["coefficients"] = pmf_to_json(coeffs);
        cell["trunc_error_at_one"] = rf.trunc_error_at_one;
        results[to_string(kind)] = std::move(cell);
    }
    json out;
    out["command"] = "coeffs";
    out["mode"] = to_string(expr.mode());
    out["order"] = req.order;
    out["measure"] = measure_summary_json(expr);
    out["results"] = std::move(results);
    return out;
}

json simulate_report(const MeasureExpr& expr, const SimulateRequest& req) {
    const RunHistogram hist =
        simulate_replicated(expr, req.kind, req.length, req.seed, req.replicas);
    const HistogramSummary summary = summarize(hist);

    json histogram = json::array();
    for (const auto& [len, count] : hist.counts_by_length) {
        histogram.push_back(json::array({len, count}));
    }

    std::vector<std::uint64_t> checkpoints;
    for (std::uint64_t cp = 10; cp <= req.length; cp *= 10) checkpoints.push_back(cp);
    json trace = json::array();
    for (const auto& point : slln_trace(expr, req.kind, 1, checkpoints, req.seed)) {
        trace.push_back(json{{"b", point.b},
                             {"runs", point.runs_started},
                             {"ratio", point.ratio}});
    }

    json out;
    out["command"] = "simulate";
    out["kind"] = to_string(req.kind);
    out["length"] = req.length;
    out["seed"] = req.seed;
    out["replicas"] = req.replicas;
    out["measure"] = measure_summary_json(expr);
    out["runs_started"] = hist.runs_started;
    out["scanned"] = hist.scanned;
    out["histogram"] = std::move(histogram);
    out["final_open_run"] = hist.includes_final_open_run;
    out["empirical"] = json{{"mean", summary.mean},
                            {"variance", summary.variance},
                            {"stderr_mean", summary.stderr_mean}};
    out["slln_trace_n1"] = std::move(trace);

    // Side-by-side theoretical values when the measure admits them.
    try {
        out["theoretical"] =
            json{{"interior_mean", number_to_json(mean(expr, req.kind, Position::Interior))},
                 {"interior_variance", variance(expr, req.kind, Position::Interior)}};
    } catch (const DegenerateMeasureError&) {
        out["theoretical"] = json{{"note", "degenerate measure: interior statistics undefined"}};
    }
    return out;
}

namespace {

struct CheckRecorder {
    json rows = json::array();
    bool passed = true;

    void add(const std::string& name, const std::string& status, json detail) {
        detail["name"] = name;
        detail["status"] = status;
        rows.push_back(std::move(detail));
        if (status == "fail") passed = false;
    }

    void pass_fail(const std::string& name, bool ok, json detail) {
        add(name, ok ? "pass" : "fail", std::move(detail));
    }
};

bool numbers_match(const Number& engine, const Rational& oracle, NumericMode mode) {
    if (mode == NumericMode::Rational) return engine.rat() == oracle;
    const double o = oracle.convert_to<double>();
    const double e = engine.to_double();
    return std::abs(e - o) <= 1e-12 * std::max({1.0, std::abs(e), std::abs(o)});
}

} // namespace

VerifyOutcome verify_measure(const MeasureExpr& expr, const VerifyRequest& req) {
    const ValidationReport vr = validate(expr);
    if (!vr.is_valid || !vr.is_probability) {
        std::string msg = "verify needs a probability measure; total mass is " + vr.total_mass.str();
        for (const auto& issue : vr.issues) msg += "; " + issue;
        throw NotProbabilityError(msg);
    }

    CheckRecorder rec;
    const NumericMode mode = expr.mode();
    const bool atomic = is_purely_atomic(expr);
    const std::size_t atom_count = atomic ? AtomTable::build(expr).size() : 0;

    // --- engine vs oracle, exact ---
    const int coeff_max = 6;
    bool oracle_ok = atomic;
    if (atomic) {
        std::uint64_t tuples = 1;
        for (int i = 0; i < coeff_max && oracle_ok; ++i) {
            if (atom_count != 0 && tuples > req.budget / atom_count) oracle_ok = false;
            tuples *= atom_count;
        }
    }
    if (!oracle_ok) {
        rec.add("oracle", "skip",
                {{"reason", atomic ? "atom count exceeds the tuple budget" : "diffuse mass present"}});
    } else {
        for (const RunKind kind : {RunKind::Strict, RunKind::NonStrict}) {
            const RunFunctionResult rf = run_coefficients(expr, kind, coeff_max);
            bool all_equal = true;
            for (int n = 2; n <= coeff_max; ++n) {
                const Rational expected = oracle_run_coefficient(expr, kind, n, req.budget);
                if (!numbers_match(rf.series.coeff(n), expected, mode)) {
                    all_equal = false;
                    rec.pass_fail("coefficients/" + to_string(kind), false,
                                  {{"n", n},
                                   {"engine", rf.series.coeff(n).str()},
                                   {"oracle", rational_to_string(expected)}});
                    break;
                }
            }
            if (all_equal) {
                rec.pass_fail("coefficients/" + to_string(kind), true,
                              {{"max_n", coeff_max}});
            }

            const bool degenerate_nonstrict = kind == RunKind::NonStrict && vr.is_degenerate;
            if (degenerate_nonstrict) {
                rec.add("pmf/" + to_string(kind), "skip", {{"reason", "degenerate measure"}});
                continue;
            }
            for (const Position position : {Position::Initial, Position::Interior}) {
                const RunStatistics stats = pgf(expr, kind, position, coeff_max - 2);
                bool pmf_equal = true;
                for (int n = 1; n <= coeff_max - 2 && pmf_equal; ++n) {
                    const Rational expected = oracle_run_length_pmf(expr, kind, position, n, req.budget);
                    pmf_equal = numbers_match(stats.pgf_coeffs[static_cast<std::size_t>(n)], expected, mode);
                    if (!pmf_equal) {
                        rec.pass_fail("pmf/" + to_string(kind) + "/" + to_string(position), false,
                                      {{"n", n},
                                       {"engine", stats.pgf_coeffs[static_cast<std::size_t>(n)].str()},
                                       {"oracle", rational_to_string(expected)}});
                    }
                }
                if (pmf_equal) {
                    rec.pass_fail("pmf/" + to_string(kind) + "/" + to_string(position), true,
                                  {{"max_n", coeff_max - 2}});
                }
            }
        }
    }

    // --- engine vs simulation, 4 standard errors ---
    for (const RunKind kind : {RunKind::Strict, RunKind::NonStrict}) {
        if (kind == RunKind::NonStrict && vr.is_degenerate) {
            rec.add("simulation/nonstrict", "skip", {{"reason", "degenerate measure"}});
            continue;
        }
        const RunHistogram hist = simulate_histogram(expr, kind, req.samples, req.seed);
        const HistogramSummary summary = summarize(hist);
        const double w = static_cast<double>(hist.runs_started);

        const RunStatistics interior = pgf(expr, kind, Position::Interior, 8);
        bool ratios_ok = true;
        json ratio_detail = json::array();
        for (std::uint64_t n = 1; n <= 3; ++n) {
            const double p = interior.pgf_coeffs[static_cast<std::size_t>(n)].to_double();
            const auto it = hist.counts_by_length.find(n);
            const double u = it == hist.counts_by_length.end() ? 0.0 : static_cast<double>(it->second);
            const double observed = u / w;
            const double se = std::sqrt(std::max(p * (1.0 - p), 0.0) / w);
            // The histogram includes the run at index 0, whose length follows
            // the initial distribution; allow its 1/W contribution.
            const bool ok = std::abs(observed - p) <= 4.0 * se + 1.0 / w;
            ratios_ok = ratios_ok && ok;
            ratio_detail.push_back(json{{"n", n}, {"expected", p}, {"observed", observed}, {"se", se}});
        }
        rec.pass_fail("simulation/ratios/" + to_string(kind), ratios_ok, {{"detail", ratio_detail}});

        const double expected_mean = mean(expr, kind, Position::Interior).to_double();
        const bool mean_ok = std::abs(summary.mean - expected_mean) <= 4.0 * summary.stderr_mean;
        rec.pass_fail("simulation/mean/" + to_string(kind), mean_ok,
                      {{"expected", expected_mean},
                       {"observed", summary.mean},
                       {"se", summary.stderr_mean}});
    }

    // --- rearrangement: insensitivity of coefficients, sensitivity of records ---
    if (atomic && atom_count >= 2 && flatten_total_order(expr).has_value()) {
        std::vector<std::size_t> reversed(atom_count);
        for (std::size_t i = 0; i < atom_count; ++i) reversed[i] = atom_count - 1 - i;
        const MeasureExpr rearranged = rearrange_atoms(expr, reversed);

        bool insensitive = true;
        for (const RunKind kind : {RunKind::Strict, RunKind::NonStrict}) {
            const RunFunctionResult a = run_coefficients(expr, kind, coeff_max);
            const RunFunctionResult b = run_coefficients(rearranged, kind, coeff_max);
            insensitive = insensitive && a.series == b.series;
        }
        rec.pass_fail("rearrangement/coefficients", insensitive, {{"permutation", "reversal"}});

        const bool record_in_budget =
            atom_count <= req.budget / atom_count / std::max<std::size_t>(atom_count, 1);
        if (record_in_budget) {
            const Rational r_orig = oracle_record_probability(expr, 2, req.budget);
            const Rational r_rear = oracle_record_probability(rearranged, 2, req.budget);
            rec.add("rearrangement/record_probability", "info",
                    {{"original", rational_to_string(r_orig)},
                     {"rearranged", rational_to_string(r_rear)},
                     {"gap", rational_to_string(r_orig - r_rear)},
                     {"note", "record events are sensitive to rearrangement; a gap is expected"}});
        }
    }

    json out;
    out["command"] = "verify";
    out["mode"] = to_string(mode);
    out["order"] = req.order;
    out["samples"] = req.samples;
    out["seed"] = req.seed;
    out["measure"] = measure_summary_json(expr);
    out["checks"] = rec.rows;
    out["passed"] = rec.passed;
    return {std::move(out), rec.passed};
}

namespace {

std::string six_digits(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return buf;
}

std::string scalar_to_text(const json& v) {
    if (v.is_object() && v.contains("num") && v.contains("den")) {
        const std::string num = v["num"].is_string() ? v["num"].get<std::string>()
                                                     : std::to_string(v["num"].get<std::int64_t>());
        const std::string den = v["den"].is_string() ? v["den"].get<std::string>()
                                                     : std::to_string(v["den"].get<std::int64_t>());
        return den == "1" ? num : num + "/" + den;
    }
    if (v.is_number_float()) return six_digits(v.get<double>());
    return v.dump();
}

void render_node(const json& v, const std::string& indent, std::ostringstream& out) {
    if (v.is_object()) {
        for (const auto& [key, value] : v.items()) {
            if (value.is_object() && !(value.contains("num") && value.contains("den"))) {
                out << indent << key << ":\n";
                render_node(value, indent + "  ", out);
            } else if (value.is_array()) {
                out << indent << key << ": ";
                render_node(value, indent, out);
                out << "\n";
            } else {
                out << indent << key << ": " << scalar_to_text(value) << "\n";
            }
        }
        return;
    }
    if (v.is_array()) {
        out << "[";
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i > 0) out << ", ";
            if (v[i].is_array() || (v[i].is_object() && !(v[i].contains("num") && v[i].contains("den")))) {
                out << v[i].dump();
            } else {
                out << scalar_to_text(v[i]);
            }
        }
        out << "]";
        return;
    }
    out << scalar_to_text(v);
}

} // namespace

std::string render_table(const json& report) {
    std::ostringstream out;
    render_node(report, "", out);
    return out.str();
}

} // namespace runlen
