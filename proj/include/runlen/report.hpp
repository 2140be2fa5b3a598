#pragma once

#include "runlen/measure.hpp"
#include "runlen/run_statistics.hpp"
#include "runlen/sampler.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>

namespace runlen {

/// Rational -> {"num":..,"den":..} (decimal strings beyond int64); float ->
/// JSON number.
nlohmann::json number_to_json(const Number& n);

struct StatsRequest {
    bool strict = true;
    bool nonstrict = true;
    bool initial = true;
    bool interior = true;
    int order = kDefaultOrder;
};

struct SimulateRequest {
    RunKind kind = RunKind::Strict;
    std::uint64_t length = 100'000;
    std::uint64_t seed = 42;
    unsigned replicas = 1;
    int order = kDefaultOrder; // for the theoretical comparison block
};

struct VerifyRequest {
    int order = kDefaultOrder;
    std::uint64_t samples = 200'000;
    std::uint64_t seed = 42;
    std::uint64_t budget = kDefaultTupleBudget;
};

nlohmann::json measure_summary_json(const MeasureExpr& expr);

/// Means, variances and pmfs keyed by (kind, position). Throws
/// DegenerateMeasureError when a non-strict result is requested for a
/// degenerate measure, NotProbabilityError on invalid input.
nlohmann::json stats_report(const MeasureExpr& expr, const StatsRequest& req);

/// Run coefficients L_0..L_order per requested kind.
nlohmann::json coeffs_report(const MeasureExpr& expr, const StatsRequest& req);

nlohmann::json simulate_report(const MeasureExpr& expr, const SimulateRequest& req);

struct VerifyOutcome {
    nlohmann::json report;
    bool passed = true;
};

/// Three-way check: closed-form engine vs enumeration oracle (exact) vs
/// seeded simulation (4 standard errors). Record-probability rearrangement
/// gaps are reported as informational rows, never failures.
VerifyOutcome verify_measure(const MeasureExpr& expr, const VerifyRequest& req);

/// Renders any of the above reports as aligned text with floats at 6
/// significant digits.
std::string render_table(const nlohmann::json& report);

} // namespace runlen
