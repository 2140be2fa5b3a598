// Command-line front end: run-length statistics, run-function coefficients,
// seeded simulation, and three-way verification for measure specs on
// series-parallel orders.

#include "runlen/errors.hpp"
#include "runlen/examples.hpp"
#include "runlen/report.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitInputError = 2;
constexpr int kExitDegenerate = 3;

int default_order() {
    if (const char* env = std::getenv("RUNLEN_ORDER")) {
        const int order = std::atoi(env);
        if (order >= 1) return order;
    }
    return runlen::kDefaultOrder;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw runlen::InvalidArgumentError("cannot open spec file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

runlen::ModeRequest mode_from_flag(const std::string& mode) {
    if (mode == "auto") return runlen::ModeRequest::Auto;
    if (mode == "rational") return runlen::ModeRequest::Rational;
    if (mode == "float") return runlen::ModeRequest::Float;
    throw runlen::InvalidArgumentError("unknown mode: " + mode);
}

runlen::MeasureExpr load_measure(const std::string& path, const std::string& mode) {
    return runlen::parse_measure_spec(read_file(path), mode_from_flag(mode));
}

void emit(const json& report, const std::string& format) {
    if (format == "table") {
        std::cout << runlen::render_table(report);
    } else {
        std::cout << report.dump(2) << "\n";
    }
}

void apply_kind_flag(runlen::StatsRequest& req, const std::string& kind) {
    req.strict = kind == "strict" || kind == "both";
    req.nonstrict = kind == "nonstrict" || kind == "both";
    if (!req.strict && !req.nonstrict) throw runlen::InvalidArgumentError("unknown kind: " + kind);
}

void apply_position_flag(runlen::StatsRequest& req, const std::string& position) {
    req.initial = position == "initial" || position == "both";
    req.interior = position == "interior" || position == "both";
    if (!req.initial && !req.interior) {
        throw runlen::InvalidArgumentError("unknown position: " + position);
    }
}

runlen::RunKind single_kind(const std::string& kind) {
    if (kind == "strict") return runlen::RunKind::Strict;
    if (kind == "nonstrict") return runlen::RunKind::NonStrict;
    throw runlen::InvalidArgumentError("unknown kind: " + kind);
}

json run_examples_command(const std::string& name, int n, const std::string& p_text,
                          double tail_epsilon, const runlen::StatsRequest& stats_req) {
    using namespace runlen;
    MeasureExpr expr;
    json params;
    if (name == "exp") {
        expr = make_diffuse_unit();
    } else if (name == "die") {
        expr = make_die(n);
        params["n"] = n;
    } else if (name == "dart") {
        expr = make_dart(rational_from_string(p_text));
        params["p"] = p_text;
    } else if (name == "bulb") {
        expr = make_bulb(rational_from_string(p_text), rational_from_double(tail_epsilon));
        params["p"] = p_text;
        params["tail_epsilon"] = tail_epsilon;
    } else if (name == "evendie") {
        expr = make_even_die(n);
        params["n"] = n;
    } else {
        throw InvalidArgumentError("unknown example: " + name +
                                   " (expected exp|die|dart|bulb|evendie)");
    }

    json out = stats_report(expr, stats_req);
    out["command"] = "examples";
    out["example"] = name;
    if (!params.empty()) out["params"] = params;
    out["spec"] = json::parse(serialize_measure(expr));
    if (name == "evendie") {
        const EvenDieMeans means = even_die_stats(n);
        out["means"] = json{{"strict_initial", number_to_json(means.strict_initial)},
                            {"nonstrict_initial", number_to_json(means.nonstrict_initial)},
                            {"strict_interior", number_to_json(means.strict_interior)},
                            {"nonstrict_interior", number_to_json(means.nonstrict_interior)}};
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Run-length statistics for i.i.d. sequences on series-parallel orders"};
    app.require_subcommand(1);

    std::string spec_path;
    std::string kind = "both";
    std::string position = "both";
    std::string format = "json";
    std::string mode = "auto";
    int order = default_order();

    auto* stats = app.add_subcommand("stats", "Means, variances and run-length pmfs");
    stats->add_option("spec", spec_path, "measure spec (JSON)")->required();
    stats->add_option("--kind", kind, "strict|nonstrict|both");
    stats->add_option("--position", position, "initial|interior|both");
    stats->add_option("--order", order, "truncation order");
    stats->add_option("--format", format, "json|table");
    stats->add_option("--mode", mode, "auto|rational|float");

    auto* coeffs = app.add_subcommand("coeffs", "Run-function coefficients L_0..L_N");
    coeffs->add_option("spec", spec_path, "measure spec (JSON)")->required();
    coeffs->add_option("--kind", kind, "strict|nonstrict|both");
    coeffs->add_option("--order", order, "truncation order");
    coeffs->add_option("--format", format, "json|table");
    coeffs->add_option("--mode", mode, "auto|rational|float");

    std::string sim_kind = "strict";
    std::uint64_t length = 100'000;
    std::uint64_t seed = 42;
    unsigned replicas = 1;
    auto* simulate = app.add_subcommand("simulate", "Seeded Monte Carlo run histogram");
    simulate->add_option("spec", spec_path, "measure spec (JSON)")->required();
    simulate->add_option("--kind", sim_kind, "strict|nonstrict");
    simulate->add_option("--length", length, "indices scanned per replica")->check(CLI::PositiveNumber);
    simulate->add_option("--seed", seed, "RNG seed");
    simulate->add_option("--replicas", replicas, "independent replicas")->check(CLI::PositiveNumber);
    simulate->add_option("--format", format, "json|table");
    simulate->add_option("--mode", mode, "auto|rational|float");

    std::uint64_t samples = 200'000;
    auto* verify = app.add_subcommand("verify", "Engine vs oracle vs simulation checks");
    verify->add_option("spec", spec_path, "measure spec (JSON)")->required();
    verify->add_option("--order", order, "truncation order");
    verify->add_option("--samples", samples, "simulation length")->check(CLI::PositiveNumber);
    verify->add_option("--seed", seed, "RNG seed");
    verify->add_option("--format", format, "json|table");
    verify->add_option("--mode", mode, "auto|rational|float");

    std::string example_name;
    int example_n = 6;
    std::string example_p = "1/2";
    double tail_epsilon = 1e-12;
    auto* examples = app.add_subcommand("examples", "Built-in example measures with statistics");
    examples->add_option("name", example_name, "exp|die|dart|bulb|evendie")->required();
    examples->add_option("--n", example_n, "faces (die) or faces per parity chain (evendie)");
    examples->add_option("--p", example_p, "atom mass parameter, e.g. 1/2");
    examples->add_option("--tail-epsilon", tail_epsilon, "geometric truncation tail bound");
    examples->add_option("--kind", kind, "strict|nonstrict|both");
    examples->add_option("--position", position, "initial|interior|both");
    examples->add_option("--order", order, "truncation order");
    examples->add_option("--format", format, "json|table");

    CLI11_PARSE(app, argc, argv);

    try {
        runlen::StatsRequest stats_req;
        apply_kind_flag(stats_req, kind);
        apply_position_flag(stats_req, position);
        stats_req.order = order;

        if (stats->parsed()) {
            emit(runlen::stats_report(load_measure(spec_path, mode), stats_req), format);
        } else if (coeffs->parsed()) {
            emit(runlen::coeffs_report(load_measure(spec_path, mode), stats_req), format);
        } else if (simulate->parsed()) {
            runlen::SimulateRequest req;
            req.kind = single_kind(sim_kind);
            req.length = length;
            req.seed = seed;
            req.replicas = replicas;
            req.order = order;
            emit(runlen::simulate_report(load_measure(spec_path, mode), req), format);
        } else if (verify->parsed()) {
            runlen::VerifyRequest req;
            req.order = order;
            req.samples = samples;
            req.seed = seed;
            const runlen::VerifyOutcome outcome =
                runlen::verify_measure(load_measure(spec_path, mode), req);
            emit(outcome.report, format);
            return outcome.passed ? kExitOk : kExitVerifyFailed;
        } else if (examples->parsed()) {
            emit(run_examples_command(example_name, example_n, example_p, tail_epsilon, stats_req),
                 format);
        }
        return kExitOk;
    } catch (const runlen::DegenerateMeasureError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDegenerate;
    } catch (const runlen::ParseError& e) {
        std::cerr << "error: " << e.what() << " (byte offset " << e.byte_offset() << ")\n";
        return kExitInputError;
    } catch (const runlen::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}
