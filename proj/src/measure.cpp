#include "runlen/measure.hpp"

#include "runlen/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace runlen {

using nlohmann::json;

bool operator==(const TotalLeaf& a, const TotalLeaf& b) {
    if (a.diffuse != b.diffuse || a.dropped_mass != b.dropped_mass) return false;
    if (a.atoms.size() != b.atoms.size()) return false;
    auto sorted = [](const std::vector<Atom>& atoms) {
        std::vector<Atom> s = atoms;
        std::sort(s.begin(), s.end(), [](const Atom& x, const Atom& y) { return x.pos < y.pos; });
        return s;
    };
    return sorted(a.atoms) == sorted(b.atoms);
}

bool operator==(const SeriesNode& a, const SeriesNode& b) { return a.children == b.children; }
bool operator==(const ParallelNode& a, const ParallelNode& b) { return a.children == b.children; }

NumericMode MeasureExpr::mode() const {
    if (is_leaf()) return as_leaf().diffuse.mode();
    const auto& children = is_series() ? as_series().children : as_parallel().children;
    return children.empty() ? NumericMode::Rational : children.front().mode();
}

namespace {

const std::vector<MeasureExpr>* children_of(const MeasureExpr& e) {
    if (e.is_series()) return &e.as_series().children;
    if (e.is_parallel()) return &e.as_parallel().children;
    return nullptr;
}

template <typename LeafFn>
void for_each_leaf(const MeasureExpr& e, LeafFn&& fn) {
    if (e.is_leaf()) {
        fn(e.as_leaf());
        return;
    }
    for (const auto& c : *children_of(e)) for_each_leaf(c, fn);
}

// ---------------------------------------------------------------------------
// Parsing

bool doc_has_float_mass(const json& j) {
    if (!j.is_object()) return false;
    const std::string type = j.value("type", "");
    if (type == "total") {
        if (j.contains("diffuse") && j["diffuse"].is_number_float()) return true;
        if (j.contains("atoms")) {
            for (const auto& a : j["atoms"]) {
                if (a.is_object() && a.contains("mass") && a["mass"].is_number_float()) return true;
            }
        }
        return false;
    }
    if (type == "series" || type == "parallel") {
        if (j.contains("children")) {
            for (const auto& c : j["children"]) {
                if (doc_has_float_mass(c)) return true;
            }
        }
    }
    return false; // geometric p is required to be exact
}

Rational rational_from_json(const json& j, const std::string& what) {
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    if (j.is_number_unsigned()) return Rational(BigInt(j.get<std::uint64_t>()));
    if (j.is_string()) return rational_from_string(j.get<std::string>());
    if (j.is_object()) {
        if (!j.contains("num") || !j.contains("den")) {
            throw ParseError(what + ": rational object needs \"num\" and \"den\"", 0);
        }
        const auto get_int = [&](const json& v) -> BigInt {
            if (v.is_number_integer()) return BigInt(v.get<std::int64_t>());
            if (v.is_number_unsigned()) return BigInt(v.get<std::uint64_t>());
            if (v.is_string()) return BigInt(v.get<std::string>());
            throw ParseError(what + ": num/den must be integers", 0);
        };
        BigInt num = get_int(j["num"]);
        BigInt den = get_int(j["den"]);
        if (den == 0) throw ParseError(what + ": zero denominator", 0);
        return Rational(num, den);
    }
    if (j.is_number_float()) {
        throw ParseError(what + ": non-integer numeric literal is not allowed in rational mode"
                                " (use {\"num\":...,\"den\":...})", 0);
    }
    throw ParseError(what + ": expected a number or rational object", 0);
}

Number mass_from_json(const json& j, NumericMode mode, const std::string& what) {
    if (mode == NumericMode::Float) {
        if (j.is_number()) return Number::real(j.get<double>());
        return Number::real(rational_from_json(j, what).convert_to<double>());
    }
    return Number::rational(rational_from_json(j, what));
}

MeasureExpr node_from_json(const json& j, NumericMode mode) {
    if (!j.is_object()) throw ParseError("measure node must be a JSON object", 0);
    if (!j.contains("type")) throw ParseError("missing required field \"type\"", 0);
    const std::string type = j["type"].get<std::string>();

    if (type == "total") {
        TotalLeaf leaf;
        leaf.diffuse = j.contains("diffuse") ? mass_from_json(j["diffuse"], mode, "diffuse")
                                             : Number::zero(mode);
        leaf.dropped_mass = j.contains("dropped") ? mass_from_json(j["dropped"], mode, "dropped")
                                                  : Number::zero(mode);
        if (j.contains("atoms")) {
            if (!j["atoms"].is_array()) throw ParseError("\"atoms\" must be an array", 0);
            for (const auto& a : j["atoms"]) {
                if (!a.is_object() || !a.contains("pos") || !a.contains("mass")) {
                    throw ParseError("atom needs \"pos\" and \"mass\"", 0);
                }
                Atom atom;
                atom.pos = a["pos"].is_number() ? a["pos"].get<double>()
                                                : rational_from_json(a["pos"], "pos").convert_to<double>();
                atom.mass = mass_from_json(a["mass"], mode, "mass");
                leaf.atoms.push_back(std::move(atom));
            }
        }
        return MeasureExpr::leaf(std::move(leaf));
    }

    if (type == "series" || type == "parallel") {
        if (!j.contains("children")) throw ParseError("missing required field \"children\"", 0);
        if (!j["children"].is_array() || j["children"].empty()) {
            throw ParseError("\"children\" must be a non-empty array", 0);
        }
        std::vector<MeasureExpr> children;
        children.reserve(j["children"].size());
        for (const auto& c : j["children"]) children.push_back(node_from_json(c, mode));
        return type == "series" ? MeasureExpr::series(std::move(children))
                                : MeasureExpr::parallel(std::move(children));
    }

    if (type == "geometric") {
        if (!j.contains("p")) throw ParseError("missing required field \"p\"", 0);
        if (!j.contains("tail_epsilon")) throw ParseError("missing required field \"tail_epsilon\"", 0);
        const Rational p = rational_from_json(j["p"], "p");
        Rational eps;
        if (j["tail_epsilon"].is_number_float()) {
            eps = rational_from_double(j["tail_epsilon"].get<double>());
        } else {
            eps = rational_from_json(j["tail_epsilon"], "tail_epsilon");
        }
        GeometricAtoms g = build_geometric_atoms(p, eps);
        return mode == NumericMode::Rational ? g.leaf : convert_mode(g.leaf, NumericMode::Float);
    }

    throw ParseError("unknown node type \"" + type + "\"", 0);
}

// ---------------------------------------------------------------------------
// Serialization

json rational_to_json(const Rational& r) {
    static const BigInt kInt64Max = BigInt(std::numeric_limits<std::int64_t>::max());
    static const BigInt kInt64Min = BigInt(std::numeric_limits<std::int64_t>::min());
    const BigInt num = boost::multiprecision::numerator(r);
    const BigInt den = boost::multiprecision::denominator(r);
    json out;
    // Values beyond int64 are emitted as decimal strings so nothing is rounded.
    out["num"] = (num <= kInt64Max && num >= kInt64Min) ? json(num.convert_to<std::int64_t>())
                                                        : json(num.str());
    out["den"] = (den <= kInt64Max) ? json(den.convert_to<std::int64_t>()) : json(den.str());
    return out;
}

json mass_to_json(const Number& n) {
    if (n.is_rational()) return rational_to_json(n.rat());
    return json(n.dbl());
}

json node_to_json(const MeasureExpr& e) {
    json out;
    if (e.is_leaf()) {
        const TotalLeaf& leaf = e.as_leaf();
        out["type"] = "total";
        out["diffuse"] = mass_to_json(leaf.diffuse);
        out["atoms"] = json::array();
        for (const auto& a : leaf.atoms) {
            out["atoms"].push_back({{"pos", a.pos}, {"mass", mass_to_json(a.mass)}});
        }
        if (!leaf.dropped_mass.is_zero()) out["dropped"] = mass_to_json(leaf.dropped_mass);
        return out;
    }
    out["type"] = e.is_series() ? "series" : "parallel";
    out["children"] = json::array();
    for (const auto& c : *children_of(e)) out["children"].push_back(node_to_json(c));
    return out;
}

} // namespace

MeasureExpr parse_measure_spec(const std::string& text, ModeRequest mode) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(e.what(), e.byte);
    }
    NumericMode resolved;
    switch (mode) {
        case ModeRequest::Rational:
            if (doc_has_float_mass(doc)) {
                throw ParseError("rational mode requested but the document contains a"
                                 " non-integer numeric mass; write it as {\"num\":...,\"den\":...}", 0);
            }
            resolved = NumericMode::Rational;
            break;
        case ModeRequest::Float:
            resolved = NumericMode::Float;
            break;
        case ModeRequest::Auto:
        default:
            resolved = doc_has_float_mass(doc) ? NumericMode::Float : NumericMode::Rational;
            break;
    }
    return node_from_json(doc, resolved);
}

std::string serialize_measure(const MeasureExpr& expr) {
    return node_to_json(expr).dump();
}

ValidationReport validate(const MeasureExpr& expr) {
    ValidationReport report;
    const NumericMode mode = expr.mode();
    report.total_mass = Number::zero(mode);
    bool mass_ok = true;

    struct Walker {
        ValidationReport& report;
        NumericMode mode;
        bool& mass_ok;

        void walk(const MeasureExpr& e) {
            if (e.is_leaf()) {
                check_leaf(e.as_leaf());
                return;
            }
            const auto& children = e.is_series() ? e.as_series().children : e.as_parallel().children;
            if (children.empty()) {
                report.issues.push_back("composition node with no children");
                mass_ok = false;
                return;
            }
            for (const auto& c : children) walk(c);
        }

        void check_leaf(const TotalLeaf& leaf) {
            check_mass(leaf.diffuse, "diffuse mass", true);
            check_mass(leaf.dropped_mass, "dropped mass", false);
            std::set<double> seen;
            for (const auto& a : leaf.atoms) {
                check_mass(a.mass, "atom mass", true);
                if (!(a.pos >= 0.0 && a.pos <= 1.0)) {
                    report.issues.push_back("atom position " + std::to_string(a.pos) + " outside [0,1]");
                    mass_ok = false;
                }
                if (!seen.insert(a.pos).second) {
                    report.issues.push_back("duplicate atom position " + std::to_string(a.pos));
                    mass_ok = false;
                }
            }
        }

        void check_mass(const Number& m, const char* what, bool counts_toward_total) {
            if (m.mode() != mode) {
                report.issues.push_back(std::string(what) + " has mixed numeric mode");
                mass_ok = false;
                return;
            }
            if (m.mode() == NumericMode::Float && !std::isfinite(m.dbl())) {
                report.issues.push_back(std::string(what) + " is not finite");
                mass_ok = false;
                return;
            }
            if (m.is_negative()) {
                report.issues.push_back(std::string(what) + " is negative (" + m.str() + ")");
                mass_ok = false;
                return;
            }
            if (counts_toward_total) report.total_mass += m;
        }
    };

    Walker{report, mode, mass_ok}.walk(expr);
    report.is_valid = mass_ok;
    if (!report.is_valid) return report;

    if (mode == NumericMode::Rational) {
        report.is_probability = report.total_mass.rat() == 1;
    } else {
        report.is_probability = std::abs(report.total_mass.dbl() - 1.0) <= 1e-12;
    }

    if (!report.total_mass.is_zero()) {
        bool degenerate = false;
        for_each_leaf(expr, [&](const TotalLeaf& leaf) {
            for (const auto& a : leaf.atoms) {
                if (a.mass == report.total_mass) degenerate = true;
            }
        });
        report.is_degenerate = degenerate;
    }
    return report;
}

Number total_mass(const MeasureExpr& expr) {
    Number sum = Number::zero(expr.mode());
    for_each_leaf(expr, [&](const TotalLeaf& leaf) {
        sum += leaf.diffuse;
        for (const auto& a : leaf.atoms) sum += a.mass;
    });
    return sum;
}

Number total_dropped_mass(const MeasureExpr& expr) {
    Number sum = Number::zero(expr.mode());
    for_each_leaf(expr, [&](const TotalLeaf& leaf) { sum += leaf.dropped_mass; });
    return sum;
}

namespace {

bool collect_total_order(const MeasureExpr& e, std::vector<const TotalLeaf*>& leaves) {
    if (e.is_leaf()) {
        leaves.push_back(&e.as_leaf());
        return true;
    }
    if (e.is_series()) {
        for (const auto& c : e.as_series().children) {
            if (!collect_total_order(c, leaves)) return false;
        }
        return true;
    }
    // A parallel node stays a total order only when at most one child carries mass.
    const auto& children = e.as_parallel().children;
    const MeasureExpr* live = nullptr;
    for (const auto& c : children) {
        if (!total_mass(c).is_zero()) {
            if (live != nullptr) return false;
            live = &c;
        }
    }
    return live == nullptr || collect_total_order(*live, leaves);
}

} // namespace

std::optional<FlatTotalOrder> flatten_total_order(const MeasureExpr& expr) {
    std::vector<const TotalLeaf*> leaves;
    if (!collect_total_order(expr, leaves)) return std::nullopt;

    const NumericMode mode = expr.mode();
    FlatTotalOrder flat;
    flat.diffuse = Number::zero(mode);
    flat.dropped_mass = Number::zero(mode);

    const double width = leaves.empty() ? 1.0 : 1.0 / static_cast<double>(leaves.size());
    for (std::size_t li = 0; li < leaves.size(); ++li) {
        flat.diffuse += leaves[li]->diffuse;
        flat.dropped_mass += leaves[li]->dropped_mass;
        std::vector<Atom> sorted = leaves[li]->atoms;
        std::sort(sorted.begin(), sorted.end(), [](const Atom& a, const Atom& b) { return a.pos < b.pos; });
        for (auto& a : sorted) {
            if (leaves.size() > 1) a.pos = (static_cast<double>(li) + a.pos) * width;
            flat.atoms.push_back(std::move(a));
        }
    }
    return flat;
}

bool is_purely_atomic(const MeasureExpr& expr) {
    bool atomic = true;
    for_each_leaf(expr, [&](const TotalLeaf& leaf) {
        if (!leaf.diffuse.is_zero()) atomic = false;
    });
    return atomic;
}

AtomMassProfile atom_mass_multiset(const MeasureExpr& expr) {
    auto flat = flatten_total_order(expr);
    if (!flat) {
        throw NotTotalOrderError("atom_mass_multiset requires a total order"
                                 " (parallel branching with two or more massive children found)");
    }
    AtomMassProfile profile;
    profile.diffuse = flat->diffuse;
    for (const auto& a : flat->atoms) profile.masses.push_back(a.mass);
    std::sort(profile.masses.begin(), profile.masses.end(),
              [](const Number& a, const Number& b) { return a < b; });
    return profile;
}

GeometricAtoms build_geometric_atoms(const Rational& p, const Rational& tail_epsilon) {
    if (!(p > 0 && p < 1)) {
        throw InvalidArgumentError("geometric parameter p must lie in (0,1), got " + rational_to_string(p));
    }
    if (!(tail_epsilon > 0)) {
        throw InvalidArgumentError("tail_epsilon must be positive");
    }
    const Rational q = 1 - p;
    // Minimal K with q^K <= tail_epsilon, but never an empty atom list.
    int k = 0;
    Rational residual(1);
    while (residual > tail_epsilon || k == 0) {
        residual *= q;
        ++k;
        if (k > 1'000'000) throw InvalidArgumentError("tail_epsilon too small: geometric truncation overflow");
    }

    TotalLeaf leaf;
    leaf.diffuse = Number::rational(Rational(0));
    leaf.dropped_mass = Number::rational(residual);
    Rational mass = p;
    for (int i = 0; i < k; ++i) {
        const double pos = static_cast<double>(i) / static_cast<double>(i + 1);
        leaf.atoms.push_back(Atom{pos, Number::rational(mass)});
        mass *= q;
    }
    GeometricAtoms out;
    out.dropped_mass = leaf.dropped_mass;
    out.atom_count = k;
    out.leaf = MeasureExpr::leaf(std::move(leaf));
    return out;
}

MeasureExpr rearrange_atoms(const MeasureExpr& expr, const std::vector<std::size_t>& perm) {
    auto flat = flatten_total_order(expr);
    if (!flat) throw NotTotalOrderError("rearrange_atoms requires a total order");
    const std::size_t n = flat->atoms.size();
    if (perm.size() != n) {
        throw InvalidArgumentError("permutation size " + std::to_string(perm.size()) +
                                   " does not match atom count " + std::to_string(n));
    }
    std::vector<bool> used(n, false);
    for (std::size_t i : perm) {
        if (i >= n || used[i]) {
            throw InvalidArgumentError("position reassignment is not a bijection");
        }
        used[i] = true;
    }

    TotalLeaf leaf;
    leaf.diffuse = flat->diffuse;
    leaf.dropped_mass = flat->dropped_mass;
    for (std::size_t i = 0; i < n; ++i) {
        leaf.atoms.push_back(Atom{flat->atoms[perm[i]].pos, flat->atoms[i].mass});
    }
    std::sort(leaf.atoms.begin(), leaf.atoms.end(), [](const Atom& a, const Atom& b) { return a.pos < b.pos; });
    return MeasureExpr::leaf(std::move(leaf));
}

namespace {

template <typename MassFn>
MeasureExpr map_masses(const MeasureExpr& e, MassFn&& fn) {
    if (e.is_leaf()) {
        TotalLeaf leaf = e.as_leaf();
        leaf.diffuse = fn(leaf.diffuse);
        leaf.dropped_mass = fn(leaf.dropped_mass);
        for (auto& a : leaf.atoms) a.mass = fn(a.mass);
        return MeasureExpr::leaf(std::move(leaf));
    }
    std::vector<MeasureExpr> children;
    for (const auto& c : *children_of(e)) children.push_back(map_masses(c, fn));
    return e.is_series() ? MeasureExpr::series(std::move(children))
                         : MeasureExpr::parallel(std::move(children));
}

} // namespace

MeasureExpr normalize_to_probability(const MeasureExpr& expr) {
    const Number total = total_mass(expr);
    if (total.is_zero()) throw InvalidArgumentError("cannot normalize the zero measure");
    return map_masses(expr, [&](const Number& m) { return m / total; });
}

MeasureExpr convert_mode(const MeasureExpr& expr, NumericMode target) {
    return map_masses(expr, [&](const Number& m) { return m.converted_to(target); });
}

} // namespace runlen
