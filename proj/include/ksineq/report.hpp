#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <ksineq/bounds.hpp>
#include <ksineq/graph.hpp>
#include <ksineq/inequalities.hpp>
#include <ksineq/ks_assign.hpp>
#include <ksineq/quad_form.hpp>
#include <ksineq/ray_set.hpp>
#include <ksineq/realize.hpp>
#include <ksineq/serialize.hpp>

namespace ksineq {

/// How a claim's computed value is judged against its expected value.
/// `info` claims record a finding and never affect the verdict.
enum class Relation { eq, le, lt, gt, info };

inline std::string_view to_string(Relation r)
{
    switch (r) {
    case Relation::eq:
        return "eq";
    case Relation::le:
        return "le";
    case Relation::lt:
        return "lt";
    case Relation::gt:
        return "gt";
    case Relation::info:
        return "info";
    }
    return "?";
}

struct Claim {
    std::string name;
    std::optional<Rational> expected;
    std::optional<Rational> computed; // empty when the check produced no value (e.g. not a scalar operator)
    Relation relation = Relation::eq;
    bool verified = false;
    std::string method;
    double elapsed_ms = 0;
};

struct Report {
    std::size_t dimension = 0;
    std::size_t ray_count = 0;
    std::vector<Claim> claims;

    bool all_verified() const
    {
        for (const auto& c : claims)
            if (c.relation != Relation::info && !c.verified)
                return false;
        return true;
    }

    /// 0 when every non-informational claim holds, 1 otherwise.
    int exit_code() const { return all_verified() ? 0 : 1; }
};

struct ReportOptions {
    unsigned threads = 1;
    std::uint64_t seed = 0;
    std::uint64_t realize_seeds = 50;
    std::uint64_t realize_max_sweeps = 10000;
    double realize_tolerance = realize_limits::signature_tolerance;
    std::size_t max_dimension = 24; // branch-and-bound and clique search grow quickly beyond this
};

inline bool judge(Relation r, const std::optional<Rational>& expected, const std::optional<Rational>& computed)
{
    if (!computed)
        return false;
    switch (r) {
    case Relation::eq:
        return expected && *computed == *expected;
    case Relation::le:
        return expected && *computed <= *expected;
    case Relation::lt:
        return expected && *computed < *expected;
    case Relation::gt:
        return expected && *computed > *expected;
    case Relation::info:
        return expected && *computed == *expected;
    }
    return false;
}

namespace detail {

class ClaimRecorder {
public:
    explicit ClaimRecorder(Report& r) : report_(r) {}

    /// Times `compute` and appends the judged claim.
    void record(std::string name, std::optional<Rational> expected, Relation relation, std::string method,
                const std::function<std::optional<Rational>()>& compute)
    {
        const auto start = std::chrono::steady_clock::now();
        Claim c{std::move(name), std::move(expected), compute(), relation, false, std::move(method), 0};
        c.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        c.verified = judge(c.relation, c.expected, c.computed);
        report_.claims.push_back(std::move(c));
    }

private:
    Report& report_;
};

inline std::optional<Rational> count(std::size_t n) { return Rational(static_cast<std::int64_t>(n)); }

} // namespace detail

/// Builds the ray set for d and checks every claim that applies to it.
/// Throws std::invalid_argument for d < 3 or d above options.max_dimension.
inline Report run_report(std::size_t d, const ReportOptions& options = {})
{
    if (d < 3)
        throw std::invalid_argument("dimension must be at least 3, got " + std::to_string(d));
    if (d > options.max_dimension)
        throw std::invalid_argument("dimension " + std::to_string(d) + " exceeds the configured cap of " +
                                    std::to_string(options.max_dimension));

    Report report;
    report.dimension = d;
    detail::ClaimRecorder rec(report);

    const RaySet s = build_for_dimension(d);
    report.ray_count = s.size();
    rec.record("ray_count_table", detail::count(ray_count_table(d)), Relation::eq, "construction",
               [&] { return detail::count(s.size()); });
    rec.record("ray_count_formula", detail::count(ray_count_formula(d)), Relation::eq, "construction",
               [&] { return detail::count(s.size()); });

    const QuadForm f = inequality_for_dimension(d, s);
    rec.record("quantum_value", f.quantum_value(), Relation::eq, "exact_operator",
               [&] { return scalar_identity_check(quantum_operator(f, s)); });

    // Classical maximum by every applicable solver.
    const Relation classical = d >= 6 ? Relation::le : Relation::eq;
    std::optional<Rational> maximum;
    auto remember = [&](const BoundResult& r) {
        maximum = r.maximum;
        return std::optional<Rational>(r.maximum);
    };
    if (f.variables().size() <= exhaustive_variable_cap)
        rec.record("classical_bound", f.classical_bound(), classical, "exhaustive",
                   [&] { return remember(max_exhaustive(f, options.threads)); });
    rec.record("classical_bound", f.classical_bound(), classical, "branch_bound",
               [&] { return remember(max_branch_bound(f)); });
    if (s.layout())
        rec.record("classical_bound", f.classical_bound(), classical, "block_dp",
                   [&] { return remember(max_block_dp(f, *s.layout())); });
    if (d >= 6)
        rec.record("classical_bound_attained", f.classical_bound(), Relation::info, "solvers above",
                   [&] { return maximum; });
    rec.record("contextuality_gap", f.quantum_value(), Relation::lt, "classical_max", [&] { return maximum; });

    // KS value assignments with completeness on every basis.
    rec.record("basis_count", std::nullopt, Relation::info, "clique_enumeration",
               [&] { return detail::count(enumerate_bases(s).size()); });
    std::vector<Assignment> ks;
    // None exist for the 18-ray set; some exist for the 13-ray set.
    rec.record("ks_assignments", d <= 4 ? std::optional<Rational>(0) : std::nullopt,
               d == 4 ? Relation::eq : d == 3 ? Relation::gt : Relation::info, "ks_search",
               [&] {
                   ks = find_ks_assignments(s);
                   return detail::count(ks.size());
               });

    if (d == 4) {
        rec.record("disjoint_edge_cover", Rational(0), Relation::eq, "backtracking",
                   [] { return detail::count(disjoint_edge_cover_exists(base_graph_9()) ? 1 : 0); });
        const RaySet s18 = build_18ray();
        // The reading with completeness at all nine vertex bases has no feasible assignment at all.
        rec.record("hexagon_all_vertex_bases_feasible", Rational(0), Relation::eq, "ks_search", [&] {
            std::vector<Basis> all;
            for (const auto& v : base_graph_9().labels())
                all.push_back(vertex_basis(v));
            return detail::count(find_ks_assignments(s18, partial_ks_constraints(s18, all), 1).size());
        });
        for (const auto& triple : independent_triples(base_graph_9())) {
            const QuadForm hex = build_hexagon(triple);
            const std::string tag = triple[0] + triple[1] + triple[2];
            rec.record("hexagon_" + tag + "_quantum", hex.quantum_value(), Relation::eq, "exact_operator",
                       [&] { return scalar_identity_check(quantum_operator(hex, s18)); });
            rec.record("hexagon_" + tag + "_ks_max", hex.classical_bound(), Relation::eq, "ks_search",
                       [&]() -> std::optional<Rational> {
                           auto c = partial_ks_constraints(
                               s18, {vertex_basis(triple[0]), vertex_basis(triple[1]), vertex_basis(triple[2])});
                           auto r = max_over_constrained(hex, s18, c);
                           return r ? std::optional<Rational>(r->maximum) : std::nullopt;
                       });
        }
    }
    if (d == 5) {
        const QuadForm lp = build_L5prime();
        rec.record("L5prime_quantum", lp.quantum_value(), Relation::eq, "exact_operator",
                   [&] { return scalar_identity_check(quantum_operator(lp, s)); });
        if (!ks.empty())
            rec.record("L5prime_ks_max", lp.classical_bound(), Relation::le, "ks_search",
                       [&]() -> std::optional<Rational> {
                           auto r = max_over_constrained(lp, s, full_ks_constraints(s));
                           return r ? std::optional<Rational>(r->maximum) : std::nullopt;
                       });
    }

    // Uniqueness of the realization of the orthogonality pattern.
    if (d == 3 || d == 4) {
        const Graph g = d == 4 ? line_graph(base_graph_9()) : orthogonality_graph(s);
        RealizationSummary summary;
        rec.record("realization_usable", Rational(0), Relation::gt, "alternating_minimization", [&] {
            summary = realize_seeds(g, d, options.realize_seeds, options.realize_max_sweeps, &s,
                                    options.realize_tolerance, options.seed);
            return detail::count(summary.nondegenerate);
        });
        rec.record("realization_matched_fraction", Rational(1), Relation::eq, "gram_signature",
                   [&]() -> std::optional<Rational> {
                       if (summary.nondegenerate == 0)
                           return std::nullopt;
                       return Rational(static_cast<std::int64_t>(summary.matched),
                                       static_cast<std::int64_t>(summary.nondegenerate));
                   });
    }
    return report;
}

/// Deterministic JSON: timings are included only when asked for.
inline Json to_json(const Report& r, bool with_timings = false)
{
    Json claims = Json::array();
    for (const auto& c : r.claims) {
        Json j = {{"name", c.name},
                  {"expected", c.expected ? Json(c.expected->to_string()) : Json(nullptr)},
                  {"computed", c.computed ? Json(c.computed->to_string()) : Json(nullptr)},
                  {"relation", std::string(to_string(c.relation))},
                  {"verified", c.verified},
                  {"method", c.method}};
        if (with_timings)
            j["elapsed_ms"] = c.elapsed_ms;
        claims.push_back(std::move(j));
    }
    return {{"dimension", r.dimension},
            {"ray_count", r.ray_count},
            {"all_verified", r.all_verified()},
            {"claims", std::move(claims)}};
}

inline std::string to_text(const Report& r)
{
    std::ostringstream out;
    out << "dimension " << r.dimension << ", " << r.ray_count << " rays\n";
    for (const auto& c : r.claims) {
        const char* tag = c.relation == Relation::info ? "info" : c.verified ? "ok  " : "FAIL";
        const char* op = c.relation == Relation::le ? "<="
                         : c.relation == Relation::lt ? "< "
                         : c.relation == Relation::gt ? "> "
                                                      : "= ";
        out << "  [" << tag << "] " << std::left << std::setw(34) << c.name << " computed "
            << std::setw(8) << (c.computed ? c.computed->to_string() : "-");
        if (c.expected)
            out << " expected " << op << ' ' << std::setw(8) << c.expected->to_string();
        out << "  (" << c.method << ", " << std::fixed << std::setprecision(1) << c.elapsed_ms << " ms)\n";
        out.unsetf(std::ios::fixed);
    }
    out << (r.all_verified() ? "all claims verified\n" : "some claims refuted\n");
    return out.str();
}

} // namespace ksineq
