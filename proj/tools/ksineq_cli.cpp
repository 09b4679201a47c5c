// ksineq: construct, verify, and search the ray sets and inequalities.
//
// Exit codes: 0 every checked claim holds, 1 a claim is refuted, 2 bad input.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <ksineq/ksineq.hpp>

using namespace ksineq;

namespace {

struct Globals {
    bool json = false;
    unsigned threads = 1;
    std::uint64_t seed = 0;
};

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path);
    if (!out)
        throw InputError("cannot open '" + path + "' for writing");
    out << text;
}

Json read_json(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open '" + path + "'");
    try {
        return Json::parse(in);
    }
    catch (const Json::parse_error& e) {
        throw InputError("'" + path + "' is not valid JSON: " + e.what());
    }
}

std::string rays_text(const RaySet& s)
{
    std::ostringstream out;
    out << "dimension " << s.dimension() << ", " << s.size() << " rays\n";
    for (const auto& r : s.rays()) {
        out << "  " << r.label << " (";
        for (std::size_t i = 0; i < r.vector.dimension(); ++i)
            out << (i ? ", " : "") << r.vector[i];
        out << ")\n";
    }
    for (const auto& [alias, target] : s.aliases())
        out << "  " << alias << " = " << target << '\n';
    return out.str();
}

Graph pick_graph(std::size_t d, const std::string& kind)
{
    if (kind == "base")
        return base_graph_9();
    if (kind == "line")
        return line_graph(base_graph_9());
    if (kind == "orthogonality")
        return orthogonality_graph(build_for_dimension(d));
    throw InputError("unknown graph kind '" + kind + "'");
}

// Human or JSON output of a claim-like check; returns the exit code.
int verdict(const Globals& g, Json j, bool holds, const std::string& text)
{
    j["verified"] = holds;
    if (g.json)
        std::cout << j.dump(2) << '\n';
    else
        std::cout << text << (holds ? "verified\n" : "REFUTED\n");
    return holds ? 0 : 1;
}

std::vector<std::string> split_triple(const std::string& s)
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ','))
        out.push_back(item);
    if (out.size() != 3)
        throw InputError("--triple needs three comma-separated vertices, got '" + s + "'");
    return out;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Kochen-Specker ray sets and noncontextuality inequalities"};
    app.require_subcommand(1);
    Globals g;
    app.add_flag("--json", g.json, "Emit JSON instead of text");
    app.add_option("--threads", g.threads, "Worker threads for exhaustive search (results do not depend on it)")
        ->check(CLI::Range(1u, 256u));
    app.add_option("--seed", g.seed, "Seed for probe and realize (default 0)");

    std::size_t dim = 0;
    auto dim_option = [&](CLI::App* sub, bool required = true) {
        auto* o = sub->add_option("--dim", dim, "Dimension d >= 3")->check(CLI::Range(3, 1000));
        if (required)
            o->required();
    };

    auto* construct = app.add_subcommand("construct", "Build the ray set for a dimension");
    dim_option(construct);
    std::string out_path;
    construct->add_option("--out", out_path, "Write RaySet JSON here");

    auto* graph = app.add_subcommand("graph", "Export a graph as DOT and/or JSON");
    dim_option(graph);
    std::string dot_path, graph_out, graph_kind = "orthogonality";
    graph->add_option("--dot", dot_path, "Write DOT here");
    graph->add_option("--out", graph_out, "Write graph JSON here");
    graph->add_option("--kind", graph_kind, "orthogonality (of the ray set), line, or base")
        ->check(CLI::IsMember({"orthogonality", "line", "base"}));

    auto* verify = app.add_subcommand("verify-quantum", "Check the operator identity of the inequality for d");
    dim_option(verify);

    auto* bound = app.add_subcommand("bound", "Exact classical maximum of the inequality for d");
    dim_option(bound, false);
    std::string method = "bb", form_path;
    bound->add_option("--method", method, "exhaustive, bb, or blockdp")
        ->check(CLI::IsMember({"exhaustive", "bb", "blockdp"}));
    bound->add_option("--form", form_path, "Inequality JSON to maximise instead of the built one");

    auto* ks = app.add_subcommand("ks-search", "Enumerate KS value assignments");
    dim_option(ks);
    std::optional<std::size_t> limit;
    ks->add_option("--limit", limit, "Stop after this many");

    auto* hexagon = app.add_subcommand("hexagon", "Hexagon inequality for an independent vertex triple");
    std::string triple_text;
    hexagon->add_option("--triple", triple_text, "e.g. 7,8,9")->required();

    auto* realize = app.add_subcommand("realize", "Search for real rays realizing a graph's orthogonalities");
    std::string graph_path, reference_path;
    std::uint64_t seeds = 50, max_sweeps = 10000;
    double tol = realize_limits::signature_tolerance;
    realize->add_option("--graph", graph_path, "Graph JSON")->required();
    dim_option(realize);
    realize->add_option("--seeds", seeds, "Number of seeds, starting at --seed");
    realize->add_option("--tol", tol, "Gram signature tolerance");
    realize->add_option("--max-sweeps", max_sweeps, "Sweep cap per seed");
    realize->add_option("--reference", reference_path,
                        "RaySet JSON to compare against (default: the built set when labels match)");

    auto* probe = app.add_subcommand("probe", "Continuous relaxation probe of the inequality for d");
    dim_option(probe);
    std::uint64_t samples = 10000;
    probe->add_option("--samples", samples, "Random starts")->check(CLI::PositiveNumber);
    probe->add_option("--seed", g.seed, "Seed (default 0)");
    realize->add_option("--seed", g.seed, "First seed (default 0)");

    auto* report = app.add_subcommand("report", "Check every claim for dimension d");
    dim_option(report);
    bool timings = false;
    report->add_flag("--timings", timings, "Include per-claim durations in JSON");

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    }
    catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    }
    catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*construct) {
            const RaySet s = build_for_dimension(dim);
            if (!out_path.empty())
                write_file(out_path, to_json(s).dump(2) + "\n");
            std::cout << (g.json ? to_json(s).dump(2) + "\n" : rays_text(s));
            return 0;
        }
        if (*graph) {
            const Graph gr = pick_graph(dim, graph_kind);
            if (!dot_path.empty())
                write_file(dot_path, export_dot(gr));
            if (!graph_out.empty())
                write_file(graph_out, to_json(gr).dump(2) + "\n");
            if (g.json)
                std::cout << to_json(gr).dump(2) << '\n';
            else if (dot_path.empty() && graph_out.empty())
                std::cout << export_dot(gr);
            else
                std::cout << gr.size() << " vertices, " << gr.edge_count() << " edges\n";
            return 0;
        }
        if (*verify) {
            const RaySet s = build_for_dimension(dim);
            const QuadForm f = inequality_for_dimension(dim, s);
            const auto q = scalar_identity_check(quantum_operator(f, s));
            Json j = {{"form", f.name()},
                      {"expected", f.quantum_value().to_string()},
                      {"computed", q ? Json(q->to_string()) : Json(nullptr)}};
            return verdict(g, j, q && *q == f.quantum_value(),
                           f.name() + " operator = " + (q ? q->to_string() + "*I" : std::string("not scalar")) +
                               ", expected " + f.quantum_value().to_string() + "*I: ");
        }
        if (*bound) {
            std::optional<RaySet> s;
            QuadForm f;
            if (!form_path.empty())
                f = quad_form_from_json(read_json(form_path));
            else if (dim != 0) {
                s = build_for_dimension(dim);
                f = inequality_for_dimension(dim, *s);
            }
            else
                throw InputError("bound needs --dim or --form");
            BoundResult r;
            if (method == "exhaustive")
                r = max_exhaustive(f, g.threads);
            else if (method == "bb")
                r = max_branch_bound(f);
            else {
                if (!s || !s->layout())
                    throw InputError("blockdp needs --dim (a ray set with a block layout)");
                r = max_block_dp(f, *s->layout());
            }
            // The built bounds are tight for d <= 5 and upper bounds beyond.
            const bool tight = dim >= 3 && dim <= 5;
            const bool holds = tight ? r.maximum == f.classical_bound() : r.maximum <= f.classical_bound();
            Json j = to_json(r);
            j["form"] = f.name();
            j["classical_bound"] = f.classical_bound().to_string();
            return verdict(g, j, holds,
                           f.name() + " max = " + r.maximum.to_string() + " (" + std::string(to_string(r.method)) +
                               ", " + std::to_string(r.evaluations) + " evaluations), claimed " +
                               (tight ? "= " : "<= ") + f.classical_bound().to_string() + ": ");
        }
        if (*ks) {
            const RaySet s = build_for_dimension(dim);
            const auto found = find_ks_assignments(s, limit);
            if (g.json) {
                Json list = Json::array();
                for (const auto& a : found)
                    list.push_back(to_json(a));
                std::cout << Json{{"dimension", dim}, {"count", found.size()}, {"assignments", list}}.dump(2) << '\n';
            }
            else {
                std::cout << found.size() << " KS value assignment(s) of the " << s.size() << "-ray set";
                if (limit)
                    std::cout << " (limit " << *limit << ")";
                std::cout << '\n';
                for (const auto& a : found) {
                    std::cout << "  ones:";
                    for (const auto& [label, v] : a.values)
                        if (v == 1)
                            std::cout << ' ' << label;
                    std::cout << '\n';
                }
            }
            return 0;
        }
        if (*hexagon) {
            const auto parts = split_triple(triple_text);
            const VertexTriple t{parts[0], parts[1], parts[2]};
            const QuadForm f = build_hexagon(t);
            const RaySet s18 = build_18ray();
            const auto q = scalar_identity_check(quantum_operator(f, s18));
            const auto c = partial_ks_constraints(s18, {vertex_basis(t[0]), vertex_basis(t[1]), vertex_basis(t[2])});
            const auto r = max_over_constrained(f, s18, c);
            std::vector<Basis> all;
            for (const auto& v : base_graph_9().labels())
                all.push_back(vertex_basis(v));
            const auto full = max_over_constrained(f, s18, partial_ks_constraints(s18, all));
            const BoundResult unconstrained = max_exhaustive(f, g.threads);
            Json j = {{"form", f.name()},
                      {"unconstrained", to_json(unconstrained)},
                      {"all_vertex_bases", full ? to_json(*full) : Json(nullptr)},
                      {"quantum_expected", f.quantum_value().to_string()},
                      {"quantum_computed", q ? Json(q->to_string()) : Json(nullptr)},
                      {"classical_bound", f.classical_bound().to_string()},
                      {"constrained", r ? to_json(*r) : Json(nullptr)}};
            const bool holds = q && *q == f.quantum_value() && r && r->maximum == f.classical_bound();
            return verdict(g, j, holds,
                           f.name() + ": operator " + (q ? q->to_string() + "*I" : std::string("not scalar")) +
                               ", max under KS constraints at " + t[0] + "," + t[1] + "," + t[2] + " = " +
                               (r ? r->maximum.to_string() : std::string("infeasible")) +
                               "; with all nine vertex bases " +
                               (full ? full->maximum.to_string() : std::string("infeasible")) +
                               "; unconstrained " + unconstrained.maximum.to_string() + ": ");
        }
        if (*realize) {
            const Graph gr = graph_from_json(read_json(graph_path));
            std::optional<RaySet> ref;
            if (!reference_path.empty())
                ref = ray_set_from_json(read_json(reference_path));
            else {
                RaySet built = build_for_dimension(dim);
                bool same = built.size() == gr.size();
                for (std::size_t v = 0; same && v < gr.size(); ++v)
                    same = built.contains(gr.label(v)) && built.canonical(gr.label(v)) == gr.label(v);
                if (same)
                    ref = std::move(built);
            }
            const auto summary = realize_seeds(gr, dim, seeds, max_sweeps, ref ? &*ref : nullptr, tol, g.seed);
            Json runs = Json::array();
            for (const auto& r : summary.reports) {
                Json j = to_json(r);
                j.erase("rays");
                j.erase("gram");
                runs.push_back(std::move(j));
            }
            Json j = {{"runs", summary.runs},
                      {"converged", summary.converged},
                      {"nondegenerate", summary.nondegenerate},
                      {"matched", summary.matched},
                      {"reference", ref.has_value()},
                      {"reports", std::move(runs)}};
            const bool holds = ref ? summary.uniqueness_holds() : summary.nondegenerate > 0;
            std::ostringstream text;
            text << summary.runs << " seeds: " << summary.converged << " converged, " << summary.nondegenerate
                 << " nondegenerate";
            if (ref)
                text << ", " << summary.matched << " match the reference signature";
            text << ": ";
            return verdict(g, j, holds, text.str());
        }
        if (*probe) {
            const RaySet s = build_for_dimension(dim);
            const QuadForm f = inequality_for_dimension(dim, s);
            const ProbeResult r = continuous_probe(f, samples, g.seed);
            Json j = to_json(r);
            j["form"] = f.name();
            j["seed"] = g.seed;
            j["classical_bound"] = f.classical_bound().to_string();
            return verdict(g, j, r.value <= f.classical_bound(),
                           f.name() + " probe best = " + r.value.to_string() + " over " + std::to_string(samples) +
                               " starts, classical bound " + f.classical_bound().to_string() + ": ");
        }
        if (*report) {
            ReportOptions options;
            options.threads = g.threads;
            options.seed = g.seed;
            const Report r = run_report(dim, options);
            std::cout << (g.json ? to_json(r, timings).dump(2) + "\n" : to_text(r));
            return r.exit_code();
        }
    }
    catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    catch (const Json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
