#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include <ksineq/bounds.hpp>
#include <ksineq/graph.hpp>
#include <ksineq/quad_form.hpp>
#include <ksineq/rational.hpp>
#include <ksineq/ray_set.hpp>
#include <ksineq/realize.hpp>

namespace ksineq {

using Json = nlohmann::ordered_json;

// Rationals travel as "p/q" strings; bare JSON integers are accepted on input.
inline Json to_json(const Rational& r) { return r.to_string(); }

inline Rational rational_from_json(const Json& j)
{
    if (j.is_string())
        return Rational::parse(j.get<std::string>());
    if (j.is_number_integer())
        return Rational(j.get<std::int64_t>());
    throw std::invalid_argument("expected a rational string, got " + j.dump());
}

inline Json to_json(const Graph& g)
{
    Json edges = Json::array();
    for (auto [u, v] : g.edges())
        edges.push_back({g.label(u), g.label(v)});
    return {{"vertices", g.labels()}, {"edges", std::move(edges)}};
}

inline Graph graph_from_json(const Json& j)
{
    Graph g(j.at("vertices").get<std::vector<std::string>>());
    for (const auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 2)
            throw std::invalid_argument("graph edge must be a pair of labels: " + e.dump());
        g.add_edge(e[0].get<std::string>(), e[1].get<std::string>());
    }
    return g;
}

inline Json to_json(const BlockLayout& layout)
{
    Json blocks = Json::array();
    for (const auto& b : layout.blocks)
        blocks.push_back({{"kind", std::string(to_string(b.kind))}, {"offset", b.offset}});
    return {{"m", layout.m}, {"n", layout.n}, {"blocks", std::move(blocks)}};
}

inline BlockLayout layout_from_json(const Json& j)
{
    BlockLayout layout;
    for (const auto& b : j.at("blocks")) {
        const auto kind = b.at("kind").get<std::string>();
        if (kind != "qutrit" && kind != "ququart")
            throw std::invalid_argument("unknown block kind '" + kind + "'");
        layout.blocks.push_back({kind == "qutrit" ? BlockKind::qutrit : BlockKind::ququart, b.at("offset").get<std::size_t>()});
        (kind == "qutrit" ? layout.m : layout.n)++;
    }
    return layout;
}

inline Json to_json(const RaySet& s)
{
    Json rays = Json::array();
    for (const auto& r : s.rays()) {
        Json coords = Json::array();
        for (const auto& c : r.vector.components())
            coords.push_back(c.to_string());
        rays.push_back({{"label", r.label}, {"coords", std::move(coords)}});
    }
    Json out = {{"dimension", s.dimension()}, {"rays", std::move(rays)}, {"aliases", Json::object()}};
    for (const auto& [alias, target] : s.aliases())
        out["aliases"][alias] = target;
    if (s.layout())
        out["layout"] = to_json(*s.layout());
    return out;
}

inline RaySet ray_set_from_json(const Json& j)
{
    RaySet s(j.at("dimension").get<std::size_t>());
    for (const auto& r : j.at("rays")) {
        std::vector<Rational> coords;
        for (const auto& c : r.at("coords"))
            coords.push_back(rational_from_json(c));
        s.add(r.at("label").get<std::string>(), RayVec(std::move(coords)));
    }
    if (j.contains("aliases"))
        for (const auto& [alias, target] : j.at("aliases").items())
            s.add_alias(alias, target.get<std::string>());
    if (j.contains("layout"))
        s.set_layout(layout_from_json(j.at("layout")));
    return s;
}

inline Json to_json(const QuadForm& f)
{
    Json linear = Json::object();
    for (const auto& [label, c] : f.linear())
        linear[label] = c.to_string();
    Json quadratic = Json::array();
    for (const auto& [key, c] : f.quadratic())
        quadratic.push_back({key.first, key.second, c.to_string()});
    return {{"name", f.name()},
            {"variables", f.variables()},
            {"constant", f.constant().to_string()},
            {"linear", std::move(linear)},
            {"quadratic", std::move(quadratic)},
            {"classical_bound", f.classical_bound().to_string()},
            {"quantum_value", f.quantum_value().to_string()},
            {"requires_ks_constraints", f.requires_ks_constraints()}};
}

inline QuadForm quad_form_from_json(const Json& j)
{
    QuadForm f(j.value("name", std::string("form")));
    for (const auto& v : j.at("variables"))
        f.add_variable(v.get<std::string>());
    f.add_constant(rational_from_json(j.at("constant")));
    for (const auto& [label, c] : j.at("linear").items())
        f.add_linear(label, rational_from_json(c));
    for (const auto& t : j.at("quadratic")) {
        if (!t.is_array() || t.size() != 3)
            throw std::invalid_argument("quadratic term must be [a, b, coefficient]: " + t.dump());
        f.add_quadratic(t[0].get<std::string>(), t[1].get<std::string>(), rational_from_json(t[2]));
    }
    f.set_claims(rational_from_json(j.at("classical_bound")), rational_from_json(j.at("quantum_value")),
                 j.value("requires_ks_constraints", false));
    return f;
}

// 0/1 values as JSON integers, anything fractional as a rational string.
inline Json to_json(const Assignment& a)
{
    Json out = Json::object();
    for (const auto& [label, v] : a.values) {
        if (v == 0 || v == 1)
            out[label] = v == 1 ? 1 : 0;
        else
            out[label] = v.to_string();
    }
    return out;
}

inline Assignment assignment_from_json(const Json& j)
{
    Assignment a;
    for (const auto& [label, v] : j.items())
        a.values.emplace(label, rational_from_json(v));
    return a;
}

inline Json to_json(const BoundResult& r)
{
    return {{"maximum", r.maximum.to_string()},
            {"method", std::string(to_string(r.method))},
            {"evaluations", r.evaluations},
            {"argmax", to_json(r.argmax)}};
}

inline Json to_json(const ProbeResult& r)
{
    return {{"value", r.value.to_string()}, {"samples", r.samples}, {"argmax", to_json(r.argmax)}};
}

inline Json to_json(const RealizationReport& r)
{
    Json rays = Json::array();
    for (std::size_t i = 0; i < r.rays.size(); ++i) {
        Json coords = Json::array();
        for (Eigen::Index k = 0; k < r.rays.rays[i].size(); ++k)
            coords.push_back(r.rays.rays[i](k));
        rays.push_back({{"label", r.rays.labels[i]}, {"coords", std::move(coords)}});
    }
    Json gram = Json::array();
    for (Eigen::Index i = 0; i < r.gram.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index k = 0; k < r.gram.cols(); ++k)
            row.push_back(r.gram(i, k));
        gram.push_back(std::move(row));
    }
    return {{"seed", r.seed},
            {"sweeps", r.sweeps},
            {"residual", r.residual},
            {"converged", r.converged},
            {"degenerate", r.degenerate},
            {"matched_reference", r.matched_reference},
            {"rays", std::move(rays)},
            {"gram", std::move(gram)}};
}

} // namespace ksineq
