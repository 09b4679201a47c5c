#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <ksineq/graph.hpp>
#include <ksineq/quad_form.hpp>
#include <ksineq/ray_set.hpp>

namespace ksineq {

namespace constants {
inline const Rational q3{11, 3}; // L̂3 = q3·I3
inline const Rational c3{7, 2};  // classical bound of L3
inline const Rational q4{9, 2};  // L̂4 = q4·I4
} // namespace constants

namespace detail {

/// Part of a label after any "b{k}:" block prefix.
inline std::string_view local_label(std::string_view label)
{
    auto colon = label.rfind(':');
    return colon == std::string_view::npos ? label : label.substr(colon + 1);
}

inline char family_of(std::string_view label)
{
    auto local = local_label(label);
    if (local.empty())
        return '\0';
    char c = local[0];
    return c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : c;
}

/// Labels of s partitioned into the y, h and z families of a 13-ray set.
struct Families13 {
    std::vector<std::string> y, h, z;
};

inline Families13 families_13(const RaySet& s)
{
    Families13 f;
    for (const auto& r : s.rays()) {
        switch (family_of(r.label)) {
        case 'y':
            f.y.push_back(r.label);
            break;
        case 'h':
            f.h.push_back(r.label);
            break;
        case 'z':
            f.z.push_back(r.label);
            break;
        default:
            throw std::invalid_argument("ray '" + r.label + "' is not a y, h or z ray of a 13-ray set");
        }
    }
    if (s.size() != 13 || f.y.size() != 6 || f.h.size() != 4 || f.z.size() != 3)
        throw std::invalid_argument("expected 6 y, 4 h and 3 z rays, got " + std::to_string(f.y.size()) + ", " +
                                    std::to_string(f.h.size()) + ", " + std::to_string(f.z.size()));
    return f;
}

/// The two base-graph vertices of an 18-ray label "v{a}{b}" (prefix allowed).
inline std::pair<char, char> edge_of(std::string_view label)
{
    auto local = local_label(label);
    if (local.size() != 3 || local[0] != 'v')
        throw std::invalid_argument("'" + std::string(label) + "' is not an edge ray label");
    return {local[1], local[2]};
}

inline QuadForm l4_over(const RaySet& s)
{
    if (s.size() != 18)
        throw std::invalid_argument("L4 needs the 18 edge rays");
    QuadForm f("L4");
    for (const auto& r : s.rays())
        f.add_linear(r.label, 1);
    const auto& rays = s.rays();
    for (std::size_t i = 0; i < rays.size(); ++i)
        for (std::size_t j = i + 1; j < rays.size(); ++j) {
            auto [a, b] = edge_of(rays[i].label);
            auto [c, d] = edge_of(rays[j].label);
            if (a == c || a == d || b == c || b == d)
                f.add_quadratic(rays[i].label, rays[j].label, -1);
        }
    f.set_claims(4, constants::q4);
    return f;
}

} // namespace detail

/// Σ_e x_e - ½ Σ_{e≠e', e∩e'≠∅} x_e x_e' over the 18 edge rays.
inline QuadForm build_L4() { return detail::l4_over(build_18ray()); }

/// y + h/2 + z minus one quadratic term per orthogonal pair of the set.
inline QuadForm build_L3(const RaySet& set13)
{
    detail::families_13(set13);
    QuadForm f("L3");
    for (const auto& r : set13.rays()) {
        char family = detail::family_of(r.label);
        f.add_linear(r.label, family == 'h' ? Rational(1, 2) : Rational(1));
    }
    Graph gamma = orthogonality_graph(set13);
    for (auto [u, v] : gamma.edges())
        f.add_quadratic(gamma.label(u), gamma.label(v), -1);
    f.set_claims(constants::c3, constants::q3);
    return f;
}

/// The 13 rays of the 25-ray set supported on coordinates 1..3 (`upper` =
/// false) or 3..5 (`upper` = true), keeping their own labels.
inline RaySet half_of_25ray(const RaySet& set25, bool upper)
{
    RaySet half(set25.dimension());
    const RaySet base = build_13ray();
    for (const auto& r : base.rays()) {
        std::string label = upper ? uppercase_label(r.label) : r.label;
        half.add(label, set25.ray(label));
    }
    return half;
}

/// L3⁺ + L3⁻ + (11/3) z'(2 - z') - z12·V⁻ - Z23·V⁺ over the 25-ray set, with
/// z' = z1 + z2 + Z2 + Z3. The shared ray z3 = Z1 is one variable.
inline QuadForm build_L5()
{
    const RaySet s = build_25ray();
    const RaySet plus = half_of_25ray(s, false);
    const RaySet minus = half_of_25ray(s, true);

    std::map<std::string, std::string> canon;
    for (const auto& r : minus.rays())
        canon[r.label] = s.canonical(r.label);
    auto canonical_labels = [&](const RaySet& half) {
        std::vector<std::string> out;
        for (const auto& r : half.rays())
            out.push_back(s.canonical(r.label));
        return out;
    };

    QuadForm f("L5");
    for (const auto& r : s.rays())
        f.add_variable(r.label);
    f.add_form(build_L3(plus));
    f.add_form(build_L3(minus), 1, canon);

    const LinearExpr z12 = LinearExpr::sum_of({"z1", "z2"});
    const LinearExpr Z23 = LinearExpr::sum_of({"Z2", "Z3"});
    const LinearExpr zp = z12 + Z23;
    f.add_product(constants::q3, zp, Rational(2) - zp);
    f.add_product(-1, z12, LinearExpr::sum_of(canonical_labels(minus)));
    f.add_product(-1, Z23, LinearExpr::sum_of(canonical_labels(plus)));
    f.set_claims(Rational(43, 6), 2 * constants::q3);
    return f;
}

/// Block-composed inequality over build_general(d):
/// (1/q3)ΣL3⁽ᵏ⁾ + (1/q4)ΣL4⁽ˡ⁾ - ΣV_k·ΣE_l - (1/q3)Σ_{k>k'}V_kV_k' - (1/q4)Σ_{l>l'}E_lE_l'.
inline QuadForm build_Ld(std::size_t d)
{
    if (d < 6)
        throw std::invalid_argument("L_d is defined for d >= 6, got " + std::to_string(d));
    const RaySet s = build_general(d);
    const BlockLayout& layout = *s.layout();
    const Rational inv_q3 = 1 / constants::q3;
    const Rational inv_q4 = 1 / constants::q4;

    QuadForm f("L" + std::to_string(d));
    for (const auto& r : s.rays())
        f.add_variable(r.label);

    std::vector<LinearExpr> qutrit_sums, ququart_sums;
    for (std::size_t b = 0; b < layout.blocks.size(); ++b) {
        const std::string prefix = block_label(b + 1, "");
        RaySet block = s.subset([&](const std::string& l) { return l.starts_with(prefix); });
        LinearExpr total = LinearExpr::sum_of(block.labels());
        if (layout.blocks[b].kind == BlockKind::qutrit) {
            f.add_form(build_L3(block), inv_q3);
            qutrit_sums.push_back(std::move(total));
        }
        else {
            f.add_form(detail::l4_over(block), inv_q4);
            ququart_sums.push_back(std::move(total));
        }
    }
    LinearExpr all_qutrit, all_ququart;
    for (const auto& e : qutrit_sums)
        all_qutrit += e;
    for (const auto& e : ququart_sums)
        all_ququart += e;
    f.add_product(-1, all_qutrit, all_ququart);
    for (std::size_t k = 0; k < qutrit_sums.size(); ++k)
        for (std::size_t kp = 0; kp < k; ++kp)
            f.add_product(-inv_q3, qutrit_sums[k], qutrit_sums[kp]);
    for (std::size_t l = 0; l < ququart_sums.size(); ++l)
        for (std::size_t lp = 0; lp < l; ++lp)
            f.add_product(-inv_q4, ququart_sums[l], ququart_sums[lp]);
    f.set_claims(constants::c3 / constants::q3, 1);
    return f;
}

/// Sum of the six edge rays avoiding an independent vertex triple of
/// base_graph_9(). Its bound of 1 holds only under KS value assignments.
inline QuadForm build_hexagon(const VertexTriple& triple)
{
    const Graph g = base_graph_9();
    for (const auto& v : triple)
        if (!g.contains(v))
            throw std::invalid_argument("vertex '" + v + "' is not in the base graph");
    if (triple[0] == triple[1] || triple[0] == triple[2] || triple[1] == triple[2] || g.adjacent(triple[0], triple[1]) ||
        g.adjacent(triple[0], triple[2]) || g.adjacent(triple[1], triple[2]))
        throw std::invalid_argument("hexagon needs three distinct pairwise non-adjacent vertices");

    QuadForm f("hexagon_" + triple[0] + triple[1] + triple[2]);
    for (auto [u, v] : g.edges()) {
        const auto& a = g.label(u);
        const auto& b = g.label(v);
        if (std::find(triple.begin(), triple.end(), a) != triple.end() ||
            std::find(triple.begin(), triple.end(), b) != triple.end())
            continue;
        f.add_linear(edge_label(a, b), 1);
    }
    f.set_claims(1, Rational(3, 2), true);
    return f;
}

/// (h + H)/2 + (2/3)(z1 + z2 + Z2 + Z3); its bound of 7/6 holds only under KS
/// value assignments of the 25-ray set.
inline QuadForm build_L5prime()
{
    QuadForm f("L5prime");
    for (const char* l : {"h0", "h1", "h2", "h3", "H0", "H1", "H2", "H3"})
        f.add_linear(l, Rational(1, 2));
    for (const char* l : {"z1", "z2", "Z2", "Z3"})
        f.add_linear(l, Rational(2, 3));
    f.set_claims(Rational(7, 6), Rational(4, 3), true);
    return f;
}

/// The main inequality used for dimension d: L3, L4, L5, or L_d.
inline QuadForm inequality_for_dimension(std::size_t d, const RaySet& s)
{
    switch (d) {
    case 3:
        return build_L3(s);
    case 4:
        return build_L4();
    case 5:
        return build_L5();
    default:
        return build_Ld(d);
    }
}

} // namespace ksineq
