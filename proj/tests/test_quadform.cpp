#include <gtest/gtest.h>

#include <bit>
#include <cctype>
#include <set>
#include <stdexcept>

#include "support.hpp"

using namespace ksineq;
using namespace testing_support;

namespace {

Assignment constant_assignment(const QuadForm& f, const Rational& x)
{
    Assignment a;
    for (const auto& v : f.variables())
        a.values.emplace(v, x);
    return a;
}

Rational sum(const Assignment& a, const std::vector<std::string>& labels)
{
    Rational s;
    for (const auto& l : labels)
        s += a.at(l);
    return s;
}

// Direct L3 over a 13-ray set: y + h/2 + z minus every orthogonal pair,
// computed from inner products rather than from the builder.
Rational l3_oracle(const RaySet& s, const Assignment& a, const std::map<std::string, std::string>& rename = {})
{
    auto name = [&](const std::string& l) {
        auto it = rename.find(l);
        return it == rename.end() ? l : it->second;
    };
    Rational total;
    for (const auto& r : s.rays()) {
        const std::string local = r.label.substr(r.label.find(':') + 1);
        const char family = static_cast<char>(std::tolower(static_cast<unsigned char>(local[0])));
        total += (family == 'h' ? Rational(1, 2) : Rational(1)) * a.at(name(r.label));
    }
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j)
            if (inner_product(s[i].vector, s[j].vector) == 0)
                total -= a.at(name(s[i].label)) * a.at(name(s[j].label));
    return total;
}

std::vector<std::string> labels_of(const RaySet& s) { return s.labels(); }

} // namespace

TEST(BuildL4, TermsAndClaims)
{
    const QuadForm f = build_L4();
    EXPECT_EQ(f.variables().size(), 18u);
    EXPECT_EQ(f.quadratic_coefficient("v12", "v16"), -1);
    EXPECT_EQ(f.quadratic_coefficient("v16", "v12"), -1);
    EXPECT_EQ(f.quadratic_coefficient("v12", "v45"), 0); // orthogonal, but the edges are disjoint
    EXPECT_EQ(f.quadratic().size(), 54u);
    EXPECT_EQ(f.classical_bound(), 4);
    EXPECT_EQ(f.quantum_value(), Rational(9, 2));
    EXPECT_FALSE(f.requires_ks_constraints());
    for (const auto& v : f.variables())
        EXPECT_EQ(f.linear_coefficient(v), 1);
}

TEST(BuildL4, AtMostEdgeSumAndFourOverEveryAssignment)
{
    // Independent integer oracle over bit masks of the 18 base-graph edges.
    const Graph g = base_graph_9();
    const auto edges = g.edges();
    std::vector<std::uint32_t> at_vertex(9, 0);
    for (std::size_t e = 0; e < edges.size(); ++e) {
        at_vertex[edges[e].first] |= 1u << e;
        at_vertex[edges[e].second] |= 1u << e;
    }
    int best = -100;
    for (std::uint32_t mask = 0; mask < (1u << 18); ++mask) {
        int value = std::popcount(mask);
        for (auto star : at_vertex) {
            int k = std::popcount(mask & star);
            value -= k * (k - 1) / 2;
        }
        ASSERT_LE(value, std::popcount(mask));
        ASSERT_LE(value, 4);
        best = std::max(best, value);
    }
    EXPECT_EQ(best, 4);

    // The oracle and evaluate agree on random points.
    const QuadForm f = build_L4();
    auto r = rng(2);
    std::uniform_int_distribution<std::uint32_t> pick(0, (1u << 18) - 1);
    for (int trial = 0; trial < 300; ++trial) {
        std::uint32_t mask = pick(r);
        Assignment a;
        for (std::size_t e = 0; e < edges.size(); ++e)
            a.values.emplace(edge_label(g.label(edges[e].first), g.label(edges[e].second)), (mask >> e) & 1u ? 1 : 0);
        int value = std::popcount(mask);
        for (auto star : at_vertex) {
            int k = std::popcount(mask & star);
            value -= k * (k - 1) / 2;
        }
        ASSERT_EQ(evaluate(f, a), value);
    }
}

TEST(BuildL4, VertexRewriteAgrees)
{
    // Σ_i v_i(2 - v_i)/2 with v_i the sum of the four rays at vertex i.
    const QuadForm f = build_L4();
    const Graph g = base_graph_9();
    auto r = rng(9);
    for (int trial = 0; trial < 1000; ++trial) {
        const Assignment a = random_binary(r, f.variables());
        Rational rewrite;
        for (std::size_t v = 0; v < g.size(); ++v) {
            Rational vi;
            for (auto w : g.neighbours(v))
                vi += a.at(edge_label(g.label(v), g.label(w)));
            rewrite += vi * (2 - vi) / 2;
        }
        ASSERT_EQ(evaluate(f, a), rewrite);
    }
}

TEST(BuildL3, TermsAndClaims)
{
    const RaySet s = build_13ray();
    const QuadForm f = build_L3(s);
    EXPECT_EQ(f.linear_coefficient("h0"), Rational(1, 2));
    EXPECT_EQ(f.linear_coefficient("y2-"), 1);
    EXPECT_EQ(f.linear_coefficient("z3"), 1);
    std::size_t orthogonal_pairs = 0;
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j)
            orthogonal_pairs += inner_product(s[i].vector, s[j].vector) == 0;
    EXPECT_EQ(f.quadratic().size(), orthogonal_pairs);
    EXPECT_EQ(f.classical_bound(), Rational(7, 2));
    EXPECT_EQ(f.quantum_value(), Rational(11, 3));
}

TEST(BuildL3, AtMostRaySumAndSevenHalvesOverEveryAssignment)
{
    const RaySet s = build_13ray();
    const QuadForm f = build_L3(s);
    const auto labels = labels_of(s);
    Rational best = -100;
    for (std::uint64_t mask = 0; mask < (1u << 13); ++mask) {
        const Assignment a = from_mask(labels, mask);
        const Rational v = evaluate(f, a);
        ASSERT_EQ(v, l3_oracle(s, a));
        ASSERT_LE(v, sum(a, labels));
        ASSERT_LE(v, Rational(7, 2));
        best = std::max(best, v);
    }
    EXPECT_EQ(best, Rational(7, 2));
}

TEST(BuildL3, RejectsWrongRaySets)
{
    EXPECT_THROW(build_L3(build_18ray()), std::invalid_argument);
}

TEST(BuildL5, SharedRayAndClaims)
{
    const QuadForm f = build_L5();
    EXPECT_EQ(f.variables().size(), 25u);
    EXPECT_FALSE(f.has_variable("Z1"));
    EXPECT_EQ(f.linear_coefficient("z3"), 2); // one from each half
    EXPECT_EQ(f.classical_bound(), Rational(43, 6));
    EXPECT_EQ(f.quantum_value(), Rational(22, 3));
}

TEST(BuildL5, MatchesDirectFormula)
{
    const QuadForm f = build_L5();
    const RaySet s = build_25ray();
    const RaySet base = build_13ray();
    RaySet plus(3), minus(3);
    std::map<std::string, std::string> upper;
    for (const auto& r : base.rays()) {
        plus.add(r.label, r.vector);
        minus.add(uppercase_label(r.label), r.vector);
        upper[uppercase_label(r.label)] = s.canonical(uppercase_label(r.label));
    }
    std::vector<std::string> v_plus = plus.labels(), v_minus;
    for (const auto& l : minus.labels())
        v_minus.push_back(s.canonical(l));
    auto r = rng(13);
    for (int trial = 0; trial < 1000; ++trial) {
        const Assignment a = random_binary(r, f.variables());
        const Rational zp = sum(a, {"z1", "z2", "Z2", "Z3"});
        const Rational expected = l3_oracle(plus, a) + l3_oracle(minus, a, upper) + Rational(11, 3) * zp * (2 - zp) -
                                  sum(a, {"z1", "z2"}) * sum(a, v_minus) - sum(a, {"Z2", "Z3"}) * sum(a, v_plus);
        ASSERT_EQ(evaluate(f, a), expected);
    }
}

TEST(BuildLd, ClaimsAndVariableCounts)
{
    const QuadForm f6 = build_Ld(6);
    EXPECT_EQ(f6.variables().size(), 26u);
    EXPECT_EQ(f6.classical_bound(), Rational(21, 22));
    EXPECT_EQ(f6.quantum_value(), 1);
    EXPECT_THROW(build_Ld(5), std::invalid_argument);
}

TEST(BuildLd, MatchesDirectBlockFormula)
{
    const Rational q3(11, 3), q4(9, 2);
    auto r = rng(17);
    for (std::size_t d : {6u, 7u, 8u, 10u}) {
        const QuadForm f = build_Ld(d);
        const RaySet s = build_general(d);
        const auto& layout = *s.layout();
        std::vector<RaySet> blocks;
        for (std::size_t b = 0; b < layout.blocks.size(); ++b) {
            const std::string prefix = "b" + std::to_string(b + 1) + ":";
            blocks.push_back(s.subset([&](const std::string& l) { return l.starts_with(prefix); }));
        }
        const Graph base = base_graph_9();
        for (int trial = 0; trial < 200; ++trial) {
            const Assignment a = random_binary(r, f.variables());
            Rational expected;
            std::vector<Rational> v, e;
            for (std::size_t b = 0; b < blocks.size(); ++b) {
                const Rational total = sum(a, blocks[b].labels());
                if (layout.blocks[b].kind == BlockKind::qutrit) {
                    expected += l3_oracle(blocks[b], a) / q3;
                    v.push_back(total);
                }
                else {
                    const std::string prefix = "b" + std::to_string(b + 1) + ":";
                    Rational l4;
                    for (std::size_t x = 0; x < base.size(); ++x) {
                        Rational vi;
                        for (auto w : base.neighbours(x))
                            vi += a.at(prefix + edge_label(base.label(x), base.label(w)));
                        l4 += vi * (2 - vi) / 2;
                    }
                    expected += l4 / q4;
                    e.push_back(total);
                }
            }
            Rational vt, et;
            for (const auto& x : v)
                vt += x;
            for (const auto& x : e)
                et += x;
            expected -= vt * et;
            for (std::size_t k = 0; k < v.size(); ++k)
                for (std::size_t kp = 0; kp < k; ++kp)
                    expected -= v[k] * v[kp] / q3;
            for (std::size_t l = 0; l < e.size(); ++l)
                for (std::size_t lp = 0; lp < l; ++lp)
                    expected -= e[l] * e[lp] / q4;
            ASSERT_EQ(evaluate(f, a), expected) << d;
        }
    }
}

TEST(BuildHexagon, SixRaysFormingACycle)
{
    const QuadForm f = build_hexagon({"7", "8", "9"});
    const std::set<std::string> vars(f.variables().begin(), f.variables().end());
    EXPECT_EQ(vars, (std::set<std::string>{"v12", "v23", "v34", "v45", "v56", "v16"}));
    EXPECT_TRUE(f.quadratic().empty());
    EXPECT_EQ(f.quantum_value(), Rational(3, 2));
    EXPECT_EQ(f.classical_bound(), 1);
    EXPECT_TRUE(f.requires_ks_constraints());

    // Every independent triple leaves six edges forming one 6-cycle.
    const Graph g = base_graph_9();
    for (const auto& t : independent_triples(g)) {
        const QuadForm h = build_hexagon(t);
        ASSERT_EQ(h.variables().size(), 6u);
        std::map<char, int> degree;
        for (const auto& l : h.variables()) {
            ++degree[l[1]];
            ++degree[l[2]];
        }
        EXPECT_EQ(degree.size(), 6u);
        for (auto [vertex, deg] : degree)
            EXPECT_EQ(deg, 2) << vertex;
        // Connected: walk the cycle from one edge.
        std::set<std::string> seen{h.variables()[0]};
        bool grew = true;
        while (grew) {
            grew = false;
            for (const auto& l : h.variables())
                if (!seen.contains(l))
                    for (const auto& m : seen)
                        if (l[1] == m[1] || l[1] == m[2] || l[2] == m[1] || l[2] == m[2]) {
                            seen.insert(l);
                            grew = true;
                            break;
                        }
        }
        EXPECT_EQ(seen.size(), 6u);
    }
}

TEST(BuildHexagon, RejectsDependentTriples)
{
    EXPECT_THROW(build_hexagon({"1", "2", "9"}), std::invalid_argument);
    EXPECT_THROW(build_hexagon({"7", "7", "9"}), std::invalid_argument);
    EXPECT_THROW(build_hexagon({"7", "8", "x"}), std::invalid_argument);
}

TEST(BuildL5prime, TermsAndClaims)
{
    const QuadForm f = build_L5prime();
    EXPECT_EQ(f.variables().size(), 12u);
    EXPECT_EQ(f.linear_coefficient("H2"), Rational(1, 2));
    EXPECT_EQ(f.linear_coefficient("Z3"), Rational(2, 3));
    EXPECT_EQ(f.quantum_value(), Rational(4, 3));
    EXPECT_EQ(f.classical_bound(), Rational(7, 6));
    EXPECT_TRUE(f.requires_ks_constraints());
}

TEST(Evaluate, Examples)
{
    const QuadForm f = build_L4();
    EXPECT_EQ(evaluate(f, constant_assignment(f, 0)), 0);
    EXPECT_EQ(evaluate(f, constant_assignment(f, 1)), -36);
    EXPECT_EQ(evaluate(f, constant_assignment(f, Rational(1, 2))), Rational(-9, 2));
    Assignment partial = constant_assignment(f, 0);
    partial.values.erase("v59");
    EXPECT_THROW(evaluate(f, partial), std::out_of_range);
}

TEST(Canonicalisation, FoldsSquaresMergesPairsDropsZeros)
{
    QuadForm f("t");
    f.add_quadratic("a", "a", 3);
    f.add_quadratic("a", "b", 2);
    f.add_quadratic("b", "a", -2);
    f.add_quadratic("b", "c", Rational(1, 2));
    EXPECT_EQ(f.linear_coefficient("a"), 3);
    EXPECT_TRUE(f.quadratic().size() == 1);
    EXPECT_EQ(f.quadratic_coefficient("c", "b"), Rational(1, 2));
    EXPECT_EQ(f.variables(), (std::vector<std::string>{"a", "b", "c"}));

    // x(2 - x) over four binaries: Σx_i - 2Σ_{i<j} x_i x_j.
    QuadForm g("z");
    const LinearExpr x = LinearExpr::sum_of({"p", "q", "r", "s"});
    g.add_product(1, x, Rational(2) - x);
    EXPECT_EQ(g.linear().size(), 4u);
    for (const auto& [l, c] : g.linear())
        EXPECT_EQ(c, 1) << l;
    EXPECT_EQ(g.quadratic().size(), 6u);
    for (const auto& [k, c] : g.quadratic())
        EXPECT_EQ(c, -2);
}

TEST(QuantumOperator, EveryBuilderIsScalar)
{
    EXPECT_EQ(scalar_identity_check(quantum_operator(build_L4(), build_18ray())), Rational(9, 2));
    EXPECT_EQ(scalar_identity_check(quantum_operator(build_L3(build_13ray()), build_13ray())), Rational(11, 3));
    EXPECT_EQ(scalar_identity_check(quantum_operator(build_L5(), build_25ray())), Rational(22, 3));
    EXPECT_EQ(scalar_identity_check(quantum_operator(build_L5prime(), build_25ray())), Rational(4, 3));
    for (std::size_t d = 6; d <= 12; ++d)
        EXPECT_EQ(scalar_identity_check(quantum_operator(build_Ld(d), build_general(d))), Rational(1)) << d;
    for (const auto& t : independent_triples(base_graph_9()))
        EXPECT_EQ(scalar_identity_check(quantum_operator(build_hexagon(t), build_18ray())), Rational(3, 2));
}

TEST(QuantumOperator, RejectsNonOrthogonalQuadraticPairs)
{
    QuadForm f("bad");
    f.add_quadratic("v12", "v34", -1); // (1,0,0,0)·(-1,1,1,1) = -1
    EXPECT_THROW(quantum_operator(f, build_18ray()), std::invalid_argument);
}

TEST(QuantumOperator, StateIndependentExpectation)
{
    // Five rational density matrices per dimension: mixtures of projectors.
    struct Case {
        QuadForm f;
        RaySet s;
    };
    std::vector<Case> cases{{build_L3(build_13ray()), build_13ray()},
                            {build_L4(), build_18ray()},
                            {build_L5(), build_25ray()},
                            {build_Ld(6), build_general(6)}};
    auto r = rng(23);
    for (const auto& c : cases) {
        const RatMatrix op = quantum_operator(c.f, c.s);
        const std::size_t d = c.s.dimension();
        for (int k = 0; k < 5; ++k) {
            RatMatrix rho = Rational(1, 3) * projector(random_ray(r, d)) + Rational(1, 6) * projector(random_ray(r, d)) +
                            Rational(1, 2) * projector(random_ray(r, d));
            ASSERT_TRUE(rho.is_symmetric());
            ASSERT_EQ(rho.trace(), 1);
            EXPECT_EQ((rho * op).trace(), c.f.quantum_value()) << c.f.name();
        }
    }
}
