#include <gtest/gtest.h>

#include <stdexcept>

#include "support.hpp"

using namespace ksineq;
using namespace testing_support;

namespace {

QuadForm random_form(std::mt19937_64& g, std::size_t n, double density)
{
    std::uniform_int_distribution<int> coef(-6, 6), den(1, 4);
    std::bernoulli_distribution pair(density);
    QuadForm f("random");
    for (std::size_t i = 0; i < n; ++i)
        f.add_linear("x" + std::to_string(i), Rational(coef(g), den(g)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (pair(g))
                f.add_quadratic("x" + std::to_string(i), "x" + std::to_string(j), Rational(coef(g), den(g)));
    f.add_constant(Rational(coef(g), 5));
    return f;
}

// Oracle: evaluate every binary assignment with exact rationals.
Rational brute_max(const QuadForm& f)
{
    const auto& labels = f.variables();
    std::optional<Rational> best;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << labels.size()); ++mask) {
        Rational v = evaluate(f, from_mask(labels, mask));
        if (!best || v > *best)
            best = v;
    }
    return *best;
}

void expect_consistent(const QuadForm& f, const BoundResult& r)
{
    EXPECT_EQ(evaluate(f, r.argmax), r.maximum) << f.name() << ' ' << to_string(r.method);
    EXPECT_TRUE(r.argmax.is_binary());
}

} // namespace

TEST(ScaledForm, LeastCommonDenominators)
{
    EXPECT_EQ(ScaledForm::from(build_L4()).scale, 1); // the unordered-pair form has integer coefficients
    EXPECT_EQ(ScaledForm::from(build_L3(build_13ray())).scale, 2);
    EXPECT_EQ(ScaledForm::from(build_L5()).scale, 6);
    EXPECT_EQ(ScaledForm::from(build_Ld(7)).scale, 198);
}

TEST(Exhaustive, PaperForms)
{
    const QuadForm l4 = build_L4(), l3 = build_L3(build_13ray());
    const BoundResult r4 = max_exhaustive(l4), r3 = max_exhaustive(l3);
    EXPECT_EQ(r4.maximum, 4);
    EXPECT_EQ(r3.maximum, Rational(7, 2));
    EXPECT_EQ(r4.evaluations, 1u << 18);
    expect_consistent(l4, r4);
    expect_consistent(l3, r3);
    EXPECT_EQ(r4.method, BoundMethod::exhaustive);
}

TEST(Exhaustive, ResultIndependentOfThreadCount)
{
    const QuadForm f = build_L4();
    const BoundResult one = max_exhaustive(f, 1);
    for (unsigned t : {2u, 3u, 7u}) {
        const BoundResult many = max_exhaustive(f, t);
        EXPECT_EQ(many.maximum, one.maximum);
        EXPECT_EQ(many.argmax, one.argmax);
    }
}

TEST(Exhaustive, CapIsEnforced)
{
    QuadForm f("wide");
    for (int i = 0; i < 27; ++i)
        f.add_linear("x" + std::to_string(i), 1);
    EXPECT_THROW(max_exhaustive(f), std::invalid_argument);
}

TEST(Methods, AgreeWithBruteForceOnRandomForms)
{
    auto g = rng(31);
    for (int trial = 0; trial < 120; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(trial % 12);
        const QuadForm f = random_form(g, n, trial % 2 ? 0.6 : 0.25);
        const Rational oracle = brute_max(f);
        const BoundResult ex = max_exhaustive(f, 1 + trial % 3);
        const BoundResult bb = max_branch_bound(f);
        BlockLayout single;
        single.blocks = {{BlockKind::qutrit, 0}};
        single.m = 1;
        const BoundResult dp = max_block_dp(f, single);
        ASSERT_EQ(ex.maximum, oracle);
        ASSERT_EQ(bb.maximum, oracle);
        ASSERT_EQ(dp.maximum, oracle);
        expect_consistent(f, ex);
        expect_consistent(f, bb);
        expect_consistent(f, dp);
    }
}

TEST(BranchAndBound, PaperForms)
{
    EXPECT_EQ(max_branch_bound(build_L4()).maximum, 4);
    EXPECT_EQ(max_branch_bound(build_L3(build_13ray())).maximum, Rational(7, 2));
    const QuadForm l5 = build_L5();
    const BoundResult r5 = max_branch_bound(l5);
    EXPECT_EQ(r5.maximum, Rational(43, 6));
    expect_consistent(l5, r5);
}

TEST(BranchAndBound, LinearFormIsSumOfPositiveCoefficients)
{
    QuadForm f("linear");
    f.add_linear("a", 3);
    f.add_linear("b", -2);
    f.add_linear("c", Rational(1, 2));
    f.add_linear("d", 0);
    EXPECT_EQ(max_branch_bound(f).maximum, Rational(7, 2));
}

TEST(BlockDp, LdAgreesWithBranchAndBound)
{
    for (std::size_t d = 6; d <= 12; ++d) {
        const QuadForm f = build_Ld(d);
        const RaySet s = build_general(d);
        const BoundResult dp = max_block_dp(f, *s.layout());
        const BoundResult bb = max_branch_bound(f);
        EXPECT_EQ(dp.maximum, bb.maximum) << d;
        EXPECT_LE(dp.maximum, Rational(21, 22)) << d;
        EXPECT_LT(dp.maximum, f.quantum_value()) << d;
        expect_consistent(f, dp);
        expect_consistent(f, bb);
    }
    EXPECT_EQ(max_block_dp(build_Ld(6), *build_general(6).layout()).maximum, Rational(21, 22));
    EXPECT_EQ(max_block_dp(build_Ld(9), *build_general(9).layout()).maximum, Rational(21, 22));
}

TEST(BlockDp, AllQuquartLayoutStaysBelowTheQutritBound)
{
    // Without a qutrit block the best is one 18-ray block at 4/q4 = 8/9.
    for (std::size_t n : {2u, 3u}) {
        const QuadForm f = build_Ld(4 * n);
        const RaySet s = build_general(4 * n);
        if (s.layout()->m != 0)
            continue;
        EXPECT_EQ(max_block_dp(f, *s.layout()).maximum, Rational(8, 9)) << 4 * n;
    }
}

TEST(BlockDp, ExhaustiveCrossCheckAtSix)
{
    const QuadForm f = build_Ld(6);
    EXPECT_EQ(max_exhaustive(f).maximum, max_block_dp(f, *build_general(6).layout()).maximum);
}

TEST(BlockDp, RejectsCrossTermsThatAreNotBlockSums)
{
    QuadForm f = build_Ld(6);
    f.add_quadratic("b1:z1", "b2:z1", Rational(1, 7));
    EXPECT_THROW(max_block_dp(f, *build_general(6).layout()), std::invalid_argument);
}

TEST(GrayCode, IncrementalValuesMatchDirectEvaluation)
{
    for (const QuadForm& f : {build_L4(), build_L3(build_13ray()), build_L5()}) {
        const ScaledForm s = ScaledForm::from(f);
        const std::uint64_t total = std::uint64_t{1} << s.size();
        auto g = rng(41);
        std::uniform_int_distribution<std::uint64_t> pick(0, total - 2);
        std::vector<std::uint64_t> checkpoints;
        for (int k = 0; k < 1000; ++k)
            checkpoints.push_back(pick(g));
        std::sort(checkpoints.begin(), checkpoints.end());
        GrayCodeWalker walker(s);
        GrayCodeWalker jumper(s);
        for (auto k : checkpoints) {
            // Step a short distance past a random jump, then compare with the exact rational value.
            jumper.reset(k);
            jumper.step();
            const std::uint64_t code = GrayCodeWalker::gray(k + 1);
            Assignment a;
            for (std::size_t i = 0; i < s.size(); ++i)
                a.values.emplace(s.labels[i], (code >> i) & 1u ? 1 : 0);
            ASSERT_EQ(s.to_rational(jumper.value()), evaluate(f, a));
        }
        if (s.size() <= 18) {
            // Full incremental walk hitting every checkpoint in order.
            std::size_t next = 0;
            for (std::uint64_t k = 0; k < total && next < checkpoints.size(); ++k) {
                while (next < checkpoints.size() && checkpoints[next] == k) {
                    ASSERT_EQ(walker.value(), s.value(walker.state()));
                    ++next;
                }
                if (k + 1 < total)
                    walker.step();
            }
        }
    }
}

TEST(Probe, NeverExceedsTheExactMaximum)
{
    const QuadForm l4 = build_L4(), l3 = build_L3(build_13ray());
    const ProbeResult p4 = continuous_probe(l4, 500, 0);
    const ProbeResult p3 = continuous_probe(l3, 500, 1);
    EXPECT_LE(p4.value, 4);
    EXPECT_LE(p3.value, Rational(7, 2));
    EXPECT_EQ(evaluate(l4, p4.argmax), p4.value);
    EXPECT_THROW(continuous_probe(l4, 0, 0), std::invalid_argument);
}

TEST(Probe, DeterministicForAFixedSeed)
{
    const QuadForm f = build_L5();
    const ProbeResult a = continuous_probe(f, 200, 7), b = continuous_probe(f, 200, 7);
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.argmax, b.argmax);
}

TEST(Probe, AscentFromABinaryPointDoesNotLoseValue)
{
    const QuadForm l3 = build_L3(build_13ray());
    const BoundResult best = max_exhaustive(l3);
    EXPECT_EQ(coordinate_ascent(l3, best.argmax).value, Rational(7, 2));
    auto g = rng(6);
    for (int trial = 0; trial < 200; ++trial) {
        const Assignment start = random_binary(g, l3.variables());
        ASSERT_GE(coordinate_ascent(l3, start).value, evaluate(l3, start));
    }
}

TEST(Mixture, ExamplesAndValidation)
{
    const QuadForm f = build_L4();
    const BoundResult best = max_exhaustive(f);
    Assignment zero;
    for (const auto& v : f.variables())
        zero.values.emplace(v, 0);
    std::vector<std::pair<Rational, Assignment>> one{{1, best.argmax}};
    EXPECT_EQ(mixture_value(f, one), 4);
    std::vector<std::pair<Rational, Assignment>> half{{Rational(1, 2), zero}, {Rational(1, 2), best.argmax}};
    EXPECT_EQ(mixture_value(f, half), 2);
    std::vector<std::pair<Rational, Assignment>> short_weights{{Rational(1, 2), zero}};
    EXPECT_THROW(mixture_value(f, short_weights), std::invalid_argument);
    std::vector<std::pair<Rational, Assignment>> negative{{Rational(3, 2), zero}, {Rational(-1, 2), zero}};
    EXPECT_THROW(mixture_value(f, negative), std::invalid_argument);
}

TEST(Mixture, NeverExceedsTheMaximum)
{
    const QuadForm f = build_L3(build_13ray());
    auto g = rng(12);
    std::uniform_int_distribution<int> count(1, 6), weight(0, 9);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::pair<Rational, Assignment>> mix;
        std::vector<int> w(static_cast<std::size_t>(count(g)));
        int total = 0;
        for (auto& x : w)
            total += (x = weight(g));
        if (total == 0)
            continue;
        for (int x : w)
            mix.emplace_back(Rational(x, total), random_binary(g, f.variables()));
        ASSERT_LE(mixture_value(f, mix), Rational(7, 2));
    }
}
