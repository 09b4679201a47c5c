#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include <ksineq/quad_form.hpp>
#include <ksineq/ray_set.hpp>

namespace ksineq {

enum class BoundMethod { exhaustive, branch_bound, block_dp, ks_search };

inline std::string_view to_string(BoundMethod m)
{
    switch (m) {
    case BoundMethod::exhaustive:
        return "exhaustive";
    case BoundMethod::branch_bound:
        return "branch_bound";
    case BoundMethod::block_dp:
        return "block_dp";
    default:
        return "ks_search";
    }
}

struct BoundResult {
    Rational maximum;
    Assignment argmax;
    BoundMethod method;
    std::uint64_t evaluations = 0;
};

/// A QuadForm with every coefficient multiplied by the least common
/// denominator, indexed by variable position. Values are exact integers in
/// units of 1/scale.
struct ScaledForm {
    std::vector<std::string> labels;
    BigInt scale = 1;
    std::int64_t constant = 0;
    std::vector<std::int64_t> linear;
    std::vector<std::vector<std::pair<std::size_t, std::int64_t>>> neighbours;

    std::size_t size() const { return labels.size(); }

    static ScaledForm from(const QuadForm& f)
    {
        ScaledForm s;
        s.labels = f.variables();
        const std::size_t n = s.labels.size();
        std::unordered_map<std::string, std::size_t> index;
        for (std::size_t i = 0; i < n; ++i)
            index.emplace(s.labels[i], i);

        BigInt scale = f.constant().denominator();
        for (const auto& [l, c] : f.linear())
            scale = lcm(scale, c.denominator());
        for (const auto& [k, c] : f.quadratic())
            scale = lcm(scale, c.denominator());
        s.scale = scale;

        BigInt magnitude = 0;
        auto to_int = [&](const Rational& c) -> std::int64_t {
            BigInt v = c.numerator() * (scale / c.denominator());
            magnitude += boost::multiprecision::abs(v);
            if (magnitude > BigInt(std::numeric_limits<std::int64_t>::max() / 4))
                throw std::overflow_error("scaled coefficients of '" + f.name() + "' exceed 64-bit range");
            return v.convert_to<std::int64_t>();
        };
        s.constant = to_int(f.constant());
        s.linear.assign(n, 0);
        s.neighbours.assign(n, {});
        for (const auto& [l, c] : f.linear())
            s.linear[index.at(l)] = to_int(c);
        for (const auto& [k, c] : f.quadratic()) {
            std::size_t a = index.at(k.first), b = index.at(k.second);
            std::int64_t q = to_int(c);
            s.neighbours[a].emplace_back(b, q);
            s.neighbours[b].emplace_back(a, q);
        }
        for (auto& row : s.neighbours)
            std::sort(row.begin(), row.end());
        return s;
    }

    std::int64_t value(std::span<const char> x) const
    {
        std::int64_t v = constant;
        for (std::size_t i = 0; i < size(); ++i) {
            if (!x[i])
                continue;
            v += linear[i];
            for (auto [j, q] : neighbours[i])
                if (j > i && x[j])
                    v += q;
        }
        return v;
    }

    Rational to_rational(std::int64_t scaled) const { return Rational(BigInt(scaled), scale); }

    Assignment assignment(std::span<const char> x) const
    {
        Assignment a;
        for (std::size_t i = 0; i < size(); ++i)
            a.values.emplace(labels[i], x[i] ? 1 : 0);
        return a;
    }
};

/// Walks {0,1}^n in reflected Gray-code order. State k is gray(k) = k ^ (k >> 1),
/// bit i being variable i. Each step flips one variable and updates the value
/// from a maintained field h_i = linear_i + Σ_{j set} q_ij.
class GrayCodeWalker {
public:
    explicit GrayCodeWalker(const ScaledForm& f) : f_(f), x_(f.size(), 0), field_(f.size(), 0) { reset(0); }

    static std::uint64_t gray(std::uint64_t k) { return k ^ (k >> 1); }

    /// Jumps to state k, recomputing everything directly.
    void reset(std::uint64_t k)
    {
        index_ = k;
        const std::uint64_t g = gray(k);
        for (std::size_t i = 0; i < x_.size(); ++i)
            x_[i] = static_cast<char>((g >> i) & 1u);
        for (std::size_t i = 0; i < x_.size(); ++i) {
            std::int64_t h = f_.linear[i];
            for (auto [j, q] : f_.neighbours[i])
                if (x_[j])
                    h += q;
            field_[i] = h;
        }
        value_ = f_.value(x_);
    }

    void step()
    {
        ++index_;
        const auto i = static_cast<std::size_t>(std::countr_zero(index_));
        if (x_[i]) {
            x_[i] = 0;
            value_ -= field_[i];
            for (auto [j, q] : f_.neighbours[i])
                field_[j] -= q;
        }
        else {
            x_[i] = 1;
            value_ += field_[i];
            for (auto [j, q] : f_.neighbours[i])
                field_[j] += q;
        }
    }

    std::uint64_t index() const { return index_; }
    std::int64_t value() const { return value_; }
    std::span<const char> state() const { return x_; }

private:
    const ScaledForm& f_;
    std::vector<char> x_;
    std::vector<std::int64_t> field_;
    std::int64_t value_ = 0;
    std::uint64_t index_ = 0;
};

inline constexpr std::size_t exhaustive_variable_cap = 26;

inline unsigned default_threads()
{
    unsigned t = std::thread::hardware_concurrency();
    return t == 0 ? 1 : t;
}

/// Exact maximum over all 2^n binary assignments (n <= 26). The Gray-code
/// range is split into contiguous chunks across `threads` workers; the
/// reported argmax is the first maximiser in Gray-code order regardless of
/// the worker count.
inline BoundResult max_exhaustive(const QuadForm& f, unsigned threads = 1)
{
    const std::size_t n = f.variables().size();
    if (n > exhaustive_variable_cap)
        throw std::invalid_argument("exhaustive search is capped at " + std::to_string(exhaustive_variable_cap) +
                                    " variables, '" + f.name() + "' has " + std::to_string(n));
    const ScaledForm s = ScaledForm::from(f);
    const std::uint64_t total = std::uint64_t{1} << n;
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::min<std::uint64_t>(total, 64))));

    struct Best {
        std::int64_t value = std::numeric_limits<std::int64_t>::min();
        std::uint64_t index = 0;
    };
    std::vector<Best> best(threads);
    auto work = [&](unsigned w) {
        const std::uint64_t begin = total / threads * w;
        const std::uint64_t end = w + 1 == threads ? total : total / threads * (w + 1);
        GrayCodeWalker walker(s);
        walker.reset(begin);
        Best b;
        for (std::uint64_t k = begin;;) {
            if (walker.value() > b.value) {
                b.value = walker.value();
                b.index = k;
            }
            if (++k == end)
                break;
            walker.step();
        }
        best[w] = b;
    };
    if (threads == 1)
        work(0);
    else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < threads; ++w)
            pool.emplace_back(work, w);
    }
    Best overall;
    for (const auto& b : best)
        if (b.value > overall.value)
            overall = b;

    std::vector<char> x(n);
    const std::uint64_t g = GrayCodeWalker::gray(overall.index);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = static_cast<char>((g >> i) & 1u);
    return {s.to_rational(overall.value), s.assignment(x), BoundMethod::exhaustive, total};
}

namespace detail {

class BranchAndBound {
public:
    explicit BranchAndBound(const ScaledForm& f) : f_(f), n_(f.size())
    {
        order_.resize(n_);
        for (std::size_t i = 0; i < n_; ++i)
            order_[i] = i;
        std::stable_sort(order_.begin(), order_.end(),
                         [&](std::size_t a, std::size_t b) { return f_.neighbours[a].size() > f_.neighbours[b].size(); });
        state_.assign(n_, free_);
        field_ = f_.linear;
        positive_free_.assign(n_, 0);
        for (std::size_t i = 0; i < n_; ++i)
            for (auto [j, q] : f_.neighbours[i])
                if (q > 0)
                    positive_free_[i] += q;
    }

    void run()
    {
        fixed_ = f_.constant;
        search(0);
    }

    bool found() const { return found_; }
    std::int64_t best() const { return best_; }
    const std::vector<char>& best_state() const { return best_x_; }
    std::uint64_t nodes() const { return nodes_; }

private:
    static constexpr char free_ = 2;

    std::int64_t upper_bound() const
    {
        std::int64_t bound = fixed_;
        for (std::size_t i = 0; i < n_; ++i)
            if (state_[i] == free_)
                bound += std::max<std::int64_t>(0, field_[i] + positive_free_[i]);
        return bound;
    }

    void assign(std::size_t v, char value)
    {
        state_[v] = value;
        for (auto [j, q] : f_.neighbours[v]) {
            if (q > 0)
                positive_free_[j] -= q;
            if (value)
                field_[j] += q;
        }
        if (value)
            fixed_ += field_[v];
    }

    void unassign(std::size_t v)
    {
        const char value = state_[v];
        if (value)
            fixed_ -= field_[v];
        for (auto [j, q] : f_.neighbours[v]) {
            if (q > 0)
                positive_free_[j] += q;
            if (value)
                field_[j] -= q;
        }
        state_[v] = free_;
    }

    void search(std::size_t depth)
    {
        ++nodes_;
        if (depth == n_) {
            if (!found_ || fixed_ > best_) {
                found_ = true;
                best_ = fixed_;
                best_x_.assign(state_.begin(), state_.end());
            }
            return;
        }
        if (found_ && upper_bound() <= best_)
            return;
        const std::size_t v = order_[depth];
        for (char value : {char{1}, char{0}}) {
            assign(v, value);
            search(depth + 1);
            unassign(v);
        }
    }

    const ScaledForm& f_;
    std::size_t n_;
    std::vector<std::size_t> order_;
    std::vector<char> state_;
    std::vector<std::int64_t> field_;         // linear + couplings to variables set to 1
    std::vector<std::int64_t> positive_free_; // positive couplings to free variables
    std::int64_t fixed_ = 0;
    bool found_ = false;
    std::int64_t best_ = 0;
    std::vector<char> best_x_;
    std::uint64_t nodes_ = 0;
};

} // namespace detail

/// Exact maximum by depth-first branch and bound. Variables are branched in
/// descending order of quadratic degree, value 1 first. A free variable's
/// optimistic contribution is its linear coefficient plus its couplings to
/// variables already set to 1 plus its positive couplings to free variables;
/// the node bound adds the positive parts of these to the fixed value.
inline BoundResult max_branch_bound(const QuadForm& f)
{
    const ScaledForm s = ScaledForm::from(f);
    detail::BranchAndBound bb(s);
    bb.run();
    return {s.to_rational(bb.best()), s.assignment(bb.best_state()), BoundMethod::branch_bound, bb.nodes()};
}

/// Variable groups of a block layout: labels with prefix "b{k}:" belong to
/// block k; a single-block layout takes every variable.
inline std::vector<std::vector<std::string>> block_partition(const QuadForm& f, const BlockLayout& layout)
{
    std::vector<std::vector<std::string>> groups(layout.blocks.size());
    if (layout.blocks.size() == 1) {
        groups[0] = f.variables();
        return groups;
    }
    for (const auto& v : f.variables()) {
        bool placed = false;
        for (std::size_t b = 0; b < groups.size() && !placed; ++b)
            if (v.starts_with(block_label(b + 1, ""))) {
                groups[b].push_back(v);
                placed = true;
            }
        if (!placed)
            throw std::invalid_argument("variable '" + v + "' belongs to no block of the layout");
    }
    return groups;
}

/// Exact maximum for forms whose cross-block quadratic part depends only on
/// block sums: Σ_B g_B(s_B) + Σ_{B<B'} c_{BB'} s_B s_B', where g_B(s) is the
/// best within-block value at block sum s. The structure is checked first.
inline BoundResult max_block_dp(const QuadForm& f, const std::vector<std::vector<std::string>>& groups)
{
    const ScaledForm s = ScaledForm::from(f);
    const std::size_t n = s.size();
    const std::size_t blocks = groups.size();
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < n; ++i)
        index.emplace(s.labels[i], i);
    std::vector<std::size_t> block_of(n, blocks);
    std::vector<std::vector<std::size_t>> members(blocks);
    for (std::size_t b = 0; b < blocks; ++b) {
        if (groups[b].size() > exhaustive_variable_cap)
            throw std::invalid_argument("block " + std::to_string(b + 1) + " is too large to enumerate");
        for (const auto& l : groups[b]) {
            auto it = index.find(l);
            if (it == index.end())
                throw std::invalid_argument("block variable '" + l + "' is not in the form");
            if (block_of[it->second] != blocks)
                throw std::invalid_argument("variable '" + l + "' appears in two blocks");
            block_of[it->second] = b;
            members[b].push_back(it->second);
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        if (block_of[i] == blocks)
            throw std::invalid_argument("variable '" + s.labels[i] + "' belongs to no block");

    // Cross-block couplings must be one constant per block pair.
    std::vector<std::int64_t> cross(blocks * blocks, 0);
    for (std::size_t a = 0; a < blocks; ++a)
        for (std::size_t b = a + 1; b < blocks; ++b) {
            std::optional<std::int64_t> c;
            for (auto i : members[a]) {
                std::vector<std::int64_t> row(n, 0);
                for (auto [j, q] : s.neighbours[i])
                    row[j] = q;
                for (auto j : members[b]) {
                    if (!c)
                        c = row[j];
                    else if (*c != row[j])
                        throw std::invalid_argument("cross terms between blocks " + std::to_string(a + 1) + " and " +
                                                    std::to_string(b + 1) + " are not expressible by block sums");
                }
            }
            cross[a * blocks + b] = cross[b * blocks + a] = c.value_or(0);
        }

    // g_B(s): best within-block value for each block sum.
    constexpr std::int64_t unset = std::numeric_limits<std::int64_t>::min();
    std::vector<std::vector<std::int64_t>> g(blocks);
    std::vector<std::vector<std::uint64_t>> g_state(blocks);
    std::uint64_t evaluations = 0;
    for (std::size_t b = 0; b < blocks; ++b) {
        ScaledForm local;
        const auto& mem = members[b];
        std::vector<std::size_t> local_index(n, mem.size());
        for (std::size_t k = 0; k < mem.size(); ++k)
            local_index[mem[k]] = k;
        local.labels.resize(mem.size());
        local.linear.resize(mem.size());
        local.neighbours.resize(mem.size());
        for (std::size_t k = 0; k < mem.size(); ++k) {
            local.labels[k] = s.labels[mem[k]];
            local.linear[k] = s.linear[mem[k]];
            for (auto [j, q] : s.neighbours[mem[k]])
                if (block_of[j] == b)
                    local.neighbours[k].emplace_back(local_index[j], q);
        }
        g[b].assign(mem.size() + 1, unset);
        g_state[b].assign(mem.size() + 1, 0);
        const std::uint64_t total = std::uint64_t{1} << mem.size();
        GrayCodeWalker walker(local);
        for (std::uint64_t k = 0;;) {
            const std::uint64_t bits = GrayCodeWalker::gray(k);
            const auto sum = static_cast<std::size_t>(std::popcount(bits));
            if (walker.value() > g[b][sum]) {
                g[b][sum] = walker.value();
                g_state[b][sum] = bits;
            }
            ++evaluations;
            if (++k == total)
                break;
            walker.step();
        }
    }

    // Exhaustive over block-sum tuples.
    std::vector<std::size_t> sums(blocks, 0), best_sums(blocks, 0);
    std::int64_t best = unset;
    auto descend = [&](auto&& self, std::size_t b, std::int64_t partial) -> void {
        if (b == blocks) {
            ++evaluations;
            if (partial > best) {
                best = partial;
                best_sums = sums;
            }
            return;
        }
        std::int64_t coupling = 0; // Σ_{a<b} c_ab s_a
        for (std::size_t a = 0; a < b; ++a)
            coupling += cross[a * blocks + b] * static_cast<std::int64_t>(sums[a]);
        for (std::size_t t = 0; t < g[b].size(); ++t) {
            sums[b] = t;
            self(self, b + 1, partial + g[b][t] + coupling * static_cast<std::int64_t>(t));
        }
        sums[b] = 0;
    };
    descend(descend, 0, s.constant);

    std::vector<char> x(n, 0);
    for (std::size_t b = 0; b < blocks; ++b) {
        const std::uint64_t bits = g_state[b][best_sums[b]];
        for (std::size_t k = 0; k < members[b].size(); ++k)
            x[members[b][k]] = static_cast<char>((bits >> k) & 1u);
    }
    return {s.to_rational(best), s.assignment(x), BoundMethod::block_dp, evaluations};
}

inline BoundResult max_block_dp(const QuadForm& f, const BlockLayout& layout)
{
    return max_block_dp(f, block_partition(f, layout));
}

namespace detail {

/// Exact rational value of a finite double.
inline Rational exact_rational(double x)
{
    if (!std::isfinite(x))
        throw std::domain_error("non-finite value");
    if (x == 0.0)
        return {};
    int exponent = 0;
    double mantissa = std::frexp(x, &exponent); // x = mantissa · 2^exponent, |mantissa| in [0.5, 1)
    auto scaled = static_cast<std::int64_t>(std::ldexp(mantissa, 53));
    exponent -= 53;
    BigInt num(scaled);
    BigInt den(1);
    if (exponent > 0)
        num <<= exponent;
    else
        den <<= -exponent;
    return Rational(num, den);
}

/// Coordinate ascent in place on the multilinear extension of s: each
/// coordinate moves to 0 or 1 by the sign of its partial derivative until a
/// full sweep changes nothing. Returns the final value in scaled units.
inline double ascend(const ScaledForm& s, std::vector<double>& x)
{
    // Partial derivatives are in scaled integer units; smaller ones count as zero.
    constexpr double flat = 1e-9;
    const std::size_t n = s.size();
    for (int sweep = 0; sweep < 10000; ++sweep) {
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            double grad = static_cast<double>(s.linear[i]);
            for (auto [j, q] : s.neighbours[i])
                grad += static_cast<double>(q) * x[j];
            double target = x[i];
            if (grad > flat)
                target = 1.0;
            else if (grad < -flat)
                target = 0.0;
            if (target != x[i]) {
                x[i] = target;
                changed = true;
            }
        }
        if (!changed)
            break;
    }
    double v = static_cast<double>(s.constant);
    for (std::size_t i = 0; i < n; ++i) {
        v += static_cast<double>(s.linear[i]) * x[i];
        for (auto [j, q] : s.neighbours[i])
            if (j > i)
                v += static_cast<double>(q) * x[i] * x[j];
    }
    return v;
}

inline Assignment exact_point(const ScaledForm& s, const std::vector<double>& x)
{
    Assignment a;
    for (std::size_t i = 0; i < s.size(); ++i)
        a.values.emplace(s.labels[i], exact_rational(x[i]));
    return a;
}

} // namespace detail

struct ProbeResult {
    Rational value;
    Assignment argmax;
    std::uint64_t samples = 0;
};

/// Coordinate ascent from `start`; returns the point reached, evaluated exactly.
inline ProbeResult coordinate_ascent(const QuadForm& f, const Assignment& start)
{
    const ScaledForm s = ScaledForm::from(f);
    std::vector<double> x(s.size());
    for (std::size_t i = 0; i < s.size(); ++i)
        x[i] = start.at(s.labels[i]).to_double();
    detail::ascend(s, x);
    Assignment a = detail::exact_point(s, x);
    return {evaluate(f, a), std::move(a), 1};
}

/// Best value over `samples` uniform random starts in [0,1]^n, each followed
/// by coordinate ascent. Candidates within floating-point reach of the best
/// so far are re-evaluated exactly. Deterministic for a given seed.
inline ProbeResult continuous_probe(const QuadForm& f, std::uint64_t samples, std::uint64_t seed)
{
    if (samples < 1)
        throw std::invalid_argument("continuous probe needs at least one sample");
    const ScaledForm s = ScaledForm::from(f);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::optional<ProbeResult> best;
    double best_approx = -std::numeric_limits<double>::infinity();
    std::vector<double> x(s.size());
    for (std::uint64_t k = 0; k < samples; ++k) {
        for (auto& xi : x)
            xi = unit(rng);
        const double approx = detail::ascend(s, x);
        if (best && approx < best_approx - 1e-6)
            continue;
        Assignment a = detail::exact_point(s, x);
        Rational value = evaluate(f, a);
        if (!best || value > best->value) {
            best = ProbeResult{std::move(value), std::move(a), 0};
            best_approx = std::max(best_approx, approx);
        }
    }
    best->samples = samples;
    return *best;
}

/// Σ weight · evaluate(f, assignment); weights must be nonnegative and sum to 1.
inline Rational mixture_value(const QuadForm& f, std::span<const std::pair<Rational, Assignment>> weighted)
{
    Rational total_weight, value;
    for (const auto& [w, a] : weighted) {
        if (w.sign() < 0)
            throw std::invalid_argument("negative mixture weight " + w.to_string());
        total_weight += w;
        if (!w.is_zero())
            value += w * evaluate(f, a);
    }
    if (total_weight != 1)
        throw std::invalid_argument("mixture weights sum to " + total_weight.to_string() + ", not 1");
    return value;
}

} // namespace ksineq
