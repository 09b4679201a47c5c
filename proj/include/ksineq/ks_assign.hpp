#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <ksineq/bounds.hpp>
#include <ksineq/graph.hpp>
#include <ksineq/quad_form.hpp>
#include <ksineq/ray_set.hpp>

namespace ksineq {

/// d mutually orthogonal rays, labels sorted.
struct Basis {
    std::vector<std::string> rays;

    friend bool operator==(const Basis&, const Basis&) = default;
    friend auto operator<=>(const Basis&, const Basis&) = default;
};

/// All d-cliques of the orthogonality graph, lexicographic by label.
inline std::vector<Basis> enumerate_bases(const RaySet& s)
{
    const Graph g = orthogonality_graph(s);
    std::vector<Basis> out;
    for (const auto& clique : cliques_of_size(g, s.dimension())) {
        Basis b;
        for (auto v : clique)
            b.rays.push_back(g.label(v));
        std::sort(b.rays.begin(), b.rays.end());
        out.push_back(std::move(b));
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Exclusivity (no two adjacent rays both 1) plus completeness (exactly one
/// 1 in each listed basis).
struct KSConstraints {
    Graph exclusivity_graph;
    std::vector<Basis> completeness_bases;

    void validate() const
    {
        for (const auto& b : completeness_bases)
            for (std::size_t i = 0; i < b.rays.size(); ++i)
                for (std::size_t j = i + 1; j < b.rays.size(); ++j)
                    if (!exclusivity_graph.adjacent(b.rays[i], b.rays[j]))
                        throw std::invalid_argument("completeness basis is not a clique: '" + b.rays[i] + "' and '" +
                                                    b.rays[j] + "' are not exclusive");
    }
};

/// Orthogonality exclusivity with completeness on every basis of s.
inline KSConstraints full_ks_constraints(const RaySet& s) { return {orthogonality_graph(s), enumerate_bases(s)}; }

/// Orthogonality exclusivity with completeness only on the given bases.
inline KSConstraints partial_ks_constraints(const RaySet& s, std::vector<Basis> bases)
{
    KSConstraints c{orthogonality_graph(s), std::move(bases)};
    for (auto& b : c.completeness_bases) {
        for (auto& l : b.rays)
            l = s.canonical(l);
        std::sort(b.rays.begin(), b.rays.end());
    }
    c.validate();
    return c;
}

/// The four edge rays at a vertex of base_graph_9(), labelled as in build_18ray().
inline Basis vertex_basis(const std::string& vertex)
{
    const Graph g = base_graph_9();
    const std::size_t v = g.index_of(vertex);
    Basis b;
    for (auto w : g.neighbours(v))
        b.rays.push_back(edge_label(vertex, g.label(w)));
    std::sort(b.rays.begin(), b.rays.end());
    return b;
}

namespace detail {

/// Backtracking over the rays of a set under KS constraints. Rays are
/// branched in descending exclusivity degree, value 1 first; setting a ray
/// to 1 zeroes its exclusive neighbours, and a basis with a single open ray
/// and no 1 forces that ray to 1.
class KSSearch {
public:
    KSSearch(const RaySet& s, const KSConstraints& c) : n_(s.size()), adj_(n_)
    {
        if (c.exclusivity_graph.size() != n_)
            throw std::invalid_argument("exclusivity graph does not match the ray set");
        for (std::size_t i = 0; i < n_; ++i) {
            if (c.exclusivity_graph.label(i) != s[i].label)
                throw std::invalid_argument("exclusivity graph labels do not match the ray set");
            adj_[i] = c.exclusivity_graph.neighbours(i);
        }
        bases_of_.resize(n_);
        for (const auto& b : c.completeness_bases) {
            std::vector<std::size_t> members;
            for (const auto& l : b.rays)
                members.push_back(s.index_of(l));
            for (auto m : members)
                bases_of_[m].push_back(bases_.size());
            bases_.push_back(std::move(members));
        }
        order_.resize(n_);
        for (std::size_t i = 0; i < n_; ++i)
            order_[i] = i;
        std::stable_sort(order_.begin(), order_.end(),
                         [&](std::size_t a, std::size_t b) { return adj_[a].size() > adj_[b].size(); });
        value_.assign(n_, open_);
    }

    /// Calls visit(values) on every satisfying assignment until it returns false.
    void run(const std::function<bool(const std::vector<signed char>&)>& visit)
    {
        stop_ = false;
        // Empty bases can never be satisfied.
        for (const auto& b : bases_)
            if (b.empty())
                return;
        search(0, visit);
    }

    std::uint64_t nodes() const { return nodes_; }

private:
    static constexpr signed char open_ = -1;

    bool set(std::size_t v, signed char x, std::vector<std::size_t>& trail)
    {
        std::vector<std::pair<std::size_t, signed char>> queue{{v, x}};
        while (!queue.empty()) {
            auto [u, val] = queue.back();
            queue.pop_back();
            if (value_[u] != open_) {
                if (value_[u] != val)
                    return false;
                continue;
            }
            value_[u] = val;
            trail.push_back(u);
            if (val == 1) {
                for (auto w : adj_[u])
                    queue.emplace_back(w, 0);
            }
            for (auto bi : bases_of_[u]) {
                std::size_t ones = 0, open = 0, last_open = 0;
                for (auto m : bases_[bi]) {
                    if (value_[m] == 1)
                        ++ones;
                    else if (value_[m] == open_) {
                        ++open;
                        last_open = m;
                    }
                }
                if (ones > 1 || (ones == 0 && open == 0))
                    return false;
                if (ones == 1)
                    for (auto m : bases_[bi])
                        if (value_[m] == open_)
                            queue.emplace_back(m, 0);
                if (ones == 0 && open == 1)
                    queue.emplace_back(last_open, 1);
            }
        }
        return true;
    }

    void undo(std::vector<std::size_t>& trail)
    {
        for (auto u : trail)
            value_[u] = open_;
        trail.clear();
    }

    void search(std::size_t depth, const std::function<bool(const std::vector<signed char>&)>& visit)
    {
        if (stop_)
            return;
        ++nodes_;
        while (depth < n_ && value_[order_[depth]] != open_)
            ++depth;
        if (depth == n_) {
            if (!visit(value_))
                stop_ = true;
            return;
        }
        const std::size_t v = order_[depth];
        for (signed char x : {1, 0}) {
            std::vector<std::size_t> trail;
            if (set(v, static_cast<signed char>(x), trail))
                search(depth + 1, visit);
            undo(trail);
            if (stop_)
                return;
        }
    }

    std::size_t n_;
    std::vector<std::vector<std::size_t>> adj_;
    std::vector<std::vector<std::size_t>> bases_;
    std::vector<std::vector<std::size_t>> bases_of_;
    std::vector<std::size_t> order_;
    std::vector<signed char> value_;
    std::uint64_t nodes_ = 0;
    bool stop_ = false;
};

inline Assignment to_assignment(const RaySet& s, const std::vector<signed char>& values)
{
    Assignment a;
    for (std::size_t i = 0; i < s.size(); ++i)
        a.values.emplace(s[i].label, values[i] == 1 ? 1 : 0);
    return a;
}

} // namespace detail

/// True iff a satisfies both constraint families (direct scan).
inline bool satisfies(const Assignment& a, const KSConstraints& c)
{
    const Graph& g = c.exclusivity_graph;
    for (auto [u, v] : g.edges())
        if (a.at(g.label(u)) == 1 && a.at(g.label(v)) == 1)
            return false;
    for (const auto& b : c.completeness_bases) {
        int ones = 0;
        for (const auto& l : b.rays)
            ones += a.at(l) == 1;
        if (ones != 1)
            return false;
    }
    return true;
}

/// All (or the first `limit`) KS value assignments of s under c, sorted.
inline std::vector<Assignment> find_ks_assignments(const RaySet& s, const KSConstraints& c,
                                                   std::optional<std::size_t> limit = std::nullopt)
{
    std::vector<Assignment> out;
    if (limit && *limit == 0)
        return out;
    detail::KSSearch search(s, c);
    search.run([&](const std::vector<signed char>& values) {
        out.push_back(detail::to_assignment(s, values));
        return !limit || out.size() < *limit;
    });
    std::sort(out.begin(), out.end());
    return out;
}

/// KS value assignments with completeness on every basis of s.
inline std::vector<Assignment> find_ks_assignments(const RaySet& s, std::optional<std::size_t> limit = std::nullopt)
{
    return find_ks_assignments(s, full_ks_constraints(s), limit);
}

/// Exact maximum of f over assignments of s satisfying c; nullopt when no
/// assignment is feasible.
inline std::optional<BoundResult> max_over_constrained(const QuadForm& f, const RaySet& s, const KSConstraints& c)
{
    std::vector<std::size_t> var_ray;
    for (const auto& v : f.variables()) {
        if (!s.contains(v))
            throw std::invalid_argument("form variable '" + v + "' is not a ray of the set");
        var_ray.push_back(s.index_of(v));
    }
    const ScaledForm sf = ScaledForm::from(f);
    std::optional<std::int64_t> best;
    std::vector<char> best_x;
    std::vector<char> x(sf.size());
    std::uint64_t count = 0;
    detail::KSSearch search(s, c);
    search.run([&](const std::vector<signed char>& values) {
        ++count;
        for (std::size_t i = 0; i < x.size(); ++i)
            x[i] = values[var_ray[i]] == 1;
        const std::int64_t v = sf.value(x);
        if (!best || v > *best) {
            best = v;
            best_x = x;
        }
        return true;
    });
    if (!best)
        return std::nullopt;
    return BoundResult{sf.to_rational(*best), sf.assignment(best_x), BoundMethod::ks_search, count};
}

} // namespace ksineq
