#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ksineq {

/// Simple undirected graph over uniquely labelled vertices, stored as a dense
/// symmetric 0/1 adjacency matrix with zero diagonal.
class Graph {
public:
    Graph() = default;

    explicit Graph(std::vector<std::string> labels) : labels_(std::move(labels)), adj_(labels_.size() * labels_.size(), 0)
    {
        for (std::size_t i = 0; i < labels_.size(); ++i)
            if (!index_.emplace(labels_[i], i).second)
                throw std::invalid_argument("duplicate vertex label '" + labels_[i] + "'");
    }

    std::size_t size() const { return labels_.size(); }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& label(std::size_t v) const { return labels_.at(v); }

    bool contains(std::string_view label) const { return index_.contains(std::string(label)); }

    std::size_t index_of(std::string_view label) const
    {
        auto it = index_.find(std::string(label));
        if (it == index_.end())
            throw std::out_of_range("no vertex labelled '" + std::string(label) + "'");
        return it->second;
    }

    void add_edge(std::size_t u, std::size_t v)
    {
        if (u == v)
            throw std::invalid_argument("self-loop on vertex '" + labels_.at(u) + "'");
        at(u, v) = 1;
        at(v, u) = 1;
    }
    void add_edge(std::string_view a, std::string_view b) { add_edge(index_of(a), index_of(b)); }

    bool adjacent(std::size_t u, std::size_t v) const { return adj_[u * size() + v] != 0; }
    bool adjacent(std::string_view a, std::string_view b) const { return adjacent(index_of(a), index_of(b)); }

    std::size_t degree(std::size_t v) const
    {
        std::size_t d = 0;
        for (std::size_t w = 0; w < size(); ++w)
            d += adjacent(v, w);
        return d;
    }

    std::vector<std::size_t> neighbours(std::size_t v) const
    {
        std::vector<std::size_t> out;
        for (std::size_t w = 0; w < size(); ++w)
            if (adjacent(v, w))
                out.push_back(w);
        return out;
    }

    /// Edges as (u, v) with u < v, in row-major order.
    std::vector<std::pair<std::size_t, std::size_t>> edges() const
    {
        std::vector<std::pair<std::size_t, std::size_t>> out;
        for (std::size_t u = 0; u < size(); ++u)
            for (std::size_t v = u + 1; v < size(); ++v)
                if (adjacent(u, v))
                    out.emplace_back(u, v);
        return out;
    }

    std::size_t edge_count() const { return edges().size(); }

    /// Subgraph induced on the given vertices, in the given order.
    Graph induced(const std::vector<std::size_t>& vertices) const
    {
        std::vector<std::string> labels;
        for (auto v : vertices)
            labels.push_back(labels_.at(v));
        Graph g(std::move(labels));
        for (std::size_t i = 0; i < vertices.size(); ++i)
            for (std::size_t j = i + 1; j < vertices.size(); ++j)
                if (adjacent(vertices[i], vertices[j]))
                    g.add_edge(i, j);
        return g;
    }

    friend bool operator==(const Graph& a, const Graph& b) { return a.labels_ == b.labels_ && a.adj_ == b.adj_; }

private:
    std::uint8_t& at(std::size_t u, std::size_t v) { return adj_.at(u * size() + v); }

    std::vector<std::string> labels_;
    std::vector<std::uint8_t> adj_;
    std::unordered_map<std::string, std::size_t> index_;
};

/// The 9-vertex, 4-regular graph whose 18 edges index the rays of the
/// four-dimensional set.
inline Graph base_graph_9()
{
    Graph g({"1", "2", "3", "4", "5", "6", "7", "8", "9"});
    static constexpr std::array<std::array<char, 2>, 18> edges{{
        {'1', '2'}, {'1', '6'}, {'1', '8'}, {'1', '7'}, {'2', '8'}, {'6', '7'},
        {'4', '5'}, {'2', '3'}, {'4', '8'}, {'2', '9'}, {'5', '8'}, {'3', '9'},
        {'3', '4'}, {'3', '7'}, {'4', '7'}, {'5', '6'}, {'5', '9'}, {'6', '9'},
    }};
    for (const auto& [a, b] : edges)
        g.add_edge(std::string(1, a), std::string(1, b));
    return g;
}

/// Canonical label of the edge {a, b}: prefix followed by the sorted pair,
/// concatenated when both labels are single characters and joined by '-'
/// otherwise.
inline std::string edge_label(std::string a, std::string b, std::string_view prefix = "v")
{
    if (b < a)
        std::swap(a, b);
    std::string out(prefix);
    out += a;
    if (a.size() != 1 || b.size() != 1)
        out += '-';
    out += b;
    return out;
}

/// Vertices are the edges of g, adjacent when they share an endpoint.
inline Graph line_graph(const Graph& g, std::string_view prefix = "v")
{
    auto edges = g.edges();
    std::vector<std::string> labels;
    labels.reserve(edges.size());
    for (auto [u, v] : edges)
        labels.push_back(edge_label(g.label(u), g.label(v), prefix));
    Graph out(std::move(labels));
    for (std::size_t i = 0; i < edges.size(); ++i)
        for (std::size_t j = i + 1; j < edges.size(); ++j) {
            auto [a, b] = edges[i];
            auto [c, d] = edges[j];
            if (a == c || a == d || b == c || b == d)
                out.add_edge(i, j);
        }
    return out;
}

/// True iff g has a perfect matching. Exhaustive backtracking that always
/// extends from the uncovered vertex with the fewest uncovered neighbours.
inline bool disjoint_edge_cover_exists(const Graph& g)
{
    const std::size_t n = g.size();
    std::vector<char> covered(n, 0);

    std::function<bool(std::size_t)> extend = [&](std::size_t remaining) -> bool {
        if (remaining == 0)
            return true;
        std::size_t pick = n;
        std::size_t best = std::numeric_limits<std::size_t>::max();
        for (std::size_t v = 0; v < n; ++v) {
            if (covered[v])
                continue;
            std::size_t free_deg = 0;
            for (std::size_t w = 0; w < n; ++w)
                free_deg += !covered[w] && g.adjacent(v, w);
            if (free_deg < best) {
                best = free_deg;
                pick = v;
            }
        }
        if (best == 0)
            return false;
        covered[pick] = 1;
        for (std::size_t w = 0; w < n; ++w) {
            if (covered[w] || !g.adjacent(pick, w))
                continue;
            covered[w] = 1;
            bool ok = extend(remaining - 2);
            covered[w] = 0;
            if (ok) {
                covered[pick] = 0;
                return true;
            }
        }
        covered[pick] = 0;
        return false;
    };
    return extend(n);
}

using VertexTriple = std::array<std::string, 3>;

/// All 3-subsets with no internal edge, lexicographic by vertex position.
inline std::vector<VertexTriple> independent_triples(const Graph& g)
{
    std::vector<VertexTriple> out;
    const std::size_t n = g.size();
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b) {
            if (g.adjacent(a, b))
                continue;
            for (std::size_t c = b + 1; c < n; ++c)
                if (!g.adjacent(a, c) && !g.adjacent(b, c))
                    out.push_back({g.label(a), g.label(b), g.label(c)});
        }
    return out;
}

/// All cliques of exactly `k` vertices, each sorted by position, listed in
/// lexicographic order of positions.
inline std::vector<std::vector<std::size_t>> cliques_of_size(const Graph& g, std::size_t k)
{
    std::vector<std::vector<std::size_t>> out;
    if (k == 0)
        return out;
    std::vector<std::size_t> current;
    std::function<void(const std::vector<std::size_t>&)> grow = [&](const std::vector<std::size_t>& candidates) {
        if (current.size() == k) {
            out.push_back(current);
            return;
        }
        const std::size_t need = k - current.size();
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            if (candidates.size() - i < need)
                break;
            std::size_t v = candidates[i];
            std::vector<std::size_t> next;
            for (std::size_t j = i + 1; j < candidates.size(); ++j)
                if (g.adjacent(v, candidates[j]))
                    next.push_back(candidates[j]);
            if (next.size() + 1 < need)
                continue;
            current.push_back(v);
            grow(next);
            current.pop_back();
        }
    };
    std::vector<std::size_t> all(g.size());
    for (std::size_t v = 0; v < g.size(); ++v)
        all[v] = v;
    grow(all);
    return out;
}

inline std::string export_dot(const Graph& g)
{
    std::ostringstream os;
    auto quote = [](const std::string& s) {
        std::string q = "\"";
        for (char c : s) {
            if (c == '"' || c == '\\')
                q += '\\';
            q += c;
        }
        return q + "\"";
    };
    os << "graph {\n";
    for (const auto& l : g.labels())
        os << "  " << quote(l) << ";\n";
    for (auto [u, v] : g.edges())
        os << "  " << quote(g.label(u)) << " -- " << quote(g.label(v)) << ";\n";
    os << "}\n";
    return os.str();
}

} // namespace ksineq
