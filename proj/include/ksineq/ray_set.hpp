#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <ksineq/graph.hpp>
#include <ksineq/linalg.hpp>
#include <ksineq/rational.hpp>

namespace ksineq {

enum class BlockKind { qutrit, ququart };

inline std::string_view to_string(BlockKind k) { return k == BlockKind::qutrit ? "qutrit" : "ququart"; }
inline std::size_t block_dimension(BlockKind k) { return k == BlockKind::qutrit ? 3 : 4; }

struct Block {
    BlockKind kind;
    std::size_t offset; // first coordinate, 0-based

    friend bool operator==(const Block&, const Block&) = default;
};

/// Direct-sum decomposition of the coordinates into 3- and 4-dimensional
/// blocks laid out contiguously.
struct BlockLayout {
    std::vector<Block> blocks;
    std::size_t m = 0; // qutrit blocks
    std::size_t n = 0; // ququart blocks

    std::size_t dimension() const { return 3 * m + 4 * n; }

    /// Checks that blocks tile 0..dimension() contiguously and counts match.
    void validate() const
    {
        std::size_t next = 0, qutrits = 0, ququarts = 0;
        for (const auto& b : blocks) {
            if (b.offset != next)
                throw std::invalid_argument("block layout is not contiguous at offset " + std::to_string(b.offset));
            next += block_dimension(b.kind);
            (b.kind == BlockKind::qutrit ? qutrits : ququarts)++;
        }
        if (qutrits != m || ququarts != n)
            throw std::invalid_argument("block layout counts disagree with its block list");
    }

    friend bool operator==(const BlockLayout&, const BlockLayout&) = default;
};

struct LabeledRay {
    std::string label;
    RayVec vector;
};

/// True iff one ray is a rational multiple of the other. Compares cross
/// products against the first nonzero component of `u`.
inline bool parallel(const RayVec& u, const RayVec& v)
{
    if (u.dimension() != v.dimension())
        return false;
    std::size_t pivot = 0;
    while (u[pivot].is_zero())
        ++pivot;
    if (v[pivot].is_zero())
        return false;
    for (std::size_t k = 0; k < u.dimension(); ++k)
        if (u[k] * v[pivot] != v[k] * u[pivot])
            return false;
    return true;
}

/// Labelled rays in a fixed dimension. Labels are unique, no two rays are
/// parallel, and aliases give extra names to existing rays.
class RaySet {
public:
    RaySet() = default;
    explicit RaySet(std::size_t dimension) : dim_(dimension) {}

    std::size_t dimension() const { return dim_; }
    std::size_t size() const { return rays_.size(); }
    const std::vector<LabeledRay>& rays() const { return rays_; }
    const LabeledRay& operator[](std::size_t i) const { return rays_.at(i); }
    const std::map<std::string, std::string>& aliases() const { return aliases_; }
    const std::optional<BlockLayout>& layout() const { return layout_; }

    std::vector<std::string> labels() const
    {
        std::vector<std::string> out;
        out.reserve(rays_.size());
        for (const auto& r : rays_)
            out.push_back(r.label);
        return out;
    }

    /// Resolves an alias to the stored label; stored labels map to themselves.
    std::string canonical(std::string_view label) const
    {
        auto it = aliases_.find(std::string(label));
        return it == aliases_.end() ? std::string(label) : it->second;
    }

    bool contains(std::string_view label) const { return index_.contains(canonical(label)); }

    std::size_t index_of(std::string_view label) const
    {
        auto it = index_.find(canonical(label));
        if (it == index_.end())
            throw std::out_of_range("no ray labelled '" + std::string(label) + "'");
        return it->second;
    }

    const RayVec& ray(std::string_view label) const { return rays_[index_of(label)].vector; }

    /// Index of a stored ray parallel to v, if any.
    std::optional<std::size_t> find_parallel(const RayVec& v) const
    {
        for (std::size_t i = 0; i < rays_.size(); ++i)
            if (parallel(rays_[i].vector, v))
                return i;
        return std::nullopt;
    }

    void add(std::string label, RayVec v)
    {
        if (v.dimension() != dim_)
            throw std::invalid_argument("ray '" + label + "' has dimension " + std::to_string(v.dimension()) +
                                        ", set has " + std::to_string(dim_));
        if (index_.contains(label) || aliases_.contains(label))
            throw std::invalid_argument("duplicate ray label '" + label + "'");
        if (auto p = find_parallel(v))
            throw std::invalid_argument("ray '" + label + "' is parallel to '" + rays_[*p].label + "'");
        index_.emplace(label, rays_.size());
        rays_.push_back({std::move(label), std::move(v)});
    }

    /// Adds v unless a parallel ray is already present, in which case the
    /// label becomes an alias of that ray. Returns the stored label.
    std::string add_or_alias(std::string label, RayVec v)
    {
        if (auto p = find_parallel(v)) {
            add_alias(label, rays_[*p].label);
            return rays_[*p].label;
        }
        add(label, std::move(v));
        return label;
    }

    void add_alias(const std::string& alias, const std::string& target)
    {
        if (index_.contains(alias) || aliases_.contains(alias))
            throw std::invalid_argument("duplicate ray label '" + alias + "'");
        if (!index_.contains(target))
            throw std::out_of_range("alias target '" + target + "' does not exist");
        aliases_.emplace(alias, target);
    }

    void set_layout(BlockLayout layout)
    {
        layout.validate();
        if (layout.dimension() != dim_)
            throw std::invalid_argument("block layout dimension does not match the ray set");
        layout_ = std::move(layout);
    }

    /// Rays whose labels satisfy the predicate, in order, keeping aliases
    /// that point into the subset.
    template <typename Pred>
    RaySet subset(Pred&& keep) const
    {
        RaySet out(dim_);
        for (const auto& r : rays_)
            if (keep(r.label))
                out.add(r.label, r.vector);
        for (const auto& [alias, target] : aliases_)
            if (out.contains(target) && !out.contains(alias))
                out.add_alias(alias, target);
        return out;
    }

private:
    std::size_t dim_ = 0;
    std::vector<LabeledRay> rays_;
    std::unordered_map<std::string, std::size_t> index_;
    std::map<std::string, std::string> aliases_;
    std::optional<BlockLayout> layout_;
};

/// The three-dimensional 13-ray set: z_k = e_k, y_k^± = e_i ± e_j with
/// {i,j,k} = {1,2,3} and i < j, and h_a = Σ_k (-1)^[a = k] e_k.
/// Labels: z1..z3, y1+, y1-, ..., y3-, h0..h3.
inline RaySet build_13ray()
{
    RaySet s(3);
    s.add("z1", {1, 0, 0});
    s.add("z2", {0, 1, 0});
    s.add("z3", {0, 0, 1});
    for (int k = 1; k <= 3; ++k) {
        std::vector<int> others;
        for (int c = 1; c <= 3; ++c)
            if (c != k)
                others.push_back(c);
        for (int sigma : {1, -1}) {
            std::vector<Rational> v(3);
            v[others[0] - 1] = 1;
            v[others[1] - 1] = sigma;
            s.add("y" + std::to_string(k) + (sigma > 0 ? "+" : "-"), RayVec(std::move(v)));
        }
    }
    for (int a = 0; a <= 3; ++a) {
        std::vector<Rational> v(3);
        for (int k = 1; k <= 3; ++k)
            v[k - 1] = a == k ? -1 : 1;
        s.add("h" + std::to_string(a), RayVec(std::move(v)));
    }
    s.set_layout({{{BlockKind::qutrit, 0}}, 1, 0});
    return s;
}

/// The four-dimensional 18-ray set indexed by the edges of base_graph_9().
inline RaySet build_18ray()
{
    RaySet s(4);
    s.add("v12", {1, 0, 0, 0});
    s.add("v16", {0, 0, 1, -1});
    s.add("v34", {-1, 1, 1, 1});
    s.add("v18", {0, 1, 0, 0});
    s.add("v17", {0, 0, 1, 1});
    s.add("v37", {1, 1, 1, -1});
    s.add("v28", {0, 0, 0, 1});
    s.add("v67", {1, -1, 0, 0});
    s.add("v47", {1, 1, -1, 1});
    s.add("v45", {0, 1, 0, -1});
    s.add("v23", {0, 1, -1, 0});
    s.add("v56", {1, 1, 1, 1});
    s.add("v48", {1, 0, 1, 0});
    s.add("v29", {0, 1, 1, 0});
    s.add("v59", {1, -1, 1, -1});
    s.add("v58", {1, 0, -1, 0});
    s.add("v39", {1, 0, 0, 1});
    s.add("v69", {1, 1, -1, -1});
    s.set_layout({{{BlockKind::ququart, 0}}, 0, 1});
    return s;
}

inline std::string uppercase_label(std::string label)
{
    if (!label.empty() && label[0] >= 'a' && label[0] <= 'z')
        label[0] = static_cast<char>(label[0] - 'a' + 'A');
    return label;
}

/// The five-dimensional 25-ray set: the 13-ray set on coordinates 1..3
/// (lowercase labels) and on coordinates 3..5 (uppercase labels). The one
/// coinciding ray is stored as z3 with Z1 as alias.
inline RaySet build_25ray()
{
    const RaySet base = build_13ray();
    RaySet s(5);
    for (const auto& r : base.rays())
        s.add(r.label, r.vector.embedded(5, 0));
    for (const auto& r : base.rays()) {
        RayVec v = r.vector.embedded(5, 2);
        std::string upper = uppercase_label(r.label);
        if (upper == "Z1")
            s.add_alias(upper, "z3");
        else
            s.add(std::move(upper), std::move(v));
    }
    return s;
}

struct Decomposition {
    std::size_t m;     // qutrit blocks
    std::size_t n;     // ququart blocks
    std::size_t count; // 13m + 18n
};

/// d = 3m + 4n with the fewest rays: m = 4⌊d/3⌋ - d, n = d - 3⌊d/3⌋.
inline Decomposition optimal_decomposition(std::size_t d)
{
    if (d < 6)
        throw std::invalid_argument("block decomposition needs d >= 6, got " + std::to_string(d));
    const std::size_t third = d / 3;
    const std::size_t m = 4 * third - d;
    const std::size_t n = d - 3 * third;
    return {m, n, 13 * m + 18 * n};
}

/// Ray count of the construction for dimension d, closed form 5d - 2⌊d/3⌋
/// (d = 5 is the 25-ray exception).
inline std::size_t ray_count_formula(std::size_t d)
{
    if (d < 3)
        throw std::invalid_argument("ray counts are defined for d >= 3");
    if (d == 5)
        return 25;
    return 5 * d - 2 * (d / 3);
}

/// Ray count tabulated by residue class of d modulo 4.
inline std::size_t ray_count_table(std::size_t d)
{
    if (d < 3)
        throw std::invalid_argument("ray counts are defined for d >= 3");
    if (d == 3)
        return 13;
    if (d == 5)
        return 25;
    const std::size_t m = d / 4;
    switch (d % 4) {
    case 0:
        return 18 * m - 2 * (m / 3);
    case 1: // 4m' + 5 with m' = m - 1
        return 18 * (m - 1) + 23 - 2 * ((m - 1 + 2) / 3);
    case 2: // 4m' + 6
        return 18 * (m - 1) + 26 - 2 * ((m - 1) / 3);
    default: // 4m' + 7
        return 18 * (m - 1) + 31 - 2 * ((m - 1 + 1) / 3);
    }
}

inline std::string block_label(std::size_t block, std::string_view local)
{
    return "b" + std::to_string(block) + ":" + std::string(local);
}

/// Direct sum of m 13-ray blocks followed by n 18-ray blocks on consecutive
/// coordinates. Labels are "b{k}:{local}" with k counted from 1.
inline RaySet build_general(std::size_t d, std::optional<std::size_t> m = std::nullopt,
                            std::optional<std::size_t> n = std::nullopt)
{
    if (d < 6)
        throw std::invalid_argument("general construction needs d >= 6, got " + std::to_string(d));
    if (m.has_value() != n.has_value())
        throw std::invalid_argument("supply both block counts or neither");
    std::size_t qutrits, ququarts;
    if (m) {
        qutrits = *m;
        ququarts = *n;
        if (3 * qutrits + 4 * ququarts != d)
            throw std::invalid_argument("3m + 4n must equal d");
    }
    else {
        auto dec = optimal_decomposition(d);
        qutrits = dec.m;
        ququarts = dec.n;
    }
    const RaySet v13 = build_13ray();
    const RaySet v18 = build_18ray();
    RaySet s(d);
    BlockLayout layout;
    layout.m = qutrits;
    layout.n = ququarts;
    std::size_t offset = 0, index = 1;
    auto place = [&](const RaySet& local, BlockKind kind) {
        for (const auto& r : local.rays())
            s.add(block_label(index, r.label), r.vector.embedded(d, offset));
        layout.blocks.push_back({kind, offset});
        offset += block_dimension(kind);
        ++index;
    };
    for (std::size_t k = 0; k < qutrits; ++k)
        place(v13, BlockKind::qutrit);
    for (std::size_t l = 0; l < ququarts; ++l)
        place(v18, BlockKind::ququart);
    s.set_layout(std::move(layout));
    return s;
}

/// The ray set this toolkit uses in dimension d >= 3.
inline RaySet build_for_dimension(std::size_t d)
{
    switch (d) {
    case 3:
        return build_13ray();
    case 4:
        return build_18ray();
    case 5:
        return build_25ray();
    default:
        if (d < 3)
            throw std::invalid_argument("dimension must be at least 3");
        return build_general(d);
    }
}

/// Vertices are ray labels; edges join orthogonal rays.
inline Graph orthogonality_graph(const RaySet& s)
{
    Graph g(s.labels());
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j)
            if (orthogonal(s[i].vector, s[j].vector))
                g.add_edge(i, j);
    return g;
}

/// Squared normalised overlaps (v_i·v_j)² / ((v_i·v_i)(v_j·v_j)).
inline RatMatrix gram_signature(const RaySet& s)
{
    const std::size_t n = s.size();
    std::vector<Rational> norms;
    norms.reserve(n);
    for (const auto& r : s.rays())
        norms.push_back(inner_product(r.vector, r.vector));
    RatMatrix g(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            Rational ip = inner_product(s[i].vector, s[j].vector);
            Rational x = ip * ip / (norms[i] * norms[j]);
            g(j, i) = x;
            g(i, j) = std::move(x);
        }
    return g;
}

} // namespace ksineq
