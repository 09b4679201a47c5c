#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include <ksineq/graph.hpp>
#include <ksineq/ray_set.hpp>

namespace ksineq {

/// Unit-norm floating-point rays with labels.
struct FloatRaySet {
    std::size_t dimension = 0;
    std::vector<std::string> labels;
    std::vector<Eigen::VectorXd> rays;

    std::size_t size() const { return rays.size(); }

    /// Normalised copy of an exact ray set.
    static FloatRaySet from(const RaySet& s)
    {
        FloatRaySet out;
        out.dimension = s.dimension();
        for (const auto& r : s.rays()) {
            Eigen::VectorXd v(s.dimension());
            for (std::size_t i = 0; i < s.dimension(); ++i)
                v(static_cast<Eigen::Index>(i)) = r.vector[i].to_double();
            out.labels.push_back(r.label);
            out.rays.push_back(v.normalized());
        }
        return out;
    }

    std::size_t index_of(const std::string& label) const
    {
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == label)
                return i;
        throw std::out_of_range("no ray labelled '" + label + "'");
    }
};

struct RealizationReport {
    double residual = 0;
    bool converged = false;
    bool degenerate = false;
    bool matched_reference = false;
    std::uint64_t seed = 0;
    std::uint64_t sweeps = 0;
    Eigen::MatrixXd gram;
    FloatRaySet rays;
};

namespace realize_limits {
inline constexpr double converged_residual = 1e-20;
inline constexpr double basis_determinant = 1e-6;
inline constexpr double signature_tolerance = 1e-6;
} // namespace realize_limits

/// Σ over adjacent pairs of (u·v)², matching vertices to rays by label.
inline double residual(const FloatRaySet& s, const Graph& g)
{
    if (s.size() != g.size())
        throw std::invalid_argument("ray count does not match graph size");
    std::vector<std::size_t> ray_of(g.size());
    for (std::size_t v = 0; v < g.size(); ++v)
        ray_of[v] = s.index_of(g.label(v));
    double r = 0;
    for (auto [u, v] : g.edges()) {
        double ip = s.rays[ray_of[u]].dot(s.rays[ray_of[v]]);
        r += ip * ip;
    }
    return r;
}

/// Squared normalised overlaps |<u|v>|² / (|u|²|v|²).
inline Eigen::MatrixXd float_gram_signature(const FloatRaySet& s)
{
    const auto n = static_cast<Eigen::Index>(s.size());
    Eigen::MatrixXd g(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i; j < n; ++j) {
            const auto& a = s.rays[static_cast<std::size_t>(i)];
            const auto& b = s.rays[static_cast<std::size_t>(j)];
            double ip = a.dot(b);
            g(i, j) = g(j, i) = ip * ip / (a.squaredNorm() * b.squaredNorm());
        }
    return g;
}

/// True iff the squared-overlap Gram matrices agree entrywise within tol,
/// pairing rays by label.
inline bool compare_gram(const FloatRaySet& a, const FloatRaySet& b, double tol)
{
    if (a.size() != b.size())
        throw std::invalid_argument("ray sets have different sizes");
    std::vector<std::size_t> map(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        map[i] = b.index_of(a.labels[i]);
    const Eigen::MatrixXd ga = float_gram_signature(a);
    const Eigen::MatrixXd gb = float_gram_signature(b);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) {
            double diff = std::abs(ga(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) -
                                   gb(static_cast<Eigen::Index>(map[i]), static_cast<Eigen::Index>(map[j])));
            if (!(diff < tol))
                return false;
        }
    return true;
}

inline bool compare_gram(const RaySet& a, const RaySet& b, double tol)
{
    return compare_gram(FloatRaySet::from(a), FloatRaySet::from(b), tol);
}
inline bool compare_gram(const FloatRaySet& a, const RaySet& b, double tol)
{
    return compare_gram(a, FloatRaySet::from(b), tol);
}
inline bool compare_gram(const RaySet& a, const FloatRaySet& b, double tol)
{
    return compare_gram(FloatRaySet::from(a), b, tol);
}

/// A realization is degenerate when some d-clique of the graph fails to be a
/// basis (Gram determinant below threshold) or two rays coincide.
inline bool is_degenerate(const FloatRaySet& s, const Graph& g)
{
    const auto d = static_cast<Eigen::Index>(s.dimension);
    std::vector<std::size_t> ray_of(g.size());
    for (std::size_t v = 0; v < g.size(); ++v)
        ray_of[v] = s.index_of(g.label(v));
    for (const auto& clique : cliques_of_size(g, s.dimension)) {
        Eigen::MatrixXd m(d, d);
        for (Eigen::Index k = 0; k < d; ++k)
            m.col(k) = s.rays[ray_of[clique[static_cast<std::size_t>(k)]]];
        const double gram_det = (m.transpose() * m).determinant();
        if (std::abs(gram_det) < realize_limits::basis_determinant)
            return true;
    }
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j) {
            double ip = s.rays[i].dot(s.rays[j]);
            if (ip * ip > 1 - realize_limits::basis_determinant)
                return true;
        }
    return false;
}

/// Searches for unit rays, one per vertex, orthogonal along every edge.
/// Starts from seeded uniform points on the sphere and sweeps the vertices,
/// resetting each ray to the least eigenvector of Σ_{neighbours} v vᵀ, until
/// the residual drops below 1e-20 or `max_sweeps` is reached. Failure is
/// reported, not thrown.
inline RealizationReport realize_graph(const Graph& g, std::size_t dimension, std::uint64_t seed,
                                       std::uint64_t max_sweeps, const RaySet* reference = nullptr,
                                       double tol = realize_limits::signature_tolerance)
{
    if (dimension < 2)
        throw std::invalid_argument("realization needs dimension >= 2");
    const auto d = static_cast<Eigen::Index>(dimension);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    RealizationReport report;
    report.seed = seed;
    FloatRaySet& s = report.rays;
    s.dimension = dimension;
    s.labels = g.labels();
    for (std::size_t v = 0; v < g.size(); ++v) {
        Eigen::VectorXd x(d);
        for (Eigen::Index i = 0; i < d; ++i)
            x(i) = normal(rng);
        s.rays.push_back(x.normalized());
    }
    std::vector<std::vector<std::size_t>> nbrs(g.size());
    for (std::size_t v = 0; v < g.size(); ++v)
        nbrs[v] = g.neighbours(v);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(d);
    report.residual = residual(s, g);
    while (report.residual >= realize_limits::converged_residual && report.sweeps < max_sweeps) {
        for (std::size_t v = 0; v < g.size(); ++v) {
            if (nbrs[v].empty())
                continue;
            Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
            for (auto w : nbrs[v])
                m.noalias() += s.rays[w] * s.rays[w].transpose();
            solver.compute(m);
            Eigen::VectorXd next = solver.eigenvectors().col(0).normalized();
            if (next.dot(s.rays[v]) < 0)
                next = -next;
            s.rays[v] = next;
        }
        ++report.sweeps;
        report.residual = residual(s, g);
    }
    report.converged = report.residual < realize_limits::converged_residual;
    report.degenerate = is_degenerate(s, g);
    report.gram = float_gram_signature(s);
    if (reference && report.converged && !report.degenerate)
        report.matched_reference = compare_gram(s, *reference, tol);
    return report;
}

struct RealizationSummary {
    std::size_t runs = 0;
    std::size_t converged = 0;
    std::size_t nondegenerate = 0; // converged and nondegenerate
    std::size_t matched = 0;
    std::vector<RealizationReport> reports;

    /// At least one usable run, and every usable run matches the reference.
    bool uniqueness_holds() const { return nondegenerate > 0 && matched == nondegenerate; }
};

/// realize_graph for seeds first_seed .. first_seed + seeds - 1.
inline RealizationSummary realize_seeds(const Graph& g, std::size_t dimension, std::uint64_t seeds,
                                        std::uint64_t max_sweeps, const RaySet* reference,
                                        double tol = realize_limits::signature_tolerance, std::uint64_t first_seed = 0)
{
    RealizationSummary out;
    for (std::uint64_t k = 0; k < seeds; ++k) {
        RealizationReport r = realize_graph(g, dimension, first_seed + k, max_sweeps, reference, tol);
        ++out.runs;
        if (r.converged) {
            ++out.converged;
            if (!r.degenerate) {
                ++out.nondegenerate;
                out.matched += r.matched_reference;
            }
        }
        out.reports.push_back(std::move(r));
    }
    return out;
}

} // namespace ksineq
