#pragma once

// Helpers shared by the unit suites: seeded generators and small exact
// oracles written independently of the library code they check.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <ksineq/ksineq.hpp>

namespace testing_support {

using namespace ksineq;

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline RayVec random_ray(std::mt19937_64& g, std::size_t dim, int range = 5)
{
    std::uniform_int_distribution<int> pick(-range, range);
    for (;;) {
        std::vector<Rational> c;
        bool nonzero = false;
        for (std::size_t i = 0; i < dim; ++i) {
            int x = pick(g);
            nonzero = nonzero || x != 0;
            c.emplace_back(x);
        }
        if (nonzero)
            return RayVec(std::move(c));
    }
}

inline Assignment random_binary(std::mt19937_64& g, const std::vector<std::string>& labels)
{
    std::bernoulli_distribution coin(0.5);
    Assignment a;
    for (const auto& l : labels)
        a.values.emplace(l, coin(g) ? 1 : 0);
    return a;
}

inline Assignment from_mask(const std::vector<std::string>& labels, std::uint64_t mask)
{
    Assignment a;
    for (std::size_t i = 0; i < labels.size(); ++i)
        a.values.emplace(labels[i], (mask >> i) & 1u ? 1 : 0);
    return a;
}

/// M·v for a rational matrix given row-major.
inline RayVec apply(const std::vector<std::vector<Rational>>& m, const RayVec& v)
{
    std::vector<Rational> out(m.size());
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < v.dimension(); ++j)
            out[i] += m[i][j] * v[j];
    return RayVec(std::move(out));
}

/// Identity of size d with the (3/5, 4/5) rotation in plane (p, q).
inline std::vector<std::vector<Rational>> rotation_345(std::size_t d, std::size_t p, std::size_t q)
{
    std::vector<std::vector<Rational>> m(d, std::vector<Rational>(d));
    for (std::size_t i = 0; i < d; ++i)
        m[i][i] = 1;
    m[p][p] = Rational(3, 5);
    m[p][q] = Rational(-4, 5);
    m[q][p] = Rational(4, 5);
    m[q][q] = Rational(3, 5);
    return m;
}

/// Applies m to every ray, keeping labels (aliases and layout dropped).
inline RaySet transformed(const RaySet& s, const std::vector<std::vector<Rational>>& m)
{
    RaySet out(s.dimension());
    for (const auto& r : s.rays())
        out.add(r.label, apply(m, r.vector));
    return out;
}

} // namespace testing_support
