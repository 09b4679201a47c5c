#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <ksineq/rational.hpp>

namespace ksineq {

/// A nonzero rational vector standing for a ray, dimension >= 3. Never
/// normalized in storage.
class RayVec {
public:
    RayVec() = default;

    explicit RayVec(std::vector<Rational> components) : c_(std::move(components))
    {
        if (c_.size() < 3)
            throw std::invalid_argument("ray vector dimension must be at least 3");
        bool nonzero = false;
        for (const auto& x : c_)
            nonzero = nonzero || !x.is_zero();
        if (!nonzero)
            throw std::invalid_argument("ray vector must not be zero");
    }

    RayVec(std::initializer_list<std::int64_t> ints) : RayVec(std::vector<Rational>(ints.begin(), ints.end())) {}

    std::size_t dimension() const { return c_.size(); }
    const Rational& operator[](std::size_t i) const { return c_[i]; }
    std::span<const Rational> components() const { return c_; }

    /// Zero-pads this ray into a larger space starting at coordinate `offset`.
    RayVec embedded(std::size_t dimension, std::size_t offset) const
    {
        if (offset + c_.size() > dimension)
            throw std::invalid_argument("embedding does not fit in target dimension");
        std::vector<Rational> out(dimension);
        for (std::size_t i = 0; i < c_.size(); ++i)
            out[offset + i] = c_[i];
        return RayVec(std::move(out));
    }

    RayVec scaled(const Rational& factor) const
    {
        std::vector<Rational> out = c_;
        for (auto& x : out)
            x *= factor;
        return RayVec(std::move(out));
    }

    friend bool operator==(const RayVec&, const RayVec&) = default;

private:
    std::vector<Rational> c_;
};

/// Dense square matrix of rationals.
class RatMatrix {
public:
    RatMatrix() = default;
    explicit RatMatrix(std::size_t dimension) : n_(dimension), e_(dimension * dimension) {}

    static RatMatrix identity(std::size_t dimension)
    {
        RatMatrix m(dimension);
        for (std::size_t i = 0; i < dimension; ++i)
            m(i, i) = 1;
        return m;
    }

    std::size_t dimension() const { return n_; }
    Rational& operator()(std::size_t i, std::size_t j) { return e_[i * n_ + j]; }
    const Rational& operator()(std::size_t i, std::size_t j) const { return e_[i * n_ + j]; }

    Rational trace() const
    {
        Rational t;
        for (std::size_t i = 0; i < n_; ++i)
            t += (*this)(i, i);
        return t;
    }

    bool is_symmetric() const
    {
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = i + 1; j < n_; ++j)
                if ((*this)(i, j) != (*this)(j, i))
                    return false;
        return true;
    }

    RatMatrix& operator+=(const RatMatrix& o)
    {
        check_same(o);
        for (std::size_t k = 0; k < e_.size(); ++k)
            e_[k] += o.e_[k];
        return *this;
    }

    RatMatrix& operator*=(const Rational& s)
    {
        for (auto& x : e_)
            x *= s;
        return *this;
    }

    friend RatMatrix operator+(RatMatrix a, const RatMatrix& b) { return a += b; }
    friend RatMatrix operator*(RatMatrix a, const Rational& s) { return a *= s; }
    friend RatMatrix operator*(const Rational& s, RatMatrix a) { return a *= s; }

    friend RatMatrix operator*(const RatMatrix& a, const RatMatrix& b)
    {
        a.check_same(b);
        RatMatrix out(a.n_);
        for (std::size_t i = 0; i < a.n_; ++i)
            for (std::size_t k = 0; k < a.n_; ++k) {
                if (a(i, k).is_zero())
                    continue;
                for (std::size_t j = 0; j < a.n_; ++j)
                    if (!b(k, j).is_zero())
                        out(i, j) += a(i, k) * b(k, j);
            }
        return out;
    }

    friend bool operator==(const RatMatrix&, const RatMatrix&) = default;

private:
    void check_same(const RatMatrix& o) const
    {
        if (o.n_ != n_)
            throw std::invalid_argument("matrix dimension mismatch");
    }

    std::size_t n_ = 0;
    std::vector<Rational> e_;
};

inline Rational inner_product(const RayVec& u, const RayVec& v)
{
    if (u.dimension() != v.dimension())
        throw std::invalid_argument("inner product of rays with different dimensions (" +
                                    std::to_string(u.dimension()) + " vs " + std::to_string(v.dimension()) + ")");
    Rational s;
    for (std::size_t i = 0; i < u.dimension(); ++i)
        if (!u[i].is_zero() && !v[i].is_zero())
            s += u[i] * v[i];
    return s;
}

inline bool orthogonal(const RayVec& u, const RayVec& v) { return inner_product(u, v).is_zero(); }

/// Rank-one projector v vᵀ / (v·v).
inline RatMatrix projector(const RayVec& v)
{
    const std::size_t n = v.dimension();
    if (n == 0)
        throw std::invalid_argument("projector of an empty ray");
    Rational norm2 = inner_product(v, v);
    if (norm2.is_zero())
        throw std::invalid_argument("projector of the zero vector");
    RatMatrix p(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (v[i].is_zero())
            continue;
        for (std::size_t j = i; j < n; ++j) {
            if (v[j].is_zero())
                continue;
            Rational x = v[i] * v[j] / norm2;
            p(j, i) = x;
            p(i, j) = std::move(x);
        }
    }
    return p;
}

/// Σ_k c_k · projector(v_k).
inline RatMatrix weighted_operator(std::span<const std::pair<Rational, RayVec>> terms, std::size_t dimension)
{
    RatMatrix out(dimension);
    for (const auto& [weight, ray] : terms) {
        if (ray.dimension() != dimension)
            throw std::invalid_argument("ray of dimension " + std::to_string(ray.dimension()) +
                                        " in operator of dimension " + std::to_string(dimension));
        if (weight.is_zero())
            continue;
        out += weight * projector(ray);
    }
    return out;
}

/// Returns q when m = q·I exactly.
inline std::optional<Rational> scalar_identity_check(const RatMatrix& m)
{
    const std::size_t n = m.dimension();
    if (n == 0)
        return std::nullopt;
    const Rational q = m(0, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j ? m(i, j) != q : !m(i, j).is_zero())
                return std::nullopt;
        }
    return q;
}

} // namespace ksineq
