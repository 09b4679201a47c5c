#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include <ksineq/linalg.hpp>
#include <ksineq/rational.hpp>
#include <ksineq/ray_set.hpp>

namespace ksineq {

using LabelPair = std::pair<std::string, std::string>;

inline LabelPair make_pair_key(std::string a, std::string b)
{
    if (b < a)
        std::swap(a, b);
    return {std::move(a), std::move(b)};
}

/// Affine combination c + Σ a_v x_v of binary variables.
struct LinearExpr {
    Rational constant;
    std::vector<std::pair<std::string, Rational>> terms;

    static LinearExpr sum_of(const std::vector<std::string>& labels, const Rational& coef = 1)
    {
        LinearExpr e;
        for (const auto& l : labels)
            e.terms.emplace_back(l, coef);
        return e;
    }

    LinearExpr& operator+=(const LinearExpr& o)
    {
        constant += o.constant;
        terms.insert(terms.end(), o.terms.begin(), o.terms.end());
        return *this;
    }
    friend LinearExpr operator+(LinearExpr a, const LinearExpr& b) { return a += b; }

    friend LinearExpr operator*(const Rational& s, LinearExpr e)
    {
        e.constant *= s;
        for (auto& t : e.terms)
            t.second *= s;
        return e;
    }
    friend LinearExpr operator-(const Rational& c, const LinearExpr& e)
    {
        LinearExpr out = Rational(-1) * e;
        out.constant += c;
        return out;
    }
};

/// Values of binary (or [0,1]-relaxed) variables by label.
struct Assignment {
    std::map<std::string, Rational> values;

    const Rational& at(const std::string& label) const
    {
        auto it = values.find(label);
        if (it == values.end())
            throw std::out_of_range("assignment has no value for '" + label + "'");
        return it->second;
    }

    bool is_binary() const
    {
        return std::all_of(values.begin(), values.end(), [](const auto& kv) { return kv.second == 0 || kv.second == 1; });
    }

    friend bool operator==(const Assignment&, const Assignment&) = default;
    friend auto operator<=>(const Assignment& a, const Assignment& b) { return a.values <=> b.values; }
};

/// Quadratic pseudo-Boolean expression in canonical form: squares folded
/// into linear terms (x² = x), pair keys unordered and merged by addition,
/// zero coefficients dropped. Carries the classical bound and quantum value
/// it is claimed to have; both are checked elsewhere, never trusted.
class QuadForm {
public:
    QuadForm() = default;
    explicit QuadForm(std::string name) : name_(std::move(name)) {}

    const std::string& name() const { return name_; }
    const std::vector<std::string>& variables() const { return vars_; }
    const Rational& constant() const { return constant_; }
    const std::map<std::string, Rational>& linear() const { return linear_; }
    const std::map<LabelPair, Rational>& quadratic() const { return quadratic_; }
    const Rational& classical_bound() const { return classical_bound_; }
    const Rational& quantum_value() const { return quantum_value_; }
    bool requires_ks_constraints() const { return requires_ks_; }

    bool has_variable(std::string_view label) const { return var_set_.contains(std::string(label)); }

    Rational linear_coefficient(const std::string& label) const
    {
        auto it = linear_.find(label);
        return it == linear_.end() ? Rational{} : it->second;
    }

    Rational quadratic_coefficient(const std::string& a, const std::string& b) const
    {
        auto it = quadratic_.find(make_pair_key(a, b));
        return it == quadratic_.end() ? Rational{} : it->second;
    }

    void set_name(std::string name) { name_ = std::move(name); }
    void set_claims(Rational classical_bound, Rational quantum_value, bool requires_ks = false)
    {
        classical_bound_ = std::move(classical_bound);
        quantum_value_ = std::move(quantum_value);
        requires_ks_ = requires_ks;
    }

    void add_variable(const std::string& label)
    {
        if (var_set_.insert(label).second)
            vars_.push_back(label);
    }

    void add_constant(const Rational& c) { constant_ += c; }

    void add_linear(const std::string& label, const Rational& c)
    {
        add_variable(label);
        accumulate(linear_, label, c);
    }

    void add_quadratic(const std::string& a, const std::string& b, const Rational& c)
    {
        if (a == b) {
            add_linear(a, c);
            return;
        }
        add_variable(a);
        add_variable(b);
        accumulate(quadratic_, make_pair_key(a, b), c);
    }

    void add_linear_expr(const LinearExpr& e, const Rational& scale = 1)
    {
        add_constant(scale * e.constant);
        for (const auto& [l, c] : e.terms)
            add_linear(l, scale * c);
    }

    /// Adds coef · a · b, expanded and canonicalised.
    void add_product(const Rational& coef, const LinearExpr& a, const LinearExpr& b)
    {
        add_constant(coef * a.constant * b.constant);
        for (const auto& [l, c] : a.terms)
            add_linear(l, coef * c * b.constant);
        for (const auto& [l, c] : b.terms)
            add_linear(l, coef * c * a.constant);
        for (const auto& [la, ca] : a.terms)
            for (const auto& [lb, cb] : b.terms)
                add_quadratic(la, lb, coef * ca * cb);
    }

    /// Adds scale · other, optionally renaming other's variables first.
    void add_form(const QuadForm& other, const Rational& scale = 1,
                  const std::map<std::string, std::string>& rename = {})
    {
        auto name = [&](const std::string& l) {
            auto it = rename.find(l);
            return it == rename.end() ? l : it->second;
        };
        for (const auto& v : other.vars_)
            add_variable(name(v));
        add_constant(scale * other.constant_);
        for (const auto& [l, c] : other.linear_)
            add_linear(name(l), scale * c);
        for (const auto& [k, c] : other.quadratic_)
            add_quadratic(name(k.first), name(k.second), scale * c);
    }

private:
    template <typename Map, typename Key>
    static void accumulate(Map& m, const Key& key, const Rational& c)
    {
        if (c.is_zero())
            return;
        auto [it, inserted] = m.try_emplace(key, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero())
                m.erase(it);
        }
    }

    std::string name_;
    std::vector<std::string> vars_;
    std::unordered_set<std::string> var_set_;
    Rational constant_;
    std::map<std::string, Rational> linear_;
    std::map<LabelPair, Rational> quadratic_;
    Rational classical_bound_;
    Rational quantum_value_;
    bool requires_ks_ = false;
};

/// constant + Σ linear·x + Σ quadratic·x·y, exactly.
inline Rational evaluate(const QuadForm& f, const Assignment& a)
{
    for (const auto& v : f.variables())
        if (!a.values.contains(v))
            throw std::out_of_range("assignment has no value for '" + v + "'");
    Rational total = f.constant();
    for (const auto& [l, c] : f.linear()) {
        const Rational& x = a.at(l);
        if (!x.is_zero())
            total += c * x;
    }
    for (const auto& [k, c] : f.quadratic()) {
        const Rational& x = a.at(k.first);
        const Rational& y = a.at(k.second);
        if (!x.is_zero() && !y.is_zero())
            total += c * x * y;
    }
    return total;
}

/// Binary assignment over `labels` with bit i of `bits` as the value of labels[i].
inline Assignment assignment_from_bits(const std::vector<std::string>& labels, const std::vector<bool>& bits)
{
    Assignment a;
    for (std::size_t i = 0; i < labels.size(); ++i)
        a.values.emplace(labels[i], bits.at(i) ? 1 : 0);
    return a;
}

/// Replaces every variable by its projector in s. Quadratic terms must pair
/// orthogonal rays, whose projector products vanish.
inline RatMatrix quantum_operator(const QuadForm& f, const RaySet& s)
{
    for (const auto& [k, c] : f.quadratic()) {
        if (!orthogonal(s.ray(k.first), s.ray(k.second)))
            throw std::invalid_argument("quadratic term pairs non-orthogonal rays '" + k.first + "' and '" + k.second +
                                        "'");
    }
    const std::size_t d = s.dimension();
    RatMatrix op = f.constant() * RatMatrix::identity(d);
    for (const auto& [l, c] : f.linear())
        op += c * projector(s.ray(l));
    return op;
}

} // namespace ksineq
