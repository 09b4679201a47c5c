#pragma once

#include <compare>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

namespace ksineq {

using BigInt = boost::multiprecision::cpp_int;

/// Exact rational number, always stored in lowest terms with a positive
/// denominator. Zero is 0/1.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(std::int64_t n) : num_(n), den_(1) {} // NOLINT: implicit from integers is intended
    Rational(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) { normalize(); }
    Rational(std::int64_t n, std::int64_t d) : num_(n), den_(d) { normalize(); }

    const BigInt& numerator() const { return num_; }
    const BigInt& denominator() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_integer() const { return den_ == 1; }
    int sign() const { return num_.sign(); }

    double to_double() const { return num_.convert_to<double>() / den_.convert_to<double>(); }

    /// "p/q", or "p" when q = 1. Negative values carry a leading '-'.
    std::string to_string() const
    {
        if (den_ == 1)
            return num_.str();
        return num_.str() + "/" + den_.str();
    }

    /// Accepts "p", "p/q", with an optional leading '-' or U+2212.
    static Rational parse(std::string_view text)
    {
        bool negative = false;
        if (text.starts_with("\xE2\x88\x92")) {
            negative = true;
            text.remove_prefix(3);
        }
        else if (text.starts_with('-')) {
            negative = true;
            text.remove_prefix(1);
        }
        auto slash = text.find('/');
        auto num_text = text.substr(0, slash);
        auto den_text = slash == std::string_view::npos ? std::string_view{"1"} : text.substr(slash + 1);
        if (!all_digits(num_text) || !all_digits(den_text))
            throw std::invalid_argument("malformed rational: '" + std::string(text) + "'");
        BigInt n(std::string{num_text});
        BigInt d(std::string{den_text});
        if (d.is_zero())
            throw std::invalid_argument("rational with zero denominator");
        return Rational(negative ? BigInt(-n) : n, d);
    }

    Rational operator-() const
    {
        Rational r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }

    Rational& operator+=(const Rational& o)
    {
        num_ = num_ * o.den_ + o.num_ * den_;
        den_ *= o.den_;
        normalize();
        return *this;
    }
    Rational& operator-=(const Rational& o) { return *this += -o; }
    Rational& operator*=(const Rational& o)
    {
        num_ *= o.num_;
        den_ *= o.den_;
        normalize();
        return *this;
    }
    Rational& operator/=(const Rational& o)
    {
        if (o.is_zero())
            throw std::domain_error("division by zero rational");
        num_ *= o.den_;
        den_ *= o.num_;
        normalize();
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b)
    {
        BigInt lhs = a.num_ * b.den_;
        BigInt rhs = b.num_ * a.den_;
        if (lhs < rhs)
            return std::strong_ordering::less;
        if (lhs > rhs)
            return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

private:
    static bool all_digits(std::string_view s)
    {
        if (s.empty())
            return false;
        for (char c : s)
            if (c < '0' || c > '9')
                return false;
        return true;
    }

    void normalize()
    {
        if (den_.is_zero())
            throw std::domain_error("rational with zero denominator");
        if (den_.sign() < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        if (num_.is_zero()) {
            den_ = 1;
            return;
        }
        BigInt g = boost::multiprecision::gcd(num_, den_);
        if (g != 1) {
            num_ /= g;
            den_ /= g;
        }
    }

    BigInt num_;
    BigInt den_;
};

inline BigInt lcm(const BigInt& a, const BigInt& b)
{
    if (a.is_zero() || b.is_zero())
        return 0;
    return boost::multiprecision::abs(a / boost::multiprecision::gcd(a, b) * b);
}

} // namespace ksineq
