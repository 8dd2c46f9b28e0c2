/**
 * @file poly.hpp
 * @brief Dense univariate polynomials over the rationals.
 */
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "exactnum.hpp"

namespace sepprob {

/// Ascending coefficients, trailing zeros trimmed; the zero polynomial is empty.
class RatPoly {
public:
    RatPoly() = default;
    RatPoly(std::vector<Rational> c) : c_(std::move(c)) { trim(); }
    RatPoly(const Rational& constant) : c_{constant} { trim(); }
    RatPoly(long constant) : c_{Rational(constant)} { trim(); }

    static RatPoly x() { return RatPoly(std::vector<Rational>{0, 1}); }
    /// x + a
    static RatPoly linear(const Rational& a) { return RatPoly(std::vector<Rational>{a, 1}); }
    static RatPoly monomial(long deg, const Rational& c = 1)
    {
        std::vector<Rational> v(static_cast<std::size_t>(deg) + 1, Rational(0));
        v.back() = c;
        return RatPoly(std::move(v));
    }

    const std::vector<Rational>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    /// Degree; -1 for the zero polynomial.
    long degree() const { return static_cast<long>(c_.size()) - 1; }
    Rational coeff(long i) const
    {
        return i >= 0 && i < static_cast<long>(c_.size()) ? c_[static_cast<std::size_t>(i)] : Rational(0);
    }
    Rational lead() const { return c_.empty() ? Rational(0) : c_.back(); }

    Rational operator()(const Rational& x) const
    {
        Rational r = 0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it)
            r = r * x + *it;
        return r;
    }

    friend RatPoly operator+(const RatPoly& a, const RatPoly& b)
    {
        std::vector<Rational> r(std::max(a.c_.size(), b.c_.size()), Rational(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            r[i] += a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i)
            r[i] += b.c_[i];
        return RatPoly(std::move(r));
    }
    friend RatPoly operator-(const RatPoly& a)
    {
        std::vector<Rational> r = a.c_;
        for (auto& x : r)
            x = -x;
        return RatPoly(std::move(r));
    }
    friend RatPoly operator-(const RatPoly& a, const RatPoly& b) { return a + (-b); }
    friend RatPoly operator*(const RatPoly& a, const RatPoly& b)
    {
        if (a.is_zero() || b.is_zero())
            return {};
        std::vector<Rational> r(a.c_.size() + b.c_.size() - 1, Rational(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j)
                r[i + j] += a.c_[i] * b.c_[j];
        return RatPoly(std::move(r));
    }
    friend RatPoly operator*(const RatPoly& a, const Rational& s)
    {
        std::vector<Rational> r = a.c_;
        for (auto& x : r)
            x *= s;
        return RatPoly(std::move(r));
    }
    friend bool operator==(const RatPoly& a, const RatPoly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const RatPoly& a, const RatPoly& b) { return !(a == b); }

    RatPoly pow(unsigned long n) const
    {
        RatPoly r(1), b = *this;
        while (n) {
            if (n & 1)
                r = r * b;
            b = b * b;
            n >>= 1;
        }
        return r;
    }

    /// p(x + s)
    RatPoly shift(const Rational& s) const
    {
        std::vector<Rational> r = c_;
        long n = degree();
        for (long i = 0; i < n; ++i)
            for (long j = n - 1; j >= i; --j)
                r[static_cast<std::size_t>(j)] += s * r[static_cast<std::size_t>(j + 1)];
        return RatPoly(std::move(r));
    }

    /// p(s x)
    RatPoly scale_arg(const Rational& s) const
    {
        std::vector<Rational> r = c_;
        Rational f = 1;
        for (auto& x : r) {
            x *= f;
            f *= s;
        }
        return RatPoly(std::move(r));
    }

    /// Quotient and remainder of a / b.
    static std::pair<RatPoly, RatPoly> divmod(const RatPoly& a, const RatPoly& b)
    {
        if (b.is_zero())
            throw DomainError("polynomial division by zero");
        std::vector<Rational> rem = a.c_;
        long db = b.degree();
        if (a.degree() < db)
            return {RatPoly(), a};
        std::vector<Rational> q(static_cast<std::size_t>(a.degree() - db + 1), Rational(0));
        for (long i = a.degree(); i >= db; --i) {
            Rational f = rem[static_cast<std::size_t>(i)] / b.lead();
            q[static_cast<std::size_t>(i - db)] = f;
            if (f == 0)
                continue;
            for (long j = 0; j <= db; ++j)
                rem[static_cast<std::size_t>(i - db + j)] -= f * b.c_[static_cast<std::size_t>(j)];
        }
        return {RatPoly(std::move(q)), RatPoly(std::move(rem))};
    }

    /// Monic greatest common divisor.
    static RatPoly gcd(RatPoly a, RatPoly b)
    {
        while (!b.is_zero()) {
            RatPoly r = divmod(a, b).second;
            a = std::move(b);
            b = std::move(r);
        }
        if (a.is_zero())
            return a;
        return a * (1 / a.lead());
    }

    /// Positive rational c with p / c primitive over the integers.
    Rational content() const
    {
        if (is_zero())
            return 1;
        Integer g = 0, l = 1;
        for (const auto& x : c_) {
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_num_mpz_t());
            mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
        }
        return make_rational(g, l);
    }

    /// Integer coefficients and the denominator d with p = ints / d.
    std::pair<std::vector<Integer>, Integer> integerized() const
    {
        Integer l = 1;
        for (const auto& x : c_)
            mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
        std::vector<Integer> r;
        r.reserve(c_.size());
        for (const auto& x : c_) {
            Rational y = x * Rational(l);
            r.push_back(y.get_num());
        }
        return {std::move(r), l};
    }

    std::string to_string(const std::string& var = "x") const
    {
        if (is_zero())
            return "0";
        std::string s;
        for (long i = degree(); i >= 0; --i) {
            const Rational& c = c_[static_cast<std::size_t>(i)];
            if (c == 0)
                continue;
            std::string cs = c.get_str();
            if (!s.empty()) {
                if (sgn(c) < 0) {
                    s += " - ";
                    cs = Rational(-c).get_str();
                } else {
                    s += " + ";
                }
            }
            if (i == 0)
                s += cs;
            else {
                if (cs == "-1")
                    s += "-";
                else if (cs != "1")
                    s += cs + "*";
                s += var;
                if (i > 1)
                    s += "^" + std::to_string(i);
            }
        }
        return s;
    }

private:
    void trim()
    {
        while (!c_.empty() && c_.back() == 0)
            c_.pop_back();
    }

    std::vector<Rational> c_;
};

/// Horner evaluation of an integer polynomial at an integer.
inline Integer eval_int_poly(const std::vector<Integer>& c, const Integer& x)
{
    Integer r = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it)
        r = r * x + *it;
    return r;
}

/// Product of (x + a_i).
inline RatPoly product_of_linear(const std::vector<Rational>& roots_shift)
{
    RatPoly r(1);
    for (const auto& a : roots_shift)
        r = r * RatPoly::linear(a);
    return r;
}

}  // namespace sepprob
