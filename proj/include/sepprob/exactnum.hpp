/**
 * @file exactnum.hpp
 * @brief Exact arithmetic substrate: rationals, half-integers, Pochhammer
 * symbols, gamma values at half-integers and telescoped gamma ratios.
 */
#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sepprob {

using Integer = mpz_class;
using Rational = mpq_class;

/// Argument outside the mathematical domain of an operation.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Gamma or Pochhammer pole hit.
struct PoleError : DomainError {
    using DomainError::DomainError;
};

/// Series that cannot be summed in the requested mode.
struct ModeError : std::logic_error {
    using std::logic_error::logic_error;
};

/// Series that does not converge or cannot be certified.
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline Rational make_rational(long num, long den = 1)
{
    if (den == 0)
        throw DomainError("zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

inline Rational make_rational(const Integer& num, const Integer& den = 1)
{
    if (den == 0)
        throw DomainError("zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

inline bool is_integer(const Rational& x) { return x.get_den() == 1; }

inline bool is_half_integer(const Rational& x)
{
    return x.get_den() == 1 || x.get_den() == 2;
}

inline bool is_nonpositive_integer(const Rational& x)
{
    return is_integer(x) && sgn(x) <= 0;
}

inline Integer floor_of(const Rational& x)
{
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return q;
}

inline Integer ceil_of(const Rational& x)
{
    Integer q;
    mpz_cdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return q;
}

/// Integer x as a long; throws if it does not fit.
inline long to_long(const Integer& x)
{
    if (!x.fits_slong_p())
        throw DomainError("integer out of range: " + x.get_str());
    return x.get_si();
}

inline long to_long(const Rational& x)
{
    if (!is_integer(x))
        throw DomainError("not an integer: " + x.get_str());
    return to_long(x.get_num());
}

inline Rational pow_rational(const Rational& x, long e)
{
    Rational base = x;
    if (e < 0) {
        if (x == 0)
            throw PoleError("zero to a negative power");
        base = 1 / x;
        e = -e;
    }
    Integer n, d;
    mpz_pow_ui(n.get_mpz_t(), base.get_num_mpz_t(), static_cast<unsigned long>(e));
    mpz_pow_ui(d.get_mpz_t(), base.get_den_mpz_t(), static_cast<unsigned long>(e));
    return Rational(n, d);
}

/// "n/d" or "n" for integers.
inline std::string to_string(const Rational& x) { return x.get_str(); }

/**
 * Parse "n", "n/d" or an exact decimal such as "-0.125" or "2.5e-3".
 * Decimals are converted digit by digit, never through binary floats.
 */
inline Rational parse_rational(const std::string& text)
{
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c)))
            s.push_back(c);
    if (s.empty())
        throw DomainError("empty rational");
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        Rational n = parse_rational(s.substr(0, slash));
        Rational d = parse_rational(s.substr(slash + 1));
        if (d == 0)
            throw DomainError("zero denominator in '" + text + "'");
        Rational r = n / d;
        r.canonicalize();
        return r;
    }
    std::size_t i = 0;
    bool neg = false;
    if (s[i] == '+' || s[i] == '-') {
        neg = s[i] == '-';
        ++i;
    }
    Integer mant = 0;
    long scale = 0;
    bool digits = false, dot = false;
    for (; i < s.size(); ++i) {
        char c = s[i];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            mant = mant * 10 + (c - '0');
            digits = true;
            if (dot)
                --scale;
        } else if (c == '.' && !dot) {
            dot = true;
        } else if (c == 'e' || c == 'E') {
            break;
        } else {
            throw DomainError("malformed rational '" + text + "'");
        }
    }
    if (!digits)
        throw DomainError("malformed rational '" + text + "'");
    if (i < s.size()) {
        std::string ex = s.substr(i + 1);
        if (ex.empty())
            throw DomainError("malformed exponent in '" + text + "'");
        std::size_t used = 0;
        long e = std::stol(ex, &used);
        if (used != ex.size())
            throw DomainError("malformed exponent in '" + text + "'");
        scale += e;
    }
    Rational r(mant);
    r *= pow_rational(Rational(10), scale);
    r.canonicalize();
    return neg ? Rational(-r) : r;
}

/// An integer or half-integer, stored as twice its value.
struct HalfInteger {
    Integer twice_value;

    HalfInteger() = default;
    explicit HalfInteger(const Integer& twice) : twice_value(twice) {}

    static HalfInteger from_rational(const Rational& x)
    {
        if (!is_half_integer(x))
            throw DomainError("not a half-integer: " + x.get_str());
        return HalfInteger(Integer(x.get_num() * (x.get_den() == 1 ? 2 : 1)));
    }

    Rational value() const { return make_rational(twice_value, Integer(2)); }
    bool is_integer() const { return mpz_even_p(twice_value.get_mpz_t()) != 0; }
};

/**
 * Product of binary-split integer factors num + i*den, i in [lo, hi).
 */
inline Integer linear_product(const Integer& num, const Integer& den, unsigned long lo,
                              unsigned long hi)
{
    if (hi <= lo)
        return 1;
    if (hi - lo <= 8) {
        Integer r = 1;
        for (unsigned long i = lo; i < hi; ++i)
            r *= num + den * Integer(i);
        return r;
    }
    unsigned long mid = lo + (hi - lo) / 2;
    return linear_product(num, den, lo, mid) * linear_product(num, den, mid, hi);
}

/// Rising factorial x(x+1)...(x+n-1).
inline Rational pochhammer(const Rational& x, unsigned long n)
{
    if (n == 0)
        return 1;
    Integer p = linear_product(x.get_num(), x.get_den(), 0, n);
    Integer q;
    mpz_pow_ui(q.get_mpz_t(), x.get_den_mpz_t(), n);
    return make_rational(p, q);
}

inline Integer factorial(unsigned long n)
{
    Integer r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

/// rational coefficient times an integer power of sqrt(pi).
struct ExactReal {
    Rational coeff = 0;
    long sqrtpi_pow = 0;

    ExactReal() = default;
    ExactReal(Rational c, long p = 0) : coeff(std::move(c)), sqrtpi_pow(p)
    {
        coeff.canonicalize();
        if (coeff == 0)
            sqrtpi_pow = 0;
    }

    bool is_rational() const { return sqrtpi_pow == 0; }

    friend ExactReal operator*(const ExactReal& a, const ExactReal& b)
    {
        return ExactReal(a.coeff * b.coeff, a.sqrtpi_pow + b.sqrtpi_pow);
    }
    friend ExactReal operator/(const ExactReal& a, const ExactReal& b)
    {
        if (b.coeff == 0)
            throw DomainError("division by zero");
        return ExactReal(a.coeff / b.coeff, a.sqrtpi_pow - b.sqrtpi_pow);
    }
    friend bool operator==(const ExactReal& a, const ExactReal& b)
    {
        return a.coeff == b.coeff && a.sqrtpi_pow == b.sqrtpi_pow;
    }
    /// Sum of two values with equal sqrt(pi) power.
    friend ExactReal operator+(const ExactReal& a, const ExactReal& b)
    {
        if (a.coeff == 0)
            return b;
        if (b.coeff == 0)
            return a;
        if (a.sqrtpi_pow != b.sqrtpi_pow)
            throw DomainError("adding values with different sqrt(pi) powers");
        return ExactReal(a.coeff + b.coeff, a.sqrtpi_pow);
    }
    friend ExactReal operator-(const ExactReal& a) { return ExactReal(-a.coeff, a.sqrtpi_pow); }
    friend ExactReal operator-(const ExactReal& a, const ExactReal& b) { return a + (-b); }

    /// {"coeff":"n/d","sqrtpi_pow":m}
    std::string to_json() const
    {
        return "{\"coeff\":\"" + coeff.get_str() + "\",\"sqrtpi_pow\":" + std::to_string(sqrtpi_pow) + "}";
    }
    std::string to_string() const
    {
        if (sqrtpi_pow == 0)
            return coeff.get_str();
        return coeff.get_str() + "*sqrt(pi)^" + std::to_string(sqrtpi_pow);
    }
};

/// Exact Gamma at a positive half-integer.
inline ExactReal gamma_half(const HalfInteger& x)
{
    if (x.twice_value <= 0)
        throw PoleError("gamma_half: nonpositive argument " + x.value().get_str());
    if (x.is_integer()) {
        Integer n = x.twice_value / 2;
        return ExactReal(Rational(factorial(n.get_ui() - 1)), 0);
    }
    Integer m = (x.twice_value - 1) / 2;
    return ExactReal(pochhammer(make_rational(1, 2), m.get_ui()), 1);
}

/// Treatment of nonpositive-integer arguments in gamma ratios.
enum class PolePolicy {
    reject,          ///< any nonpositive argument is an error
    reciprocal_zero  ///< 1/Gamma at a pole is 0; poles in numerators are errors
};

namespace detail {

/// Gamma(a)/Gamma(b) for a - b integer, a and b not poles.
inline Rational gamma_quotient_shift(const Rational& a, const Rational& b)
{
    Rational d = a - b;
    long n = to_long(d);
    if (n >= 0)
        return pochhammer(b, static_cast<unsigned long>(n));
    return 1 / pochhammer(a, static_cast<unsigned long>(-n));
}

/// Gamma(a) = Gamma(base) * shift, base in {1, 1/2}; returns the shift factor.
inline Rational gamma_from_base(const Rational& a, const Rational& base)
{
    return gamma_quotient_shift(a, base);
}

}  // namespace detail

/**
 * Exact prod Gamma(n_i) / prod Gamma(d_j) for half-integer arguments.
 * Arguments in the same residue class mod 1 are sorted and paired into
 * Pochhammer chains, so no large factorial is ever formed on its own.
 */
inline ExactReal gamma_ratio(const std::vector<Rational>& numerators,
                             const std::vector<Rational>& denominators,
                             PolePolicy policy = PolePolicy::reject)
{
    std::vector<Rational> num[2], den[2];
    for (const auto& a : numerators) {
        if (!is_half_integer(a))
            throw DomainError("gamma_ratio: not a half-integer " + a.get_str());
        if (is_nonpositive_integer(a))
            throw PoleError("gamma_ratio: numerator pole at " + a.get_str());
        if (policy == PolePolicy::reject && sgn(a) <= 0)
            throw PoleError("gamma_ratio: nonpositive argument " + a.get_str());
        num[is_integer(a) ? 0 : 1].push_back(a);
    }
    for (const auto& b : denominators) {
        if (!is_half_integer(b))
            throw DomainError("gamma_ratio: not a half-integer " + b.get_str());
        if (policy == PolePolicy::reject && sgn(b) <= 0)
            throw PoleError("gamma_ratio: nonpositive argument " + b.get_str());
        if (is_nonpositive_integer(b))
            return ExactReal(0, 0);
        den[is_integer(b) ? 0 : 1].push_back(b);
    }
    Rational coeff = 1;
    long pow = 0;
    for (int c = 0; c < 2; ++c) {
        auto& n = num[c];
        auto& d = den[c];
        std::sort(n.begin(), n.end());
        std::sort(d.begin(), d.end());
        std::size_t common = std::min(n.size(), d.size());
        // pair the largest arguments so chains stay short
        std::size_t no = n.size() - common, dof = d.size() - common;
        for (std::size_t i = 0; i < common; ++i)
            coeff *= detail::gamma_quotient_shift(n[no + i], d[dof + i]);
        Rational base = c == 0 ? Rational(1) : make_rational(1, 2);
        for (std::size_t i = 0; i < no; ++i) {
            coeff *= detail::gamma_from_base(n[i], base);
            if (c == 1)
                ++pow;
        }
        for (std::size_t i = 0; i < dof; ++i) {
            coeff /= detail::gamma_from_base(d[i], base);
            if (c == 1)
                --pow;
        }
    }
    return ExactReal(coeff, pow);
}

inline ExactReal gamma_ratio(const std::vector<HalfInteger>& numerators,
                             const std::vector<HalfInteger>& denominators)
{
    std::vector<Rational> n, d;
    for (const auto& x : numerators)
        n.push_back(x.value());
    for (const auto& x : denominators)
        d.push_back(x.value());
    return gamma_ratio(n, d, PolePolicy::reject);
}

}  // namespace sepprob
