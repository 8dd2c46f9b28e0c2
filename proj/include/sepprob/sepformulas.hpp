/**
 * @file sepformulas.hpp
 * @brief Separability probabilities Q(k, alpha) (|rho^PT| > |rho|) and
 * P(k, alpha) (|rho^PT| > 0) for two-qubit-like states under the induced
 * measure: parameter rules, finite sums, the hypergeometric master formula,
 * alpha-specific closed forms, boundary and limit values, and constants.
 */
#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "hyperg.hpp"

namespace sepprob {

enum class ProbKind { q_partial, p_total, complement };

inline std::string to_string(ProbKind k)
{
    switch (k) {
    case ProbKind::q_partial: return "Q-partial";
    case ProbKind::p_total: return "P-total";
    case ProbKind::complement: return "complement";
    }
    return "?";
}

inline const std::string kFlagOutsideRange = "outside-verified-range";
inline const std::string kFlagOverride = "override-observed-value";
inline const std::string kFlagComplexParity = "complex-parity-real-part";

/// A probability with an exact form, a certified enclosure, or both.
struct SepValue {
    ProbKind kind = ProbKind::q_partial;
    std::optional<ExactReal> exact;
    std::optional<BoundedFloat> numeric;
    std::string flag;

    static SepValue of_exact(ExactReal x, ProbKind kind)
    {
        SepValue v;
        v.kind = kind;
        v.exact = std::move(x);
        return v;
    }
    static SepValue of_numeric(BoundedFloat x, ProbKind kind)
    {
        SepValue v;
        v.kind = kind;
        v.numeric = std::move(x);
        return v;
    }

    bool is_rational() const { return exact && exact->is_rational(); }
    Rational rational() const
    {
        if (!is_rational())
            throw ModeError("value is not an exact rational");
        return exact->coeff;
    }

    BoundedFloat approx(mpfr_prec_t prec = 128) const
    {
        if (exact)
            return to_bounded_float(*exact, prec);
        return *numeric;
    }

    std::string to_string(int digits = 30) const
    {
        if (exact)
            return exact->to_string();
        return numeric->to_string(digits);
    }
};

namespace detail {

inline long floor_div(long a, long b)
{
    long q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0)))
        --q;
    return q;
}

inline Rational alpha_as_integer_check(const Rational& alpha, const char* who)
{
    if (!is_integer(alpha))
        throw DomainError(std::string(who) + ": alpha must be an integer");
    return alpha;
}

/// (c1 + c2) with exact arithmetic when the sqrt(pi) powers agree.
inline SepValue combine(const Rational& c, int sign, const ExactReal& t, ProbKind kind, mpfr_prec_t prec)
{
    ExactReal s = sign > 0 ? t : -t;
    if (s.coeff == 0 || s.sqrtpi_pow == 0)
        return SepValue::of_exact(ExactReal(c + s.coeff, 0), kind);
    return SepValue::of_numeric(to_bounded_float(s, prec + 16) + c, kind);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Gamma products along a line in k, with limits at coinciding poles.

/// Gamma(slope * k + offset).
struct LinGamma {
    Rational slope;
    Rational offset;
    Rational at(const Rational& k) const { return slope * k + offset; }
};

namespace detail {

/// Residue factor of Gamma(slope*(k0+e) + offset) ~ factor / e at a pole -n.
inline Rational pole_factor(const Rational& slope, const Rational& v)
{
    if (slope == 0)
        throw PoleError("gamma pole with a constant argument " + v.get_str());
    long n = to_long(Rational(-v));
    Rational f = Rational(1) / (Rational(factorial(static_cast<unsigned long>(n))) * slope);
    return n % 2 ? Rational(-f) : f;
}

struct PoleSplit {
    Rational factor = 1;
    long order = 0;
    std::vector<Rational> num, den;
};

inline PoleSplit split_poles(const std::vector<LinGamma>& num, const std::vector<LinGamma>& den, const Rational& k)
{
    PoleSplit s;
    for (const auto& g : num) {
        Rational v = g.at(k);
        if (is_nonpositive_integer(v)) {
            s.factor *= pole_factor(g.slope, v);
            ++s.order;
        } else {
            s.num.push_back(v);
        }
    }
    for (const auto& g : den) {
        Rational v = g.at(k);
        if (is_nonpositive_integer(v)) {
            s.factor /= pole_factor(g.slope, v);
            --s.order;
        } else {
            s.den.push_back(v);
        }
    }
    return s;
}

}  // namespace detail

/**
 * Limit of prod Gamma(num) / prod Gamma(den) as the line parameter tends to k,
 * for half-integer arguments. Throws PoleError when the limit is infinite.
 */
inline ExactReal gamma_product_limit(const std::vector<LinGamma>& num, const std::vector<LinGamma>& den,
                                     const Rational& k)
{
    detail::PoleSplit s = detail::split_poles(num, den, k);
    if (s.order > 0)
        throw PoleError("gamma product diverges at k = " + k.get_str());
    if (s.order < 0)
        return ExactReal(0, 0);
    return ExactReal(s.factor, 0) * gamma_ratio(s.num, s.den, PolePolicy::reciprocal_zero);
}

inline BoundedFloat gamma_product_limit_numeric(const std::vector<LinGamma>& num, const std::vector<LinGamma>& den,
                                                const Rational& k, mpfr_prec_t prec)
{
    detail::PoleSplit s = detail::split_poles(num, den, k);
    if (s.order > 0)
        throw PoleError("gamma product diverges at k = " + k.get_str());
    if (s.order < 0)
        return BoundedFloat::from_rational(0, prec);
    return gamma_ratio_numeric(s.num, s.den, prec + 16) * s.factor;
}

/// coeff * 2^(pow2_slope k + pow2_offset) * poly(k) * sqrt(pi)^m * Gamma product.
struct GammaTerm {
    Rational coeff = 1;
    Rational pow2_slope = 0;
    Rational pow2_offset = 0;
    RatPoly poly = RatPoly(1);
    long sqrtpi_pow = 0;
    std::vector<LinGamma> num, den;

    bool exact_at(const Rational& k) const
    {
        if (!is_integer(Rational(pow2_slope * k + pow2_offset)))
            return false;
        for (const auto& g : num)
            if (!is_half_integer(g.at(k)))
                return false;
        for (const auto& g : den)
            if (!is_half_integer(g.at(k)))
                return false;
        return true;
    }

    ExactReal exact(const Rational& k) const
    {
        Rational e = pow2_slope * k + pow2_offset;
        if (!is_integer(e))
            throw DomainError("GammaTerm: non-integer power of two");
        ExactReal g = gamma_product_limit(num, den, k);
        return ExactReal(coeff * pow_rational(2, to_long(e)) * poly(k), sqrtpi_pow) * g;
    }

    BoundedFloat numeric(const Rational& k, mpfr_prec_t prec) const
    {
        mpfr_prec_t w = prec + 32;
        BoundedFloat g = gamma_product_limit_numeric(num, den, k, w);
        BoundedFloat p = pow(Rational(2), Rational(pow2_slope * k + pow2_offset), w);
        BoundedFloat r = g * p * Rational(coeff * poly(k));
        if (sqrtpi_pow != 0)
            r = r * to_bounded_float(ExactReal(1, sqrtpi_pow), w);
        return r.rounded(prec);
    }
};

/// c + sign * term at k, exact when possible.
inline SepValue affine_of_term(const Rational& c, int sign, const GammaTerm& t, const Rational& k, ProbKind kind,
                               mpfr_prec_t prec)
{
    if (t.exact_at(k))
        return detail::combine(c, sign, t.exact(k), kind, prec);
    BoundedFloat v = t.numeric(k, prec + 16);
    return SepValue::of_numeric((sign > 0 ? v : -v) + c, kind);
}

// ---------------------------------------------------------------------------
// Parameter rules of the distinguished 7F6 functions.

/// Offsets of the upper parameters u_ik and lower parameters b_ik from alpha.
struct ParamOffsets {
    std::array<Rational, 6> upper;
    std::array<Rational, 6> lower;
};

inline ParamOffsets param_offsets(long k)
{
    if (k < -1)
        throw DomainError("param_offsets: k must be >= -1");
    using detail::floor_div;
    long a = floor_div(k, 3), b = floor_div(k + 1, 3);
    long f4 = floor_div(k - 4, 5), f3 = floor_div(k - 3, 5), f2 = floor_div(k - 2, 5), f1 = floor_div(k - 1, 5);
    ParamOffsets p;
    p.upper = {make_rational(4 * a + 2 * b + 11, 6),
               make_rational(2 * a + 4 * b + 13, 6),
               make_rational(3 * f4 + 2 * f3 + 2 * f2 + 3 * f1 + 16, 5),
               make_rational(3 * f4 + 2 * f3 + f2 + 4 * f1 + 17, 5),
               make_rational(2 * f4 + 3 * f3 + f2 + 4 * f1 + 18, 5),
               make_rational(2 * f4 + 3 * f3 + f2 + 4 * f1 + 19, 5)};
    Rational t = make_rational(2 * k, 5);
    p.lower = {t + make_rational(23, 10), t + make_rational(5, 2),  t + make_rational(27, 10),
               t + make_rational(29, 10), t + make_rational(31, 10), Rational(k + 3)};
    return p;
}

/// Number of additional pFp-1 functions for k = -1..9.
inline long m_count(long k)
{
    static const long table[] = {3, 5, 5, 6, 6, 7, 9, 8, 10, 10, 10};
    if (k < -1 || k > 9)
        throw DomainError("m_count: k must lie in -1..9");
    return table[k + 1];
}

/// Hypergeometric-free factor G1 of Q = G1 * G2.
inline Rational g1_factor(long k, long alpha)
{
    if (alpha < 1)
        throw DomainError("g1_factor: alpha must be a positive integer");
    ParamOffsets p = param_offsets(k);
    auto n = static_cast<unsigned long>(alpha - 1);
    Rational r = pow_rational(make_rational(27, 64), alpha - 1);
    for (int i = 0; i < 6; ++i)
        r *= pochhammer(p.upper[i], n) / pochhammer(Rational(p.lower[i] + 1), n);
    return r;
}

// ---------------------------------------------------------------------------
// Finite-sum representation for integer alpha.

namespace detail {

inline std::array<Rational, 5> h_upper(const Rational& a)
{
    Rational h = a * make_rational(3, 2);
    return {h, a + make_rational(1, 2), h + make_rational(1, 2), h + make_rational(11, 8), 2 * a + make_rational(1, 2)};
}

inline std::array<Rational, 4> h_lower(const Rational& a)
{
    Rational h = a * make_rational(3, 2);
    return {h + make_rational(3, 8), h + make_rational(3, 4), h + make_rational(5, 4), 3 * a + 1};
}

}  // namespace detail

/// H(alpha, j): five-over-four Pochhammer ratio divided by j!.
inline Rational h_term(const Rational& alpha, unsigned long j)
{
    Rational num = 1, den = Rational(factorial(j));
    for (const auto& u : detail::h_upper(alpha))
        num *= pochhammer(u, j);
    for (const auto& l : detail::h_lower(alpha)) {
        Rational p = pochhammer(l, j);
        if (p == 0)
            throw PoleError("h_term: vanishing lower Pochhammer at alpha = " + alpha.get_str());
        den *= p;
    }
    return num / den;
}

/// H(alpha, 0..n) by the term ratio.
inline std::vector<Rational> h_terms(const Rational& alpha, unsigned long n)
{
    auto up = detail::h_upper(alpha);
    auto lo = detail::h_lower(alpha);
    std::vector<Rational> h{Rational(1)};
    for (unsigned long j = 0; j < n; ++j) {
        Rational r = 1;
        for (const auto& u : up)
            r *= u + static_cast<long>(j);
        Rational d = static_cast<long>(j + 1);
        for (const auto& l : lo)
            d *= l + static_cast<long>(j);
        if (d == 0)
            throw PoleError("h_terms: vanishing lower Pochhammer at alpha = " + alpha.get_str());
        h.push_back(h.back() * r / d);
    }
    return h;
}

/// Q(-alpha, alpha); exact for integer alpha.
inline SepValue q_at_neg_alpha(const Rational& alpha, mpfr_prec_t prec = 128)
{
    if (sgn(alpha) < 0)
        throw DomainError("q_at_neg_alpha: alpha must be nonnegative");
    if (is_integer(alpha)) {
        auto n = static_cast<unsigned long>(to_long(alpha));
        Rational r = pow_rational(make_rational(4, 27), to_long(alpha)) / 2;
        r *= pochhammer(make_rational(3, 4), n) * pochhammer(make_rational(5, 4), n);
        r /= pochhammer(make_rational(5, 6), n) * pochhammer(make_rational(7, 6), n);
        return SepValue::of_exact(ExactReal(r, 0), ProbKind::q_partial);
    }
    mpfr_prec_t w = prec + 32;
    BoundedFloat g = gamma_ratio_numeric({alpha + make_rational(3, 4), alpha + make_rational(5, 4),
                                          make_rational(5, 6), make_rational(7, 6)},
                                         {make_rational(3, 4), make_rational(5, 4), alpha + make_rational(5, 6),
                                          alpha + make_rational(7, 6)},
                                         w);
    BoundedFloat v = g * pow(make_rational(4, 27), alpha, w) * make_rational(1, 2);
    return SepValue::of_numeric(v.rounded(prec), ProbKind::q_partial);
}

/// Q(k, alpha) = Q(-alpha, alpha) * sum_{j=0}^{alpha+k} H(alpha, j) for integer alpha >= 0.
inline Rational q_integer_alpha(long k, long alpha)
{
    if (alpha < 0)
        throw DomainError("q_integer_alpha: alpha must be nonnegative");
    if (k < -alpha)
        throw DomainError("q_integer_alpha: k must be >= -alpha");
    Rational a(alpha);
    std::vector<Rational> h = h_terms(a, static_cast<unsigned long>(alpha + k));
    Rational s = 0;
    for (const auto& x : h)
        s += x;
    return q_at_neg_alpha(a).rational() * s;
}

// ---------------------------------------------------------------------------
// Successive differences Q(k+1, alpha) - Q(k, alpha).

namespace detail {

/// 3^(-3 alpha - 1) / (Gamma(alpha + 5/6) Gamma(alpha + 7/6)) for half-integer alpha >= 0.
inline ExactReal third_power_gamma_pair(const Rational& alpha)
{
    if (is_integer(alpha)) {
        long n = to_long(alpha);
        auto un = static_cast<unsigned long>(n);
        Rational r = pow_rational(3, -3 * n) /
                     (pochhammer(make_rational(5, 6), un) * pochhammer(make_rational(7, 6), un));
        return ExactReal(r, -2);
    }
    long n = to_long(Rational(alpha - make_rational(1, 2)));
    auto un = static_cast<unsigned long>(n);
    Rational r = pow_rational(3, -3 * n) /
                 (4 * pochhammer(make_rational(4, 3), un) * pochhammer(make_rational(5, 3), un));
    return ExactReal(r, -2);
}

inline void diff_gammas(const Rational& alpha, std::vector<LinGamma>& num, std::vector<LinGamma>& den)
{
    num = {{0, 3 * alpha + make_rational(3, 2)},
           {1, 2 * alpha + make_rational(3, 2)},
           {1, 3 * alpha + make_rational(3, 2)},
           {2, 5 * alpha + 2}};
    den = {{0, alpha + make_rational(1, 2)}, {1, alpha + 2}, {1, 4 * alpha + 2}, {2, 5 * alpha + make_rational(7, 2)}};
}

}  // namespace detail

/**
 * Exact Q(k+1, alpha) - Q(k, alpha) for half-integer alpha > 0 from the
 * gamma-ratio expression; coinciding poles in k are resolved as limits.
 */
inline ExactReal q_successive_diff_exact(const Rational& k, const Rational& alpha)
{
    if (!is_half_integer(alpha) || sgn(alpha) <= 0)
        throw DomainError("q_successive_diff_exact: alpha must be a positive half-integer");
    std::vector<LinGamma> num, den;
    detail::diff_gammas(alpha, num, den);
    ExactReal g = gamma_product_limit(num, den, k);
    Rational poly = alpha * (20 * alpha + 8 * k + 11) / 2;
    return ExactReal(poly, 1) * detail::third_power_gamma_pair(alpha) * g;
}

inline SepValue q_successive_diff(long k, const Rational& alpha, mpfr_prec_t prec = 128)
{
    if (sgn(alpha) < 0)
        throw DomainError("q_successive_diff: alpha must be nonnegative");
    if (alpha == 0)
        return SepValue::of_exact(ExactReal(0, 0), ProbKind::q_partial);
    Rational kk(k);
    std::vector<LinGamma> num, den;
    detail::diff_gammas(alpha, num, den);
    for (const auto& g : num)
        if (sgn(g.at(kk)) <= 0)
            throw PoleError("q_successive_diff: nonpositive gamma argument");
    for (const auto& g : den)
        if (sgn(g.at(kk)) <= 0)
            throw PoleError("q_successive_diff: nonpositive gamma argument");
    if (is_half_integer(alpha))
        return SepValue::of_exact(q_successive_diff_exact(kk, alpha), ProbKind::q_partial);
    mpfr_prec_t w = prec + 32;
    std::vector<Rational> n, d;
    for (const auto& g : num)
        n.push_back(g.at(kk));
    for (const auto& g : den)
        d.push_back(g.at(kk));
    d.push_back(alpha + make_rational(5, 6));
    d.push_back(alpha + make_rational(7, 6));
    BoundedFloat v = gamma_ratio_numeric(n, d, w) * pow(Rational(3), Rational(-3 * alpha - 1), w);
    v = v * sqrt(BoundedFloat::pi(w)) * Rational(alpha * (20 * alpha + 8 * kk + 11) / 2);
    return SepValue::of_numeric(v.rounded(prec), ProbKind::q_partial);
}

/**
 * Q(k, alpha) for integer alpha at any integer k: the finite sum for
 * k >= -alpha, otherwise telescoped downward with limit-resolved differences.
 */
inline Rational q_integer_extended(long k, long alpha)
{
    if (k >= -alpha)
        return q_integer_alpha(k, alpha);
    if (alpha == 0)
        throw DomainError("q_integer_extended: alpha = 0 has no k < 0 continuation");
    Rational q = q_integer_alpha(-alpha, alpha);
    Rational a(alpha);
    for (long j = -alpha - 1; j >= k; --j) {
        ExactReal d = q_successive_diff_exact(Rational(j), a);
        if (!d.is_rational())
            throw DomainError("q_integer_extended: irrational difference");
        q -= d.coeff;
    }
    return q;
}

// ---------------------------------------------------------------------------
// Master formula.

inline HyperSeries master_series(const Rational& k, const Rational& alpha)
{
    Rational h = alpha * make_rational(5, 2) + k;
    return HyperSeries({Rational(1), h + 1, h + make_rational(3, 2), 2 * alpha + k + make_rational(3, 2),
                        3 * alpha + k + make_rational(3, 2), h + make_rational(19, 8)},
                       {alpha + k + 2, 4 * alpha + k + 2, h + make_rational(7, 4), h + make_rational(9, 4),
                        h + make_rational(11, 8)},
                       Rational(1));
}

/// Prefactor of the 6F5 in the master formula (equal to the successive difference at k).
inline BoundedFloat master_prefactor(const Rational& k, const Rational& alpha, mpfr_prec_t prec)
{
    std::vector<Rational> num = {5 * alpha + 2 * k + 2, 3 * alpha + k + make_rational(3, 2),
                                 2 * alpha + k + make_rational(3, 2)};
    std::vector<Rational> den = {5 * alpha + 2 * k + make_rational(7, 2), alpha + k + 2, 4 * alpha + k + 2};
    for (const auto& x : num)
        if (sgn(x) <= 0)
            throw PoleError("q_master: nonpositive gamma argument " + x.get_str());
    for (const auto& x : den)
        if (sgn(x) <= 0)
            throw PoleError("q_master: nonpositive gamma argument " + x.get_str());
    Rational poly = alpha * (20 * alpha + 8 * k + 11) / 4;
    if (is_half_integer(alpha))
        return to_bounded_float(ExactReal(poly, -1) * gamma_ratio(num, den), prec);
    mpfr_prec_t w = prec + 32;
    BoundedFloat g = gamma_ratio_numeric(num, den, w) * poly;
    return (g / sqrt(BoundedFloat::pi(w))).rounded(prec);
}

/// Q(k, alpha) = 1/2 - prefactor * 6F5(...; 1), certified.
inline SepValue q_master(long k, const Rational& alpha, mpfr_prec_t prec = 128)
{
    if (sgn(alpha) <= 0)
        throw DomainError("q_master: alpha must be positive");
    Rational kk(k);
    mpfr_prec_t w = prec + 32;
    BoundedFloat pre = master_prefactor(kk, alpha, w);
    BoundedFloat f = pfq_numeric(master_series(kk, alpha), w);
    BoundedFloat q = make_rational(1, 2) - pre * f;
    return SepValue::of_numeric(q.rounded(prec), ProbKind::q_partial);
}

// ---------------------------------------------------------------------------
// Alpha-specific closed forms.

namespace detail {

inline Rational half() { return make_rational(1, 2); }

/// Subtracted term T with Q(k, alpha) = 1/2 - T for alpha in {1/2, 1, 3/2, 2}.
inline GammaTerm q_closed_term(const Rational& alpha)
{
    GammaTerm t;
    if (alpha == half()) {
        t.sqrtpi_pow = -1;
        t.num = {{2, make_rational(9, 2)}};
        t.den = {{2, 5}};
    } else if (alpha == 1) {
        t.pow2_slope = 2;
        t.pow2_offset = 6;
        t.sqrtpi_pow = -2;
        t.num = {{1, make_rational(7, 2)}, {1, make_rational(7, 2)}, {1, make_rational(9, 2)}};
        t.den = {{1, 5}, {2, make_rational(13, 2)}};
    } else if (alpha == make_rational(3, 2)) {
        t.coeff = make_rational(1, 4);
        t.poly = RatPoly(std::vector<Rational>{31, 6});
        t.sqrtpi_pow = -1;
        // 1 / ((k + 5)(k + 6)) = Gamma(k + 5) / Gamma(k + 7)
        t.num = {{2, make_rational(19, 2)}, {1, 5}};
        t.den = {{2, 9}, {1, 7}};
    } else if (alpha == 2) {
        t.pow2_slope = 2;
        t.pow2_offset = 12;
        t.poly = RatPoly::linear(6);
        t.sqrtpi_pow = -2;
        t.num = {{1, make_rational(11, 2)}, {1, make_rational(13, 2)}, {1, make_rational(15, 2)}};
        t.den = {{1, 9}, {2, make_rational(23, 2)}};
    } else {
        throw DomainError("no closed form for alpha = " + alpha.get_str());
    }
    return t;
}

/// Subtracted term F with P(k, alpha) = 1 - F for alpha in {1/2, 1, 2}.
inline GammaTerm p_closed_term(const Rational& alpha)
{
    GammaTerm t;
    t.pow2_slope = 2;
    t.sqrtpi_pow = -1;
    if (alpha == half()) {
        t.pow2_offset = 2;
        t.poly = RatPoly(std::vector<Rational>{15, 8});
        t.num = {{1, 2}, {2, make_rational(9, 2)}};
        t.den = {{3, 7}};
    } else if (alpha == 1) {
        t.coeff = 3;
        t.pow2_offset = 6;
        t.poly = RatPoly(std::vector<Rational>{25, 14, 2});
        t.num = {{1, make_rational(7, 2)}, {2, 9}};
        t.den = {{3, 13}};
    } else if (alpha == 2) {
        t.coeff = make_rational(1, 3);
        t.pow2_offset = 12;
        t.poly = RatPoly(std::vector<Rational>{2430, 1452, 355, 42, 2});
        t.num = {{1, make_rational(13, 2)}, {2, 15}};
        t.den = {{3, 22}};
    } else {
        throw DomainError("no total-probability closed form for alpha = " + alpha.get_str());
    }
    return t;
}

inline BoundedFloat rgamma3f2_unit(const std::vector<Rational>& up, const std::vector<Rational>& lo, mpfr_prec_t prec)
{
    return pfq_regularized(HyperSeries(up, lo, Rational(1)), prec);
}

}  // namespace detail

/**
 * 1/2 - 2^(-5 alpha - 2k - 7/2) sgn(alpha) Gamma(2k + 5 alpha + 2)
 *   * 3F2~(1, h + 1, h + 3/2; h + 7/4, h + 9/4; 1),  h = k + 5 alpha / 2.
 */
inline BoundedFloat q_generalized(const Rational& k, const Rational& alpha, mpfr_prec_t prec)
{
    if (alpha == 0)
        throw DomainError("q_generalized: alpha must be nonzero");
    mpfr_prec_t w = prec + 32;
    Rational h = k + alpha * make_rational(5, 2);
    BoundedFloat f = detail::rgamma3f2_unit({1, h + 1, h + make_rational(3, 2)},
                                            {h + make_rational(7, 4), h + make_rational(9, 4)}, w);
    BoundedFloat t = pow(Rational(2), Rational(-5 * alpha - 2 * k - make_rational(7, 2)), w) *
                     gamma(Rational(2 * k + 5 * alpha + 2), w) * f;
    if (sgn(alpha) < 0)
        t = -t;
    return (make_rational(1, 2) - t).rounded(prec);
}

/// Q(k, 3/4).
inline BoundedFloat q_three_quarters(const Rational& k, mpfr_prec_t prec)
{
    mpfr_prec_t w = prec + 32;
    BoundedFloat f = detail::rgamma3f2_unit({1, k + make_rational(23, 8), k + make_rational(27, 8)},
                                            {k + make_rational(29, 8), k + make_rational(33, 8)}, w);
    BoundedFloat t1 = pow(Rational(2), Rational(-2 * k - make_rational(29, 4)), w) *
                      gamma(Rational(2 * k + make_rational(23, 4)), w) * f;
    BoundedFloat t2 = gamma_ratio_numeric({Rational(2 * k + make_rational(23, 4))},
                                          {Rational(2 * k + make_rational(21, 4))}, w) /
                      (sqrt(BoundedFloat::pi(w)) * Rational(2 * (k + 3)));
    return (make_rational(1, 2) - t1 - t2).rounded(prec);
}

/// Catalog alphas and the k ranges on which each closed form was matched.
struct ClosedFormEntry {
    Rational alpha;
    long k_min;
    long k_max;
};

inline const std::vector<ClosedFormEntry>& closed_form_catalog()
{
    static const std::vector<ClosedFormEntry> c = {
        {make_rational(-1, 2), 1, 9}, {make_rational(-1, 4), 0, 9}, {make_rational(1, 4), -1, 9},
        {make_rational(1, 2), -1, 9}, {make_rational(3, 4), -1, 9}, {Rational(1), -2, 9},
        {make_rational(3, 2), -1, 9}, {Rational(2), -2, 10}};
    return c;
}

inline std::optional<ClosedFormEntry> catalog_entry(const Rational& alpha)
{
    for (const auto& e : closed_form_catalog())
        if (e.alpha == alpha)
            return e;
    return std::nullopt;
}

/// Q(k, alpha) from the alpha-specific closed form; flags k outside the matched range.
inline SepValue q_closed_form(long k, const Rational& alpha, mpfr_prec_t prec = 128)
{
    auto entry = catalog_entry(alpha);
    if (!entry)
        throw DomainError("q_closed_form: alpha = " + alpha.get_str() + " is not in the catalog");
    Rational kk(k);
    SepValue v;
    if (alpha == make_rational(-1, 2)) {
        if (k == -1 || k == 0) {
            v = SepValue::of_exact(ExactReal(make_rational(1, 2), 0), ProbKind::q_partial);
            v.flag = kFlagOverride;
            return v;
        }
        GammaTerm t;
        t.sqrtpi_pow = -1;
        t.num = {{2, make_rational(-1, 2)}};
        t.den = {{2, 0}};
        v = affine_of_term(make_rational(1, 2), +1, t, kk, ProbKind::q_partial, prec);
    } else if (alpha == make_rational(-1, 4) || alpha == make_rational(1, 4)) {
        v = SepValue::of_numeric(q_generalized(kk, alpha, prec), ProbKind::q_partial);
    } else if (alpha == make_rational(3, 4)) {
        v = SepValue::of_numeric(q_three_quarters(kk, prec), ProbKind::q_partial);
    } else {
        v = affine_of_term(make_rational(1, 2), -1, detail::q_closed_term(alpha), kk, ProbKind::q_partial, prec);
    }
    if (k < entry->k_min || k > entry->k_max)
        v.flag = kFlagOutsideRange;
    return v;
}

/// Total separability probability P(k, alpha) for alpha in {1/2, 1, 2}; k may be any rational.
inline SepValue p_total_closed_at(const Rational& k, const Rational& alpha, mpfr_prec_t prec = 128)
{
    return affine_of_term(Rational(1), -1, detail::p_closed_term(alpha), k, ProbKind::p_total, prec);
}

inline SepValue p_total_closed(long k, const Rational& alpha, mpfr_prec_t prec = 128)
{
    return p_total_closed_at(Rational(k), alpha, prec);
}

/// Q(k, alpha) by the preferred route: finite sum, closed form, else master formula.
inline SepValue q_value(long k, const Rational& alpha, mpfr_prec_t prec = 128)
{
    if (is_integer(alpha) && sgn(alpha) >= 0) {
        long a = to_long(alpha);
        if (k >= -a)
            return SepValue::of_exact(ExactReal(q_integer_alpha(k, a), 0), ProbKind::q_partial);
        if (a > 0)
            return SepValue::of_exact(ExactReal(q_integer_extended(k, a), 0), ProbKind::q_partial);
    }
    if (catalog_entry(alpha))
        return q_closed_form(k, alpha, prec);
    return q_master(k, alpha, prec);
}

/// P(k, alpha) - Q(k, alpha): the share with |rho| > |rho^PT| >= 0.
inline SepValue complement_prob(long k, const Rational& alpha, mpfr_prec_t prec = 128)
{
    SepValue p = p_total_closed(k, alpha, prec);
    SepValue q = q_value(k, alpha, prec);
    if (p.is_rational() && q.is_rational())
        return SepValue::of_exact(ExactReal(p.rational() - q.rational(), 0), ProbKind::complement);
    mpfr_prec_t w = prec + 16;
    return SepValue::of_numeric((p.approx(w) - q.approx(w)).rounded(prec), ProbKind::complement);
}

/// G(k, alpha) = 4^k Gamma(k + 3 alpha + 3/2) Gamma(2k + 5 alpha + 2) / (sqrt(pi) Gamma(3k + 10 alpha + 2)).
inline GammaTerm p_envelope_term(const Rational& alpha)
{
    GammaTerm t;
    t.pow2_slope = 2;
    t.sqrtpi_pow = -1;
    t.num = {{1, 3 * alpha + make_rational(3, 2)}, {2, 5 * alpha + 2}};
    t.den = {{3, 10 * alpha + 2}};
    return t;
}

inline SepValue p_envelope(long k, const Rational& alpha, mpfr_prec_t prec = 128)
{
    GammaTerm t = p_envelope_term(alpha);
    Rational kk(k);
    for (const auto& g : t.num)
        if (sgn(g.at(kk)) <= 0)
            throw PoleError("p_envelope: nonpositive gamma argument");
    if (sgn(t.den[0].at(kk)) <= 0)
        throw PoleError("p_envelope: nonpositive gamma argument");
    if (t.exact_at(kk))
        return SepValue::of_exact(t.exact(kk), ProbKind::p_total);
    return SepValue::of_numeric(t.numeric(kk, prec), ProbKind::p_total);
}

// ---------------------------------------------------------------------------
// Root window, boundary values and limits.

/**
 * Consecutive roots of Q(k, alpha) run from k_start = -alpha - 1 down to
 * k_end; count is the closed-form root count. For half-integer alpha the
 * parity factor (-1)^alpha is imaginary and the real parts are reported.
 */
struct RootWindow {
    Rational k_start;
    Rational k_end;
    Rational count;
    Rational k_end_imag;
    Rational count_imag;
    bool complex_parity = false;
};

inline RootWindow root_window(const Rational& alpha)
{
    if (sgn(alpha) < 0 || !is_half_integer(alpha))
        throw DomainError("root_window: alpha must be a nonnegative integer or half-integer");
    RootWindow w;
    w.k_start = -alpha - 1;
    Rational m = 10 * alpha + 1;
    if (is_integer(alpha)) {
        long s = to_long(alpha) % 2 ? -1 : 1;
        // -1/4 s (s m - 1) with s^2 = 1
        w.k_end = -(m - s) / 4;
        w.count = -alpha + (m - s) / 4 - 1;
    } else {
        // s = +-i, s^2 = -1
        long n = to_long(Rational(alpha - make_rational(1, 2)));
        long si = n % 2 ? -1 : 1;
        w.complex_parity = true;
        w.k_end = m / 4;
        w.k_end_imag = make_rational(si, 4);
        w.count = -alpha - m / 4 - 1;
        w.count_imag = make_rational(-si, 4);
    }
    return w;
}

/// Integer k in [k_end, k_start] at which the exact Q(k, alpha) vanishes, scanning downward.
inline std::vector<long> located_roots(long alpha, long scan_below = 3)
{
    RootWindow w = root_window(Rational(alpha));
    std::vector<long> roots;
    long lo = to_long(w.k_end) - scan_below;
    for (long k = to_long(w.k_start); k >= lo; --k)
        if (q_integer_extended(k, alpha) == 0)
            roots.push_back(k);
    return roots;
}

/// Values one step below the root window for integer alpha >= 1.
struct BoundaryValues {
    Rational k;
    Rational p_boundary;
    Rational q_real;
    BoundedFloat q_imag;
};

inline BoundaryValues boundary_values(long alpha, mpfr_prec_t prec = 128)
{
    if (alpha < 1)
        throw DomainError("boundary_values: alpha must be a positive integer");
    RootWindow w = root_window(Rational(alpha));
    Rational a(alpha);
    BoundaryValues b{w.k_end - 1, 0, 0, BoundedFloat::from_rational(0, prec)};
    // sin(pi a / 2) and cos(pi a / 2)
    long r = alpha % 4;
    long s = r == 1 ? 1 : r == 3 ? -1 : 0;
    long c = r == 0 ? 1 : r == 2 ? -1 : 0;
    b.p_boundary = (3 * a * (5 * a + 2) - 1) * s / (4 * (a + 1)) + c;
    b.q_real = alpha % 2 ? make_rational(-1, 4) : make_rational(1, 2);
    long sg = alpha % 2 ? -1 : 1;
    Rational num = -3 * sg * (20 * (sg + 3) * a + 5 * sg + 7);
    Rational den = 4 * (400 * a * a + 80 * a + 3);
    mpfr_prec_t wp = prec + 16;
    b.q_imag = (BoundedFloat::from_rational(num / den, wp) / BoundedFloat::pi(wp)).rounded(prec);
    return b;
}

enum class LimitCase {
    k_neg2_neg4a,    ///< k -> -2 - 4 alpha, P
    k_neg1_neg4a,    ///< k -> -1 - 4 alpha, P
    k_neg2_nega,     ///< k = -2 - alpha, P
    k_neg1_neg5a2,   ///< k -> -1 - 5 alpha / 2, P by alpha mod 4
    k_neg3h_neg5a2,  ///< k -> -3/2 - 5 alpha / 2, P
    k_negh_neg5a2,   ///< k -> -1/2 - 5 alpha / 2, P (even) or Q (odd)
    k_neg5a2         ///< k -> -5 alpha / 2, P (odd) or Q (even)
};

inline const std::vector<std::pair<std::string, LimitCase>>& limit_case_names()
{
    static const std::vector<std::pair<std::string, LimitCase>> n = {
        {"k=-2-4a", LimitCase::k_neg2_neg4a},     {"k=-1-4a", LimitCase::k_neg1_neg4a},
        {"k=-2-a", LimitCase::k_neg2_nega},       {"k=-1-5a/2", LimitCase::k_neg1_neg5a2},
        {"k=-3/2-5a/2", LimitCase::k_neg3h_neg5a2}, {"k=-1/2-5a/2", LimitCase::k_negh_neg5a2},
        {"k=-5a/2", LimitCase::k_neg5a2}};
    return n;
}

enum class LimitKind { plus_infinity, minus_infinity, plus_one, minus_one, finite };

inline std::string to_string(LimitKind k)
{
    switch (k) {
    case LimitKind::plus_infinity: return "+inf";
    case LimitKind::minus_infinity: return "-inf";
    case LimitKind::plus_one: return "+1";
    case LimitKind::minus_one: return "-1";
    case LimitKind::finite: return "finite";
    }
    return "?";
}

struct LimitValue {
    Rational k;
    LimitKind kind = LimitKind::finite;
    std::optional<SepValue> value;
};

namespace detail {

inline long alpha_parity_integer(const Rational& alpha)
{
    if (!is_integer(alpha) || sgn(alpha) <= 0)
        throw DomainError("limit_values: this case needs a positive integer alpha");
    return to_long(alpha);
}

inline BoundedFloat lerch_combination(const Rational& base, const std::vector<std::pair<long, Rational>>& terms,
                                      mpfr_prec_t w)
{
    BoundedFloat s = BoundedFloat::from_rational(0, w);
    for (const auto& [c, off] : terms)
        s = s + lerch_phi_neg1(base + off, w) * Rational(c);
    return s;
}

}  // namespace detail

inline LimitValue limit_values(const Rational& alpha, LimitCase c, mpfr_prec_t prec = 128)
{
    LimitValue r;
    mpfr_prec_t w = prec + 32;
    auto finite = [&](SepValue v) {
        r.kind = LimitKind::finite;
        r.value = std::move(v);
    };
    switch (c) {
    case LimitCase::k_neg2_neg4a: {
        r.k = -2 - 4 * alpha;
        GammaTerm t;
        t.coeff = 3 * (5 * alpha + 2) / (3 * alpha + 2);
        t.pow2_offset = 4 * alpha - 1;
        t.sqrtpi_pow = -1;
        t.num = {{0, 2 * alpha + make_rational(3, 2)}};
        t.den = {{0, 2 * alpha + 2}};
        finite(affine_of_term(make_rational(1, 4), +1, t, Rational(0), ProbKind::p_total, prec));
        break;
    }
    case LimitCase::k_neg1_neg4a: {
        r.k = -1 - 4 * alpha;
        GammaTerm t;
        t.coeff = make_rational(3, 4);
        t.pow2_offset = 4 * alpha;
        t.sqrtpi_pow = -1;
        t.num = {{0, 2 * alpha + make_rational(1, 2)}};
        t.den = {{0, 2 * alpha + 1}};
        finite(affine_of_term(make_rational(1, 4), +1, t, Rational(0), ProbKind::p_total, prec));
        break;
    }
    case LimitCase::k_neg2_nega:
        r.k = -2 - alpha;
        finite(SepValue::of_exact(ExactReal(0, 0), ProbKind::p_total));
        break;
    case LimitCase::k_neg1_neg5a2: {
        long a = detail::alpha_parity_integer(alpha);
        r.k = -1 - alpha * make_rational(5, 2);
        static const LimitKind table[] = {LimitKind::plus_one, LimitKind::minus_infinity, LimitKind::minus_one,
                                          LimitKind::plus_infinity};
        r.kind = table[a % 4];
        break;
    }
    case LimitCase::k_neg3h_neg5a2: {
        long a = detail::alpha_parity_integer(alpha);
        r.k = make_rational(-3, 2) - alpha * make_rational(5, 2);
        if (a % 2 == 0) {
            r.kind = a % 4 == 2 ? LimitKind::minus_infinity : LimitKind::plus_infinity;
        } else {
            // -i i^a = (-1)^((a - 1)/2) for odd a
            long s = ((a - 1) / 2) % 2 ? -1 : 1;
            Rational v = s * (3 * alpha * (5 * alpha + 2) - 1) / (4 * (alpha + 1));
            finite(SepValue::of_exact(ExactReal(v, 0), ProbKind::p_total));
        }
        break;
    }
    case LimitCase::k_negh_neg5a2: {
        long a = detail::alpha_parity_integer(alpha);
        r.k = make_rational(-1, 2) - alpha * make_rational(5, 2);
        Rational b = alpha / 2;
        if (a % 2 == 0) {
            long s = (a / 2) % 2 ? -1 : 1;
            BoundedFloat l = detail::lerch_combination(
                b, {{3, make_rational(1, 10)}, {5, make_rational(1, 6)}, {-3, make_rational(3, 10)},
                    {-3, make_rational(7, 10)}, {5, make_rational(5, 6)}, {3, make_rational(9, 10)},
                    {-2, make_rational(1, 2)}},
                w);
            BoundedFloat v = l * Rational(s) / (BoundedFloat::pi(w) * Rational(15));
            finite(SepValue::of_numeric(v.rounded(prec), ProbKind::p_total));
        } else {
            BoundedFloat g = gamma_ratio_numeric(
                {b + make_rational(7, 10), b + make_rational(9, 10), b + make_rational(11, 10), b + make_rational(13, 10),
                 (alpha + 1) / 2},
                {b + make_rational(3, 5), b + make_rational(4, 5), b + 1, b + make_rational(6, 5), b + make_rational(7, 5)},
                w);
            BoundedFloat v = g * sqrt(BoundedFloat::pi(w) / Rational(5)) * make_rational(3, 8);
            finite(SepValue::of_numeric(v.rounded(prec), ProbKind::q_partial));
        }
        break;
    }
    case LimitCase::k_neg5a2: {
        long a = detail::alpha_parity_integer(alpha);
        r.k = -alpha * make_rational(5, 2);
        Rational b = alpha / 2;
        if (a % 2 == 1) {
            long s = ((a - 1) / 2) % 2 ? -1 : 1;
            BoundedFloat l = detail::lerch_combination(
                b, {{5, make_rational(1, 3)}, {3, make_rational(2, 5)}, {-3, make_rational(3, 5)},
                    {-5, make_rational(2, 3)}, {3, make_rational(4, 5)}, {2, Rational(1)}, {3, make_rational(6, 5)}},
                w);
            Rational q = alpha * (5 * alpha + 2);
            BoundedFloat inner = l * q + Rational(-40 * alpha + 12);
            BoundedFloat v = inner * Rational(s) / (BoundedFloat::pi(w) * Rational(15 * q));
            finite(SepValue::of_numeric(v.rounded(prec), ProbKind::p_total));
        } else {
            BoundedFloat g = gamma_ratio_numeric(
                {alpha * make_rational(5, 2) + 2},
                {b + make_rational(7, 10), b + make_rational(9, 10), b + make_rational(11, 10), b + make_rational(13, 10),
                 (alpha + 3) / 2},
                w);
            BoundedFloat pi52 = pow(BoundedFloat::pi(w), make_rational(5, 2));
            BoundedFloat v = g * pi52 * pow(Rational(5), Rational(-alpha * make_rational(5, 2) - 2), w) *
                             Rational(3 * (35 * alpha + 22) / 88);
            finite(SepValue::of_numeric(v.rounded(prec), ProbKind::q_partial));
        }
        break;
    }
    }
    return r;
}

// ---------------------------------------------------------------------------
// Conjectured 5F4 identity.

inline HyperSeries half_sum_series(const Rational& alpha)
{
    Rational h = alpha * make_rational(3, 2);
    return HyperSeries({h, alpha + make_rational(1, 2), h + make_rational(1, 2), h + make_rational(11, 8),
                        2 * alpha + make_rational(1, 2)},
                       {h + make_rational(3, 8), h + make_rational(3, 4), h + make_rational(5, 4), 3 * alpha + 1},
                       Rational(1));
}

struct IdentityCheck {
    BoundedFloat lhs;
    BoundedFloat rhs;
    BoundedFloat residual;          ///< lhs - rhs with combined bound
    bool holds = false;             ///< residual enclosure contains 0
    std::optional<BoundedFloat> hyper2;  ///< Q(-a,a) sum_j H(a,j) assembled; alpha > 0
    bool hyper2_half = false;       ///< hyper2 enclosure contains 1/2
};

inline IdentityCheck half_sum_identity_check(const Rational& alpha, mpfr_prec_t prec = 256)
{
    if (alpha <= make_rational(-1, 8))
        throw DomainError("half_sum_identity_check: alpha must exceed -1/8");
    mpfr_prec_t w = prec + 32;
    BoundedFloat lhs = pfq_numeric(half_sum_series(alpha), w);
    BoundedFloat g = gamma_ratio_numeric({alpha + make_rational(5, 6), alpha + make_rational(7, 6)},
                                         {alpha + make_rational(3, 4), alpha + make_rational(5, 4)}, w);
    BoundedFloat rhs = g * pow(make_rational(27, 4), alpha, w) * Rational(3) /
                       (sqrt(BoundedFloat::from_rational(2, w)) * Rational(2));
    IdentityCheck r{lhs.rounded(prec), rhs.rounded(prec), (lhs - rhs).rounded(prec)};
    r.holds = r.residual.contains(0);
    if (sgn(alpha) > 0) {
        BoundedFloat pre = gamma_ratio_numeric({2 * alpha + make_rational(3, 2)},
                                               {alpha + make_rational(5, 6), alpha + make_rational(7, 6)}, w) *
                           sqrt(BoundedFloat::pi(w)) * pow(Rational(3), Rational(-3 * alpha - 1), w);
        r.hyper2 = (pre * lhs).rounded(prec);
        r.hyper2_half = r.hyper2->contains(make_rational(1, 2));
    }
    return r;
}

// ---------------------------------------------------------------------------
// Concise single-sum representations Q(k, alpha) = sum_i f_k(alpha + i).

/// base^(slope x + offset)
struct PowFactor {
    Rational base;
    long slope;
    Rational offset;
};

/// Gamma(slope x + offset) with a positive integer slope.
struct GammaFactor {
    long slope;
    Rational offset;
};

/// Hypergeometric term in x: coeff pi^m sqrt(root) prod powers * num(x)/den(x) * gamma ratio.
struct HyperTerm {
    Rational coeff = 1;
    long pi_pow = 0;
    Rational root = 1;
    std::vector<PowFactor> powers;
    RatPoly poly_num = RatPoly(1);
    RatPoly poly_den = RatPoly(1);
    std::vector<GammaFactor> gnum, gden;

    BoundedFloat value(const Rational& x, mpfr_prec_t prec) const
    {
        mpfr_prec_t w = prec + 32;
        std::vector<Rational> n, d;
        for (const auto& g : gnum)
            n.push_back(g.slope * x + g.offset);
        for (const auto& g : gden)
            d.push_back(g.slope * x + g.offset);
        BoundedFloat v = gamma_ratio_numeric(n, d, w) * Rational(coeff * poly_num(x) / poly_den(x));
        for (const auto& p : powers)
            v = v * pow(p.base, Rational(p.slope * x + p.offset), w);
        for (long i = 0; i < std::labs(pi_pow); ++i)
            v = pi_pow > 0 ? v * BoundedFloat::pi(w) : v / BoundedFloat::pi(w);
        if (root != 1)
            v = v * sqrt(BoundedFloat::from_rational(root, w));
        return v.rounded(prec);
    }

    /// Series in i with t_i = f(x0 + i) / f(x0).
    RatioSeries ratio_series(const Rational& x0) const
    {
        RatioSeries s;
        s.scale = 1;
        for (const auto& p : powers)
            s.scale *= pow_rational(p.base, p.slope);
        RatPoly num = poly_num.shift(x0 + 1) * poly_den.shift(x0);
        RatPoly den = poly_num.shift(x0) * poly_den.shift(x0 + 1);
        for (const auto& g : gnum)
            for (long m = 0; m < g.slope; ++m)
                num = num * RatPoly(std::vector<Rational>{g.slope * x0 + g.offset + m, Rational(g.slope)});
        for (const auto& g : gden)
            for (long m = 0; m < g.slope; ++m)
                den = den * RatPoly(std::vector<Rational>{g.slope * x0 + g.offset + m, Rational(g.slope)});
        s.extra_num = num;
        s.extra_den = den;
        return s;
    }
};

namespace detail {

inline RatPoly poly_from_ints(const std::vector<long>& ascending)
{
    std::vector<Rational> c;
    for (long v : ascending)
        c.emplace_back(v);
    return RatPoly(c);
}

}  // namespace detail

/// Recurrence inhomogeneity polynomials shared with the concise summands.
inline RatPoly concise_poly(long k)
{
    using detail::poly_from_ints;
    switch (k) {
    case -1: return poly_from_ints({54, 938, 5645, 12625, 9250});
    case 0: return poly_from_ints({63000, 410694, 1042015, 1289125, 779750, 185000});
    case 1: return poly_from_ints({246960, 1284280, 2724024, 3013197, 1830820, 578300, 74000});
    case 3: return poly_from_ints({134548128, 471120306, 698007782, 566336789, 271168745, 76382750, 11666000, 740000});
    default: throw DomainError("concise_poly: k must be -1, 0, 1 or 3");
    }
}

inline HyperTerm concise_term(long k)
{
    HyperTerm t;
    auto r = [](long n, long d) { return make_rational(n, d); };
    switch (k) {
    case -1:
        t.pi_pow = 1;
        t.powers = {{Rational(5), -5, Rational(-4)}, {Rational(16), -1, Rational(-1)}, {Rational(27), 1, Rational(0)}};
        t.poly_num = concise_poly(-1);
        t.gnum = {{1, r(1, 6)}, {1, r(5, 6)}, {5, Rational(1)}};
        t.gden = {{1, r(9, 10)}, {1, Rational(1)}, {1, r(11, 10)}, {1, r(13, 10)}, {1, r(17, 10)}, {2, Rational(2)}};
        break;
    case 0:
        t.coeff = r(1, 6);
        t.powers = {{Rational(2), -4, Rational(-6)}};
        t.poly_num = concise_poly(0);
        t.gnum = {{3, r(5, 2)}, {5, Rational(2)}};
        t.gden = {{1, Rational(1)}, {2, Rational(3)}, {5, r(13, 2)}};
        break;
    case 1:
        t.coeff = r(9, 1000000);
        t.pi_pow = 1;
        t.powers = {{Rational(27), 1, Rational(0)}, {Rational(50000), -1, Rational(0)}};
        t.poly_num = RatPoly(std::vector<Rational>{1, 5}) * RatPoly(std::vector<Rational>{2, 5}) *
                     RatPoly(std::vector<Rational>{3, 5}) * concise_poly(1);
        t.gnum = {{5, Rational(0)}, {1, r(5, 6)}, {1, r(7, 6)}};
        t.gden = {{1, Rational(0)}, {1, r(17, 10)}, {1, r(19, 10)}, {1, r(21, 10)}, {1, r(23, 10)}, {2, Rational(5)}};
        break;
    case 3:
        t.coeff = r(1, 625);
        t.pi_pow = -1;
        t.root = r(1, 5);
        t.powers = {{Rational(3), 3, Rational(4)}, {Rational(4), -2, Rational(-5)}};
        t.poly_num = RatPoly(std::vector<Rational>{5, 2}) * concise_poly(3);
        t.poly_den = RatPoly::linear(4);
        t.gnum = {{1, r(8, 5)}, {1, r(9, 5)}, {1, r(11, 6)}, {1, r(13, 6)}, {1, r(11, 5)}, {1, r(12, 5)}};
        t.gden = {{1, r(27, 10)}, {1, r(29, 10)}, {1, r(31, 10)}, {1, r(33, 10)}, {2, Rational(7)}};
        break;
    default: throw DomainError("concise sums exist for k in {-1, 0, 1, 3}");
    }
    return t;
}

/// sum_{i >= 0} f_k(alpha + i) with a certified tail below tol.
inline SepValue q_concise_sum(long k, const Rational& alpha, double tol = 1e-30)
{
    if (!(tol > 0))
        throw DomainError("q_concise_sum: tol must be positive");
    HyperTerm t = concise_term(k);
    long bits = static_cast<long>(std::ceil(-std::log2(tol))) + 24;
    auto prec = static_cast<mpfr_prec_t>(std::max(64L, bits));
    mpfr_prec_t w = prec + 32;
    BoundedFloat f0 = t.value(alpha, w);
    BoundedFloat s = sum_certified(t.ratio_series(alpha), w).value;
    return SepValue::of_numeric((f0 * s).rounded(prec), ProbKind::q_partial);
}

// ---------------------------------------------------------------------------
// Further exact and numeric relations.

/// Leading coefficients C_1..C_7 of the monic total-probability polynomials.
inline Rational leading_coeffs(int order, long i)
{
    if (i < 1)
        throw DomainError("leading_coeffs: i must be positive");
    Rational I(i);
    auto horner = [&](const std::vector<const char*>& desc) {
        Rational v = 0;
        for (const char* c : desc)
            v = v * I + Rational(Integer(c));
        return v;
    };
    Rational p2i = pow_rational(2, -i);
    Rational fact_i = Rational(factorial(static_cast<unsigned long>(i)));
    Rational fact_im1 = Rational(factorial(static_cast<unsigned long>(i - 1)));
    auto p17 = [&](long s) { return pow_rational(17, i - s); };
    switch (order) {
    case 1: return pow_rational(make_rational(17, 2), i) / fact_i;
    case 2: return p2i * pow_rational(2, -2) * p17(2) * (1109 - 497 * I) / (3 * fact_im1);
    case 3:
        return p2i * pow_rational(2, -5) * p17(4) * horner({"247009", "-1370262", "3942323", "-11308734"}) /
               (9 * fact_im1);
    case 4:
        return -p2i * pow_rational(2, -7) * p17(6) * (I - 1) * I / (405 * fact_i) *
               horner({"613817365", "-5492491130", "30016283027", "-173872269670", "542508998592"});
    case 5:
        return p2i * pow_rational(2, -11) * p17(8) * (I - 1) * I / (1215 * fact_i) *
               horner({"305067230405", "-4403156498055", "38051293414691", "-325978342903557",
                       "2137571940201488", "-8722204904328012", "13657232612174832"});
    case 6:
        return -p2i * pow_rational(2, -13) * p17(10) * (I - 2) * (I - 1) * I / (25515 * fact_i) *
               horner({"212265778915799", "-4033760477145378", "46257531538470350", "-526319720165886192",
                       "5002806671861237555", "-35895786322816308558", "169446873953910154824",
                       "-385892347895176978944"});
    case 7:
        return p2i * pow_rational(2, -16) * p17(12) * (I - 2) * (I - 1) * I / (1148175 * fact_i) *
               horner({"527480460605760515", "-14061542253335879085", "216128338841103270330",
                       "-3070915881213672409050", "39074939804872696010811", "-414647891239558549971645",
                       "3466800379462987766973880", "-20874814527662001270399420",
                       "78054176824402526959936464", "-118165465673929410155118720"});
    default: throw DomainError("leading_coeffs: order must be 1..7");
    }
}

enum class ExteriorCase { insphere_qubit, insphere_rebit, abssep_rebit, abssep_qubit_numeric };

inline const std::vector<std::pair<std::string, ExteriorCase>>& exterior_case_names()
{
    static const std::vector<std::pair<std::string, ExteriorCase>> n = {
        {"insphere_qubit", ExteriorCase::insphere_qubit},
        {"insphere_rebit", ExteriorCase::insphere_rebit},
        {"abssep_rebit", ExteriorCase::abssep_rebit},
        {"abssep_qubit_numeric", ExteriorCase::abssep_qubit_numeric}};
    return n;
}

/// Separability probability exterior to the insphere or the absolutely separable set.
inline BoundedFloat exterior_probabilities(ExteriorCase c, mpfr_prec_t prec = 128)
{
    mpfr_prec_t w = prec + 32;
    BoundedFloat pi = BoundedFloat::pi(w);
    BoundedFloat s3 = sqrt(BoundedFloat::from_rational(3, w));
    BoundedFloat s2 = sqrt(BoundedFloat::from_rational(2, w));
    switch (c) {
    case ExteriorCase::insphere_qubit: {
        BoundedFloat t = s3 * pi;
        return ((t * Rational(385) - Rational(186624)) / ((t * Rational(35) - Rational(69984)) * Rational(11)))
            .rounded(prec);
    }
    case ExteriorCase::insphere_rebit:
        return ((s3 * Rational(128) - Rational(416118303)) / ((s3 * Rational(2) - Rational(14348907)) * Rational(64)))
            .rounded(prec);
    case ExteriorCase::abssep_rebit: {
        BoundedFloat num = s2 * pi * Rational(4410) - s2 * Rational(13856) + Rational(29);
        BoundedFloat den = (s2 * pi * Rational(2205) - s2 * Rational(6928) + Rational(32)) * Rational(2);
        return (num / den).rounded(prec);
    }
    case ExteriorCase::abssep_qubit_numeric:
        return BoundedFloat::from_rational(parse_rational("0.239643"), prec);
    }
    throw DomainError("unknown exterior case");
}

/// First part of the solved ratio (P(1,a) - P(0,a)) / (Q(1,a) - Q(0,a)).
inline Rational pq_ratio_firstpart(long alpha)
{
    if (alpha < 1)
        throw DomainError("pq_ratio_firstpart: alpha must be a positive integer");
    auto n = static_cast<unsigned long>(alpha);
    Rational a(alpha);
    auto r = [](long p, long q) { return make_rational(p, q); };
    Rational num = 5 * pow_rational(3, -3 * alpha - 1) * pow_rational(8, 2 * alpha + 1) * (5 * a + 3);
    for (const Rational& x : {r(7, 10), r(9, 10), r(1, 1), r(11, 10), r(13, 10), r(3, 2)})
        num *= pochhammer(x, n);
    Rational den = 20 * a + 11;
    for (const Rational& x : {r(2, 5), r(3, 5), r(4, 5), r(5, 6), r(7, 6), r(6, 5)})
        den *= pochhammer(x, n);
    return num / den;
}

/// Q(1, alpha) - Q(0, alpha) in its Gamma(alpha + j/10) form.
inline BoundedFloat q1_minus_q0(const Rational& alpha, mpfr_prec_t prec = 128)
{
    if (sgn(alpha) <= 0)
        throw DomainError("q1_minus_q0: alpha must be positive");
    mpfr_prec_t w = prec + 32;
    BoundedFloat g = gamma_ratio_numeric(
        {alpha + make_rational(5, 6), alpha + make_rational(7, 6), 5 * alpha + 2},
        {alpha, alpha + make_rational(7, 10), alpha + make_rational(9, 10), alpha + make_rational(11, 10),
         alpha + make_rational(13, 10), 2 * alpha + 3},
        w);
    BoundedFloat v = g * BoundedFloat::pi(w) * pow(Rational(2), Rational(-4 * alpha), w) *
                     pow(Rational(3), Rational(3 * alpha + 1), w) * pow(Rational(5), Rational(-5 * alpha - 3), w) *
                     Rational(20 * alpha + 11);
    return v.rounded(prec);
}

/// Constants appearing in values of Q at quarter and third alphas.
struct NamedConstants {
    /// C^2 = 3 Gamma(1/3)^3 / (4 pi^2)
    static BoundedFloat baxter_C2(mpfr_prec_t prec)
    {
        mpfr_prec_t w = prec + 32;
        BoundedFloat g = gamma(make_rational(1, 3), w);
        BoundedFloat pi = BoundedFloat::pi(w);
        return (g * g * g * Rational(3) / (pi * pi * Rational(4))).rounded(prec);
    }
    /// L = Gamma(1/4)^2 / (2 sqrt(2 pi))
    static BoundedFloat lemniscate_L(mpfr_prec_t prec)
    {
        mpfr_prec_t w = prec + 32;
        BoundedFloat g = gamma(make_rational(1, 4), w);
        return (g * g / (sqrt(BoundedFloat::pi(w) * Rational(2)) * Rational(2))).rounded(prec);
    }
    /// G = Gamma(1/4)^2 / (2 sqrt(2) pi^(3/2))
    static BoundedFloat gauss_G(mpfr_prec_t prec)
    {
        mpfr_prec_t w = prec + 32;
        BoundedFloat g = gamma(make_rational(1, 4), w);
        BoundedFloat pi = BoundedFloat::pi(w);
        return (g * g / (sqrt(BoundedFloat::from_rational(2, w)) * pi * sqrt(pi) * Rational(2))).rounded(prec);
    }
    /// Im omega_1 with omega_1 = (1 + i sqrt(3)) Gamma(1/3)^3 / (8 pi)
    static BoundedFloat omega1_im(mpfr_prec_t prec)
    {
        mpfr_prec_t w = prec + 32;
        BoundedFloat g = gamma(make_rational(1, 3), w);
        return (g * g * g * sqrt(BoundedFloat::from_rational(3, w)) / (BoundedFloat::pi(w) * Rational(8)))
            .rounded(prec);
    }
};

}  // namespace sepprob
