/**
 * @file bounded_float.hpp
 * @brief MPFR value paired with a rigorous absolute error bound.
 */
#pragma once

#include <mpfr.h>

#include <algorithm>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "exactnum.hpp"

namespace sepprob {

/// Owning wrapper for an mpfr_t.
class Mpfr {
public:
    explicit Mpfr(mpfr_prec_t prec = 64) { mpfr_init2(x_, prec); mpfr_set_zero(x_, 1); }
    Mpfr(const Mpfr& o) { mpfr_init2(x_, mpfr_get_prec(o.x_)); mpfr_set(x_, o.x_, MPFR_RNDN); }
    Mpfr(Mpfr&& o) noexcept
    {
        mpfr_init2(x_, MPFR_PREC_MIN);
        mpfr_swap(x_, o.x_);
    }
    Mpfr& operator=(const Mpfr& o)
    {
        if (this != &o) {
            mpfr_set_prec(x_, mpfr_get_prec(o.x_));
            mpfr_set(x_, o.x_, MPFR_RNDN);
        }
        return *this;
    }
    Mpfr& operator=(Mpfr&& o) noexcept
    {
        mpfr_swap(x_, o.x_);
        return *this;
    }
    ~Mpfr() { mpfr_clear(x_); }

    mpfr_ptr get() { return x_; }
    mpfr_srcptr get() const { return x_; }
    mpfr_prec_t prec() const { return mpfr_get_prec(x_); }
    double to_double() const { return mpfr_get_d(x_, MPFR_RNDN); }

private:
    mpfr_t x_;
};

inline constexpr mpfr_prec_t kErrPrec = 64;

/**
 * Value v with error e: the true quantity lies in [v - e, v + e].
 * Every operation rounds the midpoint to nearest and the error upward.
 */
class BoundedFloat {
public:
    explicit BoundedFloat(mpfr_prec_t prec = 64) : v_(prec), e_(kErrPrec) {}

    static BoundedFloat from_rational(const Rational& q, mpfr_prec_t prec)
    {
        BoundedFloat r(prec);
        int t = mpfr_set_q(r.v_.get(), q.get_mpq_t(), MPFR_RNDN);
        r.add_rounding(t);
        return r;
    }

    static BoundedFloat from_integer_ratio(const Integer& n, const Integer& d, mpfr_prec_t prec)
    {
        if (d == 0)
            throw DomainError("division by zero");
        BoundedFloat r(prec);
        Mpfr nn(std::max<mpfr_prec_t>(mpz_sizeinbase(n.get_mpz_t(), 2) + 1, 2));
        Mpfr dd(std::max<mpfr_prec_t>(mpz_sizeinbase(d.get_mpz_t(), 2) + 1, 2));
        mpfr_set_z(nn.get(), n.get_mpz_t(), MPFR_RNDN);
        mpfr_set_z(dd.get(), d.get_mpz_t(), MPFR_RNDN);
        int t = mpfr_div(r.v_.get(), nn.get(), dd.get(), MPFR_RNDN);
        r.add_rounding(t);
        return r;
    }

    /// Enclosure of [lo, hi] centred at precision prec.
    static BoundedFloat from_interval(const Mpfr& lo, const Mpfr& hi, mpfr_prec_t prec)
    {
        BoundedFloat r(prec);
        Mpfr sum(std::max(lo.prec(), hi.prec()) + 2);
        mpfr_add(sum.get(), lo.get(), hi.get(), MPFR_RNDN);
        mpfr_div_2ui(r.v_.get(), sum.get(), 1, MPFR_RNDN);
        Mpfr a(kErrPrec), b(kErrPrec);
        mpfr_sub(a.get(), hi.get(), r.v_.get(), MPFR_RNDU);
        mpfr_sub(b.get(), r.v_.get(), lo.get(), MPFR_RNDU);
        mpfr_max(r.e_.get(), a.get(), b.get(), MPFR_RNDU);
        if (mpfr_sgn(r.e_.get()) < 0)
            mpfr_set_zero(r.e_.get(), 1);
        return r;
    }

    /// Value and an upper bound for the error supplied by the caller.
    static BoundedFloat from_parts(const Mpfr& value, const Mpfr& err, mpfr_prec_t prec)
    {
        BoundedFloat r(prec);
        int t = mpfr_set(r.v_.get(), value.get(), MPFR_RNDN);
        mpfr_set(r.e_.get(), err.get(), MPFR_RNDU);
        mpfr_abs(r.e_.get(), r.e_.get(), MPFR_RNDU);
        r.add_rounding(t);
        return r;
    }

    static BoundedFloat pi(mpfr_prec_t prec)
    {
        Mpfr lo(prec + 16), hi(prec + 16);
        mpfr_const_pi(lo.get(), MPFR_RNDD);
        mpfr_const_pi(hi.get(), MPFR_RNDU);
        return from_interval(lo, hi, prec);
    }

    const Mpfr& value() const { return v_; }
    const Mpfr& abs_error() const { return e_; }
    mpfr_prec_t precision() const { return v_.prec(); }
    double to_double() const { return v_.to_double(); }
    double error_double() const { return mpfr_get_d(e_.get(), MPFR_RNDU); }
    bool is_exact() const { return mpfr_zero_p(e_.get()) != 0; }

    /// Lower end of the enclosure, rounded down.
    Mpfr lower(mpfr_prec_t extra = 32) const
    {
        Mpfr r(precision() + extra);
        mpfr_sub(r.get(), v_.get(), e_.get(), MPFR_RNDD);
        return r;
    }
    /// Upper end of the enclosure, rounded up.
    Mpfr upper(mpfr_prec_t extra = 32) const
    {
        Mpfr r(precision() + extra);
        mpfr_add(r.get(), v_.get(), e_.get(), MPFR_RNDU);
        return r;
    }

    bool certainly_positive() const { return mpfr_sgn(lower().get()) > 0; }
    bool certainly_negative() const { return mpfr_sgn(upper().get()) < 0; }

    /// Whether the exact rational q lies inside the enclosure.
    bool contains(const Rational& q) const
    {
        Mpfr lo = lower(64), hi = upper(64);
        return mpfr_cmp_q(lo.get(), q.get_mpq_t()) <= 0 && mpfr_cmp_q(hi.get(), q.get_mpq_t()) >= 0;
    }

    /// Whether the two enclosures intersect.
    bool overlaps(const BoundedFloat& o) const
    {
        Mpfr a = lower(64), b = upper(64), c = o.lower(64), d = o.upper(64);
        return mpfr_cmp(a.get(), d.get()) <= 0 && mpfr_cmp(c.get(), b.get()) <= 0;
    }

    /// Copy rounded to another precision, error widened by the rounding.
    BoundedFloat rounded(mpfr_prec_t prec) const
    {
        BoundedFloat r(prec);
        int t = mpfr_set(r.v_.get(), v_.get(), MPFR_RNDN);
        mpfr_set(r.e_.get(), e_.get(), MPFR_RNDU);
        r.add_rounding(t);
        return r;
    }

    /// Extra error added to the bound.
    BoundedFloat widened(const Mpfr& extra) const
    {
        BoundedFloat r = *this;
        Mpfr a(kErrPrec);
        mpfr_abs(a.get(), extra.get(), MPFR_RNDU);
        mpfr_add(r.e_.get(), r.e_.get(), a.get(), MPFR_RNDU);
        return r;
    }

    friend BoundedFloat operator+(const BoundedFloat& a, const BoundedFloat& b)
    {
        BoundedFloat r(std::max(a.precision(), b.precision()));
        int t = mpfr_add(r.v_.get(), a.v_.get(), b.v_.get(), MPFR_RNDN);
        mpfr_add(r.e_.get(), a.e_.get(), b.e_.get(), MPFR_RNDU);
        r.add_rounding(t);
        return r;
    }

    friend BoundedFloat operator-(const BoundedFloat& a)
    {
        BoundedFloat r = a;
        mpfr_neg(r.v_.get(), r.v_.get(), MPFR_RNDN);
        return r;
    }

    friend BoundedFloat operator-(const BoundedFloat& a, const BoundedFloat& b) { return a + (-b); }

    friend BoundedFloat operator*(const BoundedFloat& a, const BoundedFloat& b)
    {
        BoundedFloat r(std::max(a.precision(), b.precision()));
        int t = mpfr_mul(r.v_.get(), a.v_.get(), b.v_.get(), MPFR_RNDN);
        // |a| eb + |b| ea + ea eb
        Mpfr x(kErrPrec), y(kErrPrec), z(kErrPrec);
        mpfr_abs(x.get(), a.v_.get(), MPFR_RNDU);
        mpfr_mul(x.get(), x.get(), b.e_.get(), MPFR_RNDU);
        mpfr_abs(y.get(), b.v_.get(), MPFR_RNDU);
        mpfr_mul(y.get(), y.get(), a.e_.get(), MPFR_RNDU);
        mpfr_mul(z.get(), a.e_.get(), b.e_.get(), MPFR_RNDU);
        mpfr_add(r.e_.get(), x.get(), y.get(), MPFR_RNDU);
        mpfr_add(r.e_.get(), r.e_.get(), z.get(), MPFR_RNDU);
        r.add_rounding(t);
        return r;
    }

    friend BoundedFloat operator/(const BoundedFloat& a, const BoundedFloat& b)
    {
        // |b| - eb must stay positive
        Mpfr m(kErrPrec);
        mpfr_abs(m.get(), b.v_.get(), MPFR_RNDD);
        mpfr_sub(m.get(), m.get(), b.e_.get(), MPFR_RNDD);
        if (mpfr_sgn(m.get()) <= 0)
            throw DomainError("division by an enclosure containing zero");
        BoundedFloat r(std::max(a.precision(), b.precision()));
        int t = mpfr_div(r.v_.get(), a.v_.get(), b.v_.get(), MPFR_RNDN);
        // (|a| eb + |b| ea) / (|b| (|b| - eb))
        Mpfr x(kErrPrec), y(kErrPrec), d(kErrPrec);
        mpfr_abs(x.get(), a.v_.get(), MPFR_RNDU);
        mpfr_mul(x.get(), x.get(), b.e_.get(), MPFR_RNDU);
        mpfr_abs(y.get(), b.v_.get(), MPFR_RNDU);
        mpfr_mul(y.get(), y.get(), a.e_.get(), MPFR_RNDU);
        mpfr_add(x.get(), x.get(), y.get(), MPFR_RNDU);
        mpfr_abs(d.get(), b.v_.get(), MPFR_RNDD);
        mpfr_mul(d.get(), d.get(), m.get(), MPFR_RNDD);
        mpfr_div(r.e_.get(), x.get(), d.get(), MPFR_RNDU);
        r.add_rounding(t);
        return r;
    }

    friend BoundedFloat operator*(const BoundedFloat& a, const Rational& q)
    {
        return a * from_rational(q, a.precision());
    }
    friend BoundedFloat operator*(const Rational& q, const BoundedFloat& a) { return a * q; }
    friend BoundedFloat operator/(const BoundedFloat& a, const Rational& q)
    {
        return a / from_rational(q, a.precision());
    }
    friend BoundedFloat operator/(const Rational& q, const BoundedFloat& a)
    {
        return from_rational(q, a.precision()) / a;
    }
    friend BoundedFloat operator+(const Rational& q, const BoundedFloat& a) { return a + q; }
    friend BoundedFloat operator+(const BoundedFloat& a, const Rational& q)
    {
        return a + from_rational(q, a.precision());
    }
    friend BoundedFloat operator-(const BoundedFloat& a, const Rational& q)
    {
        return a - from_rational(q, a.precision());
    }
    friend BoundedFloat operator-(const Rational& q, const BoundedFloat& a)
    {
        return from_rational(q, a.precision()) - a;
    }

    BoundedFloat abs() const
    {
        BoundedFloat r = *this;
        mpfr_abs(r.v_.get(), r.v_.get(), MPFR_RNDN);
        return r;
    }

    /// "value +- error" with the given number of significant digits.
    std::string to_string(int digits = 30) const
    {
        std::vector<char> buf(static_cast<std::size_t>(digits) + 64);
        mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, v_.get());
        std::string s(buf.data());
        char eb[64];
        mpfr_snprintf(eb, sizeof eb, "%.3Re", e_.get());
        return s + " +- " + eb;
    }

    std::string value_string(int digits = 30) const
    {
        std::vector<char> buf(static_cast<std::size_t>(digits) + 64);
        mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, v_.get());
        return buf.data();
    }

    std::string error_string() const
    {
        char eb[64];
        mpfr_snprintf(eb, sizeof eb, "%.3Re", e_.get());
        return eb;
    }

private:
    void add_rounding(int ternary)
    {
        if (ternary == 0 || mpfr_zero_p(v_.get()))
            return;
        Mpfr u(kErrPrec);
        mpfr_set_ui_2exp(u.get(), 1, mpfr_get_exp(v_.get()) - static_cast<mpfr_exp_t>(precision()),
                         MPFR_RNDU);
        mpfr_add(e_.get(), e_.get(), u.get(), MPFR_RNDU);
    }

    Mpfr v_;
    Mpfr e_;
};

namespace detail {

using MpfrUnary = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t);

/// Correctly rounded monotone f applied to interval endpoints.
inline BoundedFloat apply_monotone(const BoundedFloat& x, MpfrUnary f, bool increasing)
{
    mpfr_prec_t p = x.precision();
    Mpfr lo = x.lower(), hi = x.upper();
    Mpfr flo(p + 16), fhi(p + 16);
    if (increasing) {
        f(flo.get(), lo.get(), MPFR_RNDD);
        f(fhi.get(), hi.get(), MPFR_RNDU);
    } else {
        f(flo.get(), hi.get(), MPFR_RNDD);
        f(fhi.get(), lo.get(), MPFR_RNDU);
    }
    return BoundedFloat::from_interval(flo, fhi, p);
}

}  // namespace detail

inline BoundedFloat sqrt(const BoundedFloat& x)
{
    if (mpfr_sgn(x.lower().get()) < 0)
        throw DomainError("sqrt of an enclosure reaching below zero");
    return detail::apply_monotone(x, mpfr_sqrt, true);
}

inline BoundedFloat log(const BoundedFloat& x)
{
    if (mpfr_sgn(x.lower().get()) <= 0)
        throw DomainError("log of an enclosure reaching zero");
    return detail::apply_monotone(x, mpfr_log, true);
}

inline BoundedFloat exp(const BoundedFloat& x) { return detail::apply_monotone(x, mpfr_exp, true); }

inline BoundedFloat log1p(const BoundedFloat& x)
{
    Mpfr lo = x.lower();
    if (mpfr_cmp_si(lo.get(), -1) <= 0)
        throw DomainError("log1p of an enclosure reaching -1");
    return detail::apply_monotone(x, mpfr_log1p, true);
}

/// x^q for x > 0 via exp(q log x); integer q uses repeated products.
inline BoundedFloat pow(const BoundedFloat& x, const Rational& q)
{
    if (is_integer(q) && abs(q) <= 64) {
        long n = to_long(q);
        BoundedFloat r = BoundedFloat::from_rational(1, x.precision());
        for (long i = 0; i < std::labs(n); ++i)
            r = r * x;
        return n >= 0 ? r : BoundedFloat::from_rational(1, x.precision()) / r;
    }
    return exp(log(x) * q);
}

/// Rational^rational, e.g. (27/64)^alpha.
inline BoundedFloat pow(const Rational& base, const Rational& q, mpfr_prec_t prec)
{
    if (is_integer(q) && q.get_num().fits_slong_p())
        return BoundedFloat::from_rational(pow_rational(base, to_long(q)), prec);
    if (sgn(base) <= 0)
        throw DomainError("non-integer power of a nonpositive base");
    return pow(BoundedFloat::from_rational(base, prec + 16), q).rounded(prec);
}

inline BoundedFloat to_bounded_float(const ExactReal& x, mpfr_prec_t precision_bits)
{
    if (precision_bits < 16)
        throw DomainError("precision below 16 bits");
    mpfr_prec_t w = precision_bits + 32;
    BoundedFloat r = BoundedFloat::from_rational(x.coeff, w);
    if (x.sqrtpi_pow != 0) {
        BoundedFloat s = sqrt(BoundedFloat::pi(w + 16)).rounded(w);
        BoundedFloat p = BoundedFloat::from_rational(1, w);
        for (long i = 0; i < std::labs(x.sqrtpi_pow); ++i)
            p = p * s;
        r = x.sqrtpi_pow > 0 ? r * p : r / p;
    }
    return r.rounded(precision_bits);
}

/**
 * Gamma at a rational: shift to an argument >= 2 with an exact Pochhammer,
 * then evaluate the increasing branch at the enclosure endpoints.
 */
inline BoundedFloat gamma(const Rational& x, mpfr_prec_t prec)
{
    if (is_nonpositive_integer(x))
        throw PoleError("gamma pole at " + x.get_str());
    Integer n = 0;
    if (x < 2)
        n = ceil_of(Rational(2 - x));
    Rational y = x + Rational(n);
    BoundedFloat yb = BoundedFloat::from_rational(y, prec + 32);
    BoundedFloat g = detail::apply_monotone(yb, mpfr_gamma, true);
    Rational shift = pochhammer(x, n.get_ui());
    return (g / BoundedFloat::from_rational(shift, prec + 32)).rounded(prec);
}

/// 1/Gamma(x), zero at the poles.
inline BoundedFloat rgamma(const Rational& x, mpfr_prec_t prec)
{
    if (is_nonpositive_integer(x))
        return BoundedFloat::from_rational(0, prec);
    return BoundedFloat::from_rational(1, prec) / gamma(x, prec);
}

/// Digamma: exact reciprocal sum shifts x past 2, then the increasing branch.
inline BoundedFloat digamma(const Rational& x, mpfr_prec_t prec)
{
    if (is_nonpositive_integer(x))
        throw PoleError("digamma pole at " + x.get_str());
    Integer n = 0;
    if (x < 2)
        n = ceil_of(Rational(2 - x));
    Rational y = x + Rational(n);
    Rational shift = 0;
    for (unsigned long i = 0; i < n.get_ui(); ++i)
        shift += 1 / (x + static_cast<long>(i));
    BoundedFloat yb = BoundedFloat::from_rational(y, prec + 32);
    BoundedFloat d = detail::apply_monotone(yb, mpfr_digamma, true);
    return (d - BoundedFloat::from_rational(shift, prec + 32)).rounded(prec);
}

/**
 * Prod Gamma(n_i) / prod Gamma(d_j) at rational arguments. Arguments equal
 * mod 1 telescope exactly; the rest are evaluated numerically.
 */
inline BoundedFloat gamma_ratio_numeric(const std::vector<Rational>& numerators,
                                        const std::vector<Rational>& denominators,
                                        mpfr_prec_t prec)
{
    for (const auto& b : denominators)
        if (is_nonpositive_integer(b))
            return BoundedFloat::from_rational(0, prec);
    std::map<Rational, std::pair<std::vector<Rational>, std::vector<Rational>>> cls;
    for (const auto& a : numerators) {
        if (is_nonpositive_integer(a))
            throw PoleError("gamma_ratio: numerator pole at " + a.get_str());
        cls[a - Rational(floor_of(a))].first.push_back(a);
    }
    for (const auto& b : denominators)
        cls[b - Rational(floor_of(b))].second.push_back(b);
    mpfr_prec_t w = prec + 32;
    Rational coeff = 1;
    BoundedFloat acc = BoundedFloat::from_rational(1, w);
    for (auto& [frac, lists] : cls) {
        auto& n = lists.first;
        auto& d = lists.second;
        std::sort(n.begin(), n.end());
        std::sort(d.begin(), d.end());
        std::size_t common = std::min(n.size(), d.size());
        std::size_t no = n.size() - common, dof = d.size() - common;
        for (std::size_t i = 0; i < common; ++i)
            coeff *= detail::gamma_quotient_shift(n[no + i], d[dof + i]);
        for (std::size_t i = 0; i < no; ++i)
            acc = acc * gamma(n[i], w);
        for (std::size_t i = 0; i < dof; ++i)
            acc = acc / gamma(d[i], w);
    }
    return (acc * coeff).rounded(prec);
}

}  // namespace sepprob
