/**
 * @file series.hpp
 * @brief Summation of series whose term ratio is a rational function of the index.
 *
 * Terms satisfy t_0 = 1 and t_{j+1} = r(j) t_j with
 * r(j) = scale * prod(j + upper_i) * extra_num(j) / (prod(j + lower_i) * extra_den(j)).
 * Partial sums are formed exactly by binary splitting. Tails are bounded by a
 * geometric majorant when |r| tends to a limit below 1, and by an asymptotic
 * antidifference with a certified remainder when r(j) tends to 1.
 */
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bounded_float.hpp"
#include "poly.hpp"

namespace sepprob {

struct RatioSeries {
    Rational scale = 1;
    std::vector<Rational> upper;
    std::vector<Rational> lower;
    RatPoly extra_num = RatPoly(1);
    RatPoly extra_den = RatPoly(1);

    RatPoly numerator() const { return product_of_linear(upper) * extra_num * scale; }
    RatPoly denominator() const { return product_of_linear(lower) * extra_den; }

    /// Last index with a possibly nonzero term, if an upper factor vanishes.
    std::optional<long> last_term() const
    {
        std::optional<long> m;
        if (scale == 0)
            m = 0;
        for (const auto& a : upper)
            if (is_nonpositive_integer(a)) {
                long j = to_long(Rational(-a));
                if (!m || j < *m)
                    m = j;
            }
        return m;
    }

    /// Throws if a lower factor vanishes before the series terminates.
    void validate() const
    {
        auto m = last_term();
        for (const auto& b : lower)
            if (is_nonpositive_integer(b)) {
                long j = to_long(Rational(-b));
                if (!m || j < *m)
                    throw PoleError("series denominator vanishes at index " + std::to_string(j));
            }
    }

    Rational ratio(long j) const
    {
        Rational jj(j);
        Rational n = scale * extra_num(jj), d = extra_den(jj);
        for (const auto& a : upper)
            n *= jj + a;
        for (const auto& b : lower)
            d *= jj + b;
        if (d == 0) {
            if (n == 0)
                return 0;
            throw PoleError("series denominator vanishes at index " + std::to_string(j));
        }
        return n / d;
    }
};

/// Exact sum of a terminating series.
inline Rational sum_terminating(const RatioSeries& s)
{
    auto m = s.last_term();
    if (!m)
        throw ModeError("series does not terminate");
    s.validate();
    Rational t = 1, sum = 1;
    for (long j = 0; j < *m; ++j) {
        t *= s.ratio(j);
        sum += t;
    }
    return sum;
}

struct SeriesResult {
    BoundedFloat value;
    long terms = 0;
    bool terminated = false;
};

namespace detail {

struct Split {
    Integer P, Q, T;
};

class Splitter {
public:
    Splitter(const RatPoly& num, const RatPoly& den)
    {
        auto [nc, nd] = num.integerized();
        auto [dc, dd] = den.integerized();
        for (auto& c : nc)
            p_.push_back(c * dd);
        for (auto& c : dc)
            q_.push_back(c * nd);
    }

    Split run(long a, long b) const
    {
        if (b - a == 1) {
            Integer p = eval_int_poly(p_, Integer(a));
            Integer q = eval_int_poly(q_, Integer(a));
            if (q == 0) {
                if (p != 0)
                    throw PoleError("series denominator vanishes at index " + std::to_string(a));
                q = 1;
            }
            return {p, q, q};
        }
        long mid = a + (b - a) / 2;
        Split l = run(a, mid), r = run(mid, b);
        return merge(l, r);
    }

    static Split merge(const Split& l, const Split& r)
    {
        return {l.P * r.P, l.Q * r.Q, l.T * r.Q + l.P * r.T};
    }

private:
    std::vector<Integer> p_, q_;
};

/// All coefficients nonnegative.
inline bool nonneg_coeffs(const RatPoly& p)
{
    for (const auto& c : p.coeffs())
        if (sgn(c) < 0)
            return false;
    return true;
}

/// All coefficients positive through the degree.
inline bool positive_coeffs(const RatPoly& p)
{
    if (p.is_zero())
        return false;
    for (const auto& c : p.coeffs())
        if (sgn(c) <= 0)
            return false;
    return true;
}

inline Mpfr rational_up(const Rational& q)
{
    Mpfr r(kErrPrec);
    mpfr_set_q(r.get(), q.get_mpq_t(), MPFR_RNDU);
    return r;
}

/// Upper bound for |P/Q|.
inline Mpfr ratio_abs_up(const Integer& p, const Integer& q)
{
    Mpfr a(kErrPrec), b(kErrPrec);
    Integer ap = abs(p), aq = abs(q);
    mpfr_set_z(a.get(), ap.get_mpz_t(), MPFR_RNDU);
    mpfr_set_z(b.get(), aq.get_mpz_t(), MPFR_RNDD);
    mpfr_div(a.get(), a.get(), b.get(), MPFR_RNDU);
    return a;
}

/// Solve a square system exactly; empty on singularity.
inline std::vector<Rational> solve_exact(std::vector<std::vector<Rational>> a, std::vector<Rational> b)
{
    std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && a[piv][c] == 0)
            ++piv;
        if (piv == n)
            return {};
        std::swap(a[piv], a[c]);
        std::swap(b[piv], b[c]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || a[r][c] == 0)
                continue;
            Rational f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k)
                a[r][k] -= f * a[c][k];
            b[r] -= f * b[c];
        }
    }
    std::vector<Rational> x(n);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = b[i] / a[i][i];
    return x;
}

/**
 * phi(j) = sum_{i=-1..M} c_i j^{-i} with phi(j) - r(j) phi(j+1) - 1 = R(j) / Dfull(j),
 * where deg Dfull - deg R >= M + 2.
 */
struct Antidifference {
    std::vector<Rational> c;  // c_{-1}, c_0, ..., c_M
    RatPoly residual;         // R
    RatPoly full_den;         // D x^M (x+1)^M
    long excess_degree = 0;   // deg Dfull - deg R

    Rational phi(const Rational& j) const
    {
        Rational r = 0, p = j;
        for (const auto& ci : c) {
            r += ci * p;
            p /= j;
        }
        return r;
    }
};

inline std::optional<Antidifference> build_antidifference(const RatPoly& N, const RatPoly& D, long M)
{
    RatPoly x = RatPoly::x(), x1 = RatPoly::linear(1);
    RatPoly xM = x.pow(static_cast<unsigned long>(M)), x1M = x1.pow(static_cast<unsigned long>(M));
    std::vector<RatPoly> basis;
    for (long i = -1; i <= M; ++i) {
        RatPoly a = D * x1M * x.pow(static_cast<unsigned long>(M - i));
        RatPoly b = N * xM * x1.pow(static_cast<unsigned long>(M - i));
        basis.push_back(a - b);
    }
    RatPoly full = D * xM * x1M;
    RatPoly rc = -full;
    long top = full.degree();
    std::size_t n = static_cast<std::size_t>(M + 2);
    std::vector<std::vector<Rational>> A(n, std::vector<Rational>(n));
    std::vector<Rational> b(n);
    for (std::size_t r = 0; r < n; ++r) {
        long deg = top - static_cast<long>(r);
        for (std::size_t c = 0; c < n; ++c)
            A[r][c] = basis[c].coeff(deg);
        b[r] = -rc.coeff(deg);
    }
    auto sol = solve_exact(A, b);
    if (sol.empty())
        return std::nullopt;
    RatPoly res = rc;
    for (std::size_t c = 0; c < n; ++c)
        res = res + basis[c] * sol[c];
    Antidifference ad;
    ad.c = sol;
    ad.residual = res;
    ad.full_den = full;
    ad.excess_degree = full.degree() - (res.is_zero() ? -1 : res.degree());
    if (!res.is_zero() && ad.excess_degree < M + 2)
        return std::nullopt;
    return ad;
}

/// Polynomial with the absolute values of the coefficients of p.
inline RatPoly abs_coeffs(const RatPoly& p)
{
    std::vector<Rational> c = p.coeffs();
    for (auto& v : c)
        v = abs(v);
    return RatPoly(std::move(c));
}

/// Smallest C with A <= C B coefficientwise, or nullopt.
inline std::optional<Rational> coefficient_ratio_bound(const RatPoly& A, const RatPoly& B)
{
    Rational C = 0;
    for (long i = 0; i <= A.degree(); ++i) {
        Rational a = A.coeff(i);
        if (a == 0)
            continue;
        Rational b = B.coeff(i);
        if (sgn(b) <= 0)
            return std::nullopt;
        if (a / b > C)
            C = a / b;
    }
    return C;
}

}  // namespace detail

/**
 * Certified sum of a nonterminating series at working precision prec.
 * The returned enclosure contains the exact infinite sum.
 */
inline SeriesResult sum_certified(const RatioSeries& s, mpfr_prec_t prec, long max_terms = 1L << 22)
{
    s.validate();
    if (s.last_term()) {
        Rational v = sum_terminating(s);
        return {BoundedFloat::from_rational(v, prec), *s.last_term() + 1, true};
    }
    RatPoly N = s.numerator(), D = s.denominator();
    if (sgn(D.lead()) < 0) {
        N = -N;
        D = -D;
    }
    if (N.degree() > D.degree())
        throw ConvergenceError("term ratio grows without bound");
    Rational L = N.degree() == D.degree() ? N.lead() / D.lead() : Rational(0);
    if (abs(L) > 1)
        throw ConvergenceError("limiting term ratio exceeds one in magnitude");
    bool unit = abs(L) == 1;
    long degD = D.degree();
    if (unit) {
        if (L != 1)
            throw ConvergenceError("alternating unit-argument series not supported");
        Rational excess = (D.coeff(degD - 1) - N.coeff(degD - 1)) / D.lead() - 1;
        if (sgn(excess) <= 0)
            throw ConvergenceError("parameter excess not positive: " + excess.get_str());
    }

    mpfr_prec_t w = prec + 32;
    detail::Splitter sp(N, D);
    long J = 64;
    detail::Split acc = sp.run(0, J);
    std::optional<detail::Antidifference> ad;
    long M = std::max<long>(8, static_cast<long>(prec) / 10);
    if (unit) {
        ad = detail::build_antidifference(N, D, M);
        if (!ad)
            throw ConvergenceError("asymptotic antidifference system is singular");
        J = std::max<long>(J, 2 * M);
        acc = sp.run(0, J);
    }
    Mpfr target(kErrPrec);
    while (true) {
        BoundedFloat approx = BoundedFloat::from_integer_ratio(acc.T, acc.Q, 64);
        mpfr_abs(target.get(), approx.value().get(), MPFR_RNDD);
        if (mpfr_cmp_ui(target.get(), 1) < 0 || mpfr_zero_p(target.get()))
            mpfr_set_ui(target.get(), 1, MPFR_RNDN);
        mpfr_mul_2si(target.get(), target.get(), -static_cast<long>(prec) - 2, MPFR_RNDD);

        Rational Jq(J);
        RatPoly Ns = N.shift(Jq), Ds = D.shift(Jq);
        bool ok = detail::positive_coeffs(Ds);
        if (acc.P == 0) {
            // a zero numerator value truncates the series
            BoundedFloat v = BoundedFloat::from_integer_ratio(acc.T, acc.Q, w);
            return {v.rounded(prec), J, true};
        }
        if (ok && !unit) {
            Rational rJ = abs(s.ratio(J));
            Rational aL = abs(L);
            Rational rho = std::max(rJ, aL) * make_rational(257, 256);
            if (rho < 1 && detail::nonneg_coeffs(Ds * rho - Ns) && detail::nonneg_coeffs(Ds * rho + Ns)) {
                Mpfr bound = detail::ratio_abs_up(acc.P, acc.Q);
                Mpfr f = detail::rational_up(1 / (1 - rho));
                mpfr_mul(bound.get(), bound.get(), f.get(), MPFR_RNDU);
                if (mpfr_cmp(bound.get(), target.get()) <= 0) {
                    BoundedFloat v = BoundedFloat::from_integer_ratio(acc.T, acc.Q, w).widened(bound);
                    return {v.rounded(prec), J, false};
                }
            }
        } else if (ok && unit) {
            if (detail::nonneg_coeffs(Ds - Ns) && detail::nonneg_coeffs(Ds + Ns)) {
                RatPoly Rs = detail::abs_coeffs(ad->residual.shift(Jq));
                RatPoly A = Rs * RatPoly::linear(Jq).pow(static_cast<unsigned long>(ad->excess_degree));
                RatPoly B = ad->full_den.shift(Jq);
                auto C = detail::coefficient_ratio_bound(A, B);
                if (C) {
                    long e = ad->excess_degree;
                    Rational sumbound = 1 / pow_rational(Jq, e) + 1 / (pow_rational(Jq, e - 1) * (e - 1));
                    Mpfr bound = detail::ratio_abs_up(acc.P, acc.Q);
                    Mpfr f = detail::rational_up(*C * sumbound);
                    mpfr_mul(bound.get(), bound.get(), f.get(), MPFR_RNDU);
                    if (mpfr_cmp(bound.get(), target.get()) <= 0) {
                        Rational phi = ad->phi(Jq);
                        Integer num = acc.T * phi.get_den() + acc.P * phi.get_num();
                        Integer den = acc.Q * phi.get_den();
                        BoundedFloat v = BoundedFloat::from_integer_ratio(num, den, w).widened(bound);
                        return {v.rounded(prec), J, false};
                    }
                }
            }
        }
        if (2 * J > max_terms)
            throw ConvergenceError("tail bound not reached within " + std::to_string(max_terms) + " terms");
        acc = detail::Splitter::merge(acc, sp.run(J, 2 * J));
        J *= 2;
    }
}

}  // namespace sepprob
