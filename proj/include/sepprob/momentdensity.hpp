/**
 * @file momentdensity.hpp
 * @brief Exact moments of |rho|, |rho^PT| - |rho| and |rho^PT|, and Legendre
 * polynomial density reconstruction on a compact support.
 */
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bounded_float.hpp"
#include "hyperg.hpp"

namespace sepprob {

enum class MomentKind { diff, ptdet };

inline std::string to_string(MomentKind k) { return k == MomentKind::diff ? "diff" : "ptdet"; }

inline MomentKind parse_moment_kind(const std::string& s)
{
    if (s == "diff")
        return MomentKind::diff;
    if (s == "ptdet")
        return MomentKind::ptdet;
    throw DomainError("unknown moment kind '" + s + "'");
}

struct MomentSpec {
    MomentKind kind = MomentKind::diff;
    long k = 0;
    Rational alpha = 1;
    long order = 0;

    void validate() const
    {
        if (order < 0)
            throw DomainError("MomentSpec: order must be nonnegative");
        if (kind == MomentKind::ptdet && k != 0)
            throw DomainError("MomentSpec: ptdet moments exist for k = 0 only");
        if (k < 0)
            throw DomainError("MomentSpec: k must be nonnegative");
    }
};

struct SupportInterval {
    Rational lo = make_rational(-1, 16);
    Rational hi = make_rational(1, 256);

    Rational width() const { return hi - lo; }
    void validate() const
    {
        if (!(lo < hi))
            throw DomainError("SupportInterval: lo must be below hi");
    }
};

/// [-1/16, 1/432] for diff, [-1/16, 1/256] for ptdet.
inline SupportInterval default_support(MomentKind kind)
{
    if (kind == MomentKind::diff)
        return {make_rational(-1, 16), make_rational(1, 432)};
    return {make_rational(-1, 16), make_rational(1, 256)};
}

/// <|rho|^k> = (1)_k (3/2)_k (2)_k (5/2)_k / (10)_{4k}.
inline Rational det_moment(long k)
{
    if (k < 0)
        throw DomainError("det_moment: k must be nonnegative");
    auto n = static_cast<unsigned long>(k);
    return pochhammer(1, n) * pochhammer(make_rational(3, 2), n) * pochhammer(2, n) *
           pochhammer(make_rational(5, 2), n) / pochhammer(10, 4 * n);
}

/// <|rho|^n> under the induced measure of a 4 x K ensemble, K = 3 + (k + 1) / alpha.
inline Rational det_moment_induced(long n, long k, const Rational& alpha)
{
    if (n < 0 || sgn(alpha) <= 0)
        throw DomainError("det_moment_induced: need n >= 0 and alpha > 0");
    Rational K = 3 + Rational(k + 1) / alpha;
    auto un = static_cast<unsigned long>(n);
    Rational num = 1;
    for (long i = 0; i < 4; ++i)
        num *= pochhammer(alpha * (K - i), un);
    return num / pochhammer(4 * alpha * K, 4 * un);
}

/// n-th moment of |rho^PT| - |rho| under the |rho|^k-weighted measure.
inline Rational diff_moment(long n, long k, const Rational& alpha)
{
    if (n < 0 || k < 0)
        throw DomainError("diff_moment: n and k must be nonnegative");
    if (n == 0)
        return 1;
    auto un = static_cast<unsigned long>(n);
    Rational K(k);
    Rational pre = pochhammer(alpha, un) * pochhammer(alpha + make_rational(1, 2), un) *
                   pochhammer(Rational(n + 2 * K + 2 + 5 * alpha), un);
    Rational den = pow_rational(2, 4 * n) * pochhammer(Rational(K + 3 * alpha + make_rational(3, 2)), un) *
                   pochhammer(Rational(2 * K + 6 * alpha + make_rational(5, 2)), 2 * un);
    if (den == 0)
        throw PoleError("diff_moment: vanishing Pochhammer denominator");
    if (n % 2)
        pre = -pre;
    HyperSeries f({make_rational(-n, 2), make_rational(1 - n, 2), K + 1 + alpha, K + 1 + 2 * alpha},
                  {1 - n - alpha, make_rational(1, 2) - n - alpha, n + 2 * K + 2 + 5 * alpha}, Rational(1));
    return pre / den * pfq_exact(f);
}

/// n-th moment of |rho^PT| under the Hilbert-Schmidt measure.
inline Rational pt_moment(long n, const Rational& alpha)
{
    if (n < 0)
        throw DomainError("pt_moment: n must be nonnegative");
    if (n == 0)
        return 1;
    auto un = static_cast<unsigned long>(n);
    Rational common = pochhammer(Rational(3 * alpha + make_rational(3, 2)), un) *
                      pochhammer(Rational(6 * alpha + make_rational(5, 2)), 2 * un);
    if (common == 0)
        throw PoleError("pt_moment: vanishing Pochhammer denominator");
    Rational t1 = pochhammer(1, un) * pochhammer(alpha + 1, un) * pochhammer(Rational(2 * alpha + 1), un) /
                  (pow_rational(2, 6 * n) * common);
    Rational t2 = pochhammer(Rational(-2 * n - 1 - 5 * alpha), un) * pochhammer(alpha, un) *
                  pochhammer(alpha + make_rational(1, 2), un) / (pow_rational(2, 4 * n) * common);
    HyperSeries f({make_rational(2 - n, 2), make_rational(1 - n, 2), Rational(-n), alpha + 1, 2 * alpha + 1},
                  {Rational(1 - n), n + 2 + 5 * alpha, 1 - n - alpha, make_rational(1, 2) - n - alpha}, Rational(1));
    return t1 + t2 * pfq_exact(f);
}

/// Moments of orders 0..spec.order.
inline std::vector<Rational> moment_sequence(const MomentSpec& spec)
{
    spec.validate();
    std::vector<Rational> m;
    m.reserve(static_cast<std::size_t>(spec.order) + 1);
    for (long n = 0; n <= spec.order; ++n)
        m.push_back(spec.kind == MomentKind::diff ? diff_moment(n, spec.k, spec.alpha) : pt_moment(n, spec.alpha));
    return m;
}

/// Ascending coefficients of the Legendre polynomials P_0..P_n.
inline std::vector<std::vector<Rational>> legendre_polys(long n)
{
    std::vector<std::vector<Rational>> p{{Rational(1)}, {Rational(0), Rational(1)}};
    for (long j = 1; j < n; ++j) {
        std::vector<Rational> next(static_cast<std::size_t>(j) + 2, Rational(0));
        Rational a = make_rational(2 * j + 1, j + 1), b = make_rational(j, j + 1);
        for (std::size_t i = 0; i < p[j].size(); ++i)
            next[i + 1] += a * p[j][i];
        for (std::size_t i = 0; i < p[j - 1].size(); ++i)
            next[i] -= b * p[j - 1][i];
        p.push_back(std::move(next));
    }
    p.resize(static_cast<std::size_t>(n) + 1);
    return p;
}

/// f(x) = (dt/dx) sum_j lambda_j P_j(t(x)), with t the affine map of the support onto [-1, 1].
struct DensityApprox {
    SupportInterval support;
    std::vector<Rational> exact_coeffs;
    std::vector<BoundedFloat> legendre_coeffs;
    long degree = 0;

    Rational to_t(const Rational& x) const { return (2 * x - support.lo - support.hi) / support.width(); }

    /// Exact integral of the density over the support.
    Rational total_mass() const { return 2 * exact_coeffs.at(0); }

    /// Density at x as a double.
    double density(double x) const
    {
        double lo = support.lo.get_d(), hi = support.hi.get_d();
        double t = (2 * x - lo - hi) / (hi - lo);
        double p0 = 1, p1 = t, s = exact_coeffs[0].get_d();
        if (degree >= 1)
            s += exact_coeffs[1].get_d() * t;
        for (long j = 1; j < degree; ++j) {
            double p2 = ((2 * j + 1) * t * p1 - j * p0) / (j + 1);
            s += exact_coeffs[static_cast<std::size_t>(j + 1)].get_d() * p2;
            p0 = p1;
            p1 = p2;
        }
        return s * 2 / (hi - lo);
    }
};

/// Legendre coefficients lambda_j = (2j + 1)/2 E[P_j(t(X))] from raw moments.
inline DensityApprox legendre_coeffs(const std::vector<Rational>& moments, const SupportInterval& support,
                                     long degree, mpfr_prec_t prec = 128)
{
    support.validate();
    if (degree < 0)
        throw DomainError("legendre_coeffs: degree must be nonnegative");
    if (static_cast<long>(moments.size()) < degree + 1)
        throw DomainError("legendre_coeffs: degree " + std::to_string(degree) + " needs " +
                          std::to_string(degree + 1) + " moments, got " + std::to_string(moments.size()));
    if (moments[0] != 1)
        throw DomainError("legendre_coeffs: moments[0] must be 1");
    Rational a = 2 / support.width();
    Rational b = -(support.lo + support.hi) / support.width();
    // E[T^m] for T = a X + b
    std::vector<Rational> tm;
    for (long m = 0; m <= degree; ++m) {
        Rational s = 0, binom = 1;
        for (long i = 0; i <= m; ++i) {
            s += binom * pow_rational(a, i) * pow_rational(b, m - i) * moments[static_cast<std::size_t>(i)];
            binom = binom * (m - i) / (i + 1);
        }
        tm.push_back(s);
    }
    auto P = legendre_polys(degree);
    DensityApprox d;
    d.support = support;
    d.degree = degree;
    for (long j = 0; j <= degree; ++j) {
        Rational e = 0;
        const auto& pj = P[static_cast<std::size_t>(j)];
        for (std::size_t i = 0; i < pj.size(); ++i)
            e += pj[i] * tm[i];
        Rational lambda = make_rational(2 * j + 1, 2) * e;
        d.exact_coeffs.push_back(lambda);
        d.legendre_coeffs.push_back(BoundedFloat::from_rational(lambda, prec));
    }
    return d;
}

/// Exact mass of the reconstructed density above the threshold.
inline Rational tail_probability_exact(const DensityApprox& d, const Rational& threshold)
{
    if (threshold < d.support.lo || threshold > d.support.hi)
        throw DomainError("tail_probability: threshold outside the support");
    Rational t0 = d.to_t(threshold);
    auto P = legendre_polys(d.degree + 1);
    std::vector<Rational> pv;
    for (const auto& p : P) {
        Rational v = 0;
        for (auto it = p.rbegin(); it != p.rend(); ++it)
            v = v * t0 + *it;
        pv.push_back(v);
    }
    Rational tail = d.exact_coeffs[0] * (1 - t0);
    for (long j = 1; j <= d.degree; ++j) {
        auto u = static_cast<std::size_t>(j);
        tail -= d.exact_coeffs[u] * (pv[u + 1] - pv[u - 1]) / (2 * j + 1);
    }
    return tail;
}

inline BoundedFloat tail_probability(const DensityApprox& d, const Rational& threshold, mpfr_prec_t prec = 128)
{
    return BoundedFloat::from_rational(tail_probability_exact(d, threshold), prec);
}

/// Determinant of a small rational matrix by Gaussian elimination.
inline Rational rational_det(std::vector<std::vector<Rational>> m)
{
    std::size_t n = m.size();
    Rational det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && m[p][c] == 0)
            ++p;
        if (p == n)
            return 0;
        if (p != c) {
            std::swap(m[p], m[c]);
            det = -det;
        }
        det *= m[c][c];
        for (std::size_t i = c + 1; i < n; ++i) {
            Rational f = m[i][c] / m[c][c];
            for (std::size_t j = c; j < n; ++j)
                m[i][j] -= f * m[c][j];
        }
    }
    return det;
}

struct HankelReport {
    std::vector<Rational> minors;  ///< leading principal minors of [mu_{i+j}], sizes 1..order+1
    bool all_nonnegative = false;
};

/// Leading principal minors of the Hankel matrix of u = (x - lo)/(hi - lo) moments.
inline HankelReport hankel_minors_check(const std::vector<Rational>& moments, const SupportInterval& support,
                                        long order = 8)
{
    if (static_cast<long>(moments.size()) < 2 * order + 1)
        throw DomainError("hankel_minors_check: need 2 * order + 1 moments");
    Rational w = support.width();
    std::vector<Rational> mu;
    for (long m = 0; m <= 2 * order; ++m) {
        Rational s = 0, binom = 1;
        for (long i = 0; i <= m; ++i) {
            s += binom * pow_rational(Rational(-support.lo), m - i) * moments[static_cast<std::size_t>(i)];
            binom = binom * (m - i) / (i + 1);
        }
        mu.push_back(s / pow_rational(w, m));
    }
    HankelReport r;
    r.all_nonnegative = true;
    for (long n = 1; n <= order + 1; ++n) {
        std::vector<std::vector<Rational>> h(static_cast<std::size_t>(n), std::vector<Rational>(static_cast<std::size_t>(n)));
        for (long i = 0; i < n; ++i)
            for (long j = 0; j < n; ++j)
                h[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = mu[static_cast<std::size_t>(i + j)];
        r.minors.push_back(rational_det(std::move(h)));
        if (sgn(r.minors.back()) < 0)
            r.all_nonnegative = false;
    }
    return r;
}

struct Reconstruction {
    MomentSpec spec;
    DensityApprox density;
    Rational tail_exact;
    BoundedFloat tail;
};

/// Moments through the degree, Legendre density, and its mass above zero.
inline Reconstruction reconstruct(MomentSpec spec, long degree, std::optional<SupportInterval> support = std::nullopt,
                                  mpfr_prec_t prec = 128)
{
    spec.order = degree;
    std::vector<Rational> m = moment_sequence(spec);
    SupportInterval s = support.value_or(default_support(spec.kind));
    DensityApprox d = legendre_coeffs(m, s, degree, prec);
    Rational t = tail_probability_exact(d, 0);
    return {spec, d, t, BoundedFloat::from_rational(t, prec)};
}

}  // namespace sepprob
