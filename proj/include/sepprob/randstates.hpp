/**
 * @file randstates.hpp
 * @brief Random 4x4 density matrices over the reals, complexes and quaternions
 * from the induced measure, partial transposes, determinants, and
 * deterministic multithreaded Monte Carlo estimates of Q and P.
 */
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "exactnum.hpp"
#include "philox.hpp"

namespace sepprob {

enum class ScalarField { real, complex, quaternion };

inline int dyson_beta(ScalarField f)
{
    switch (f) {
    case ScalarField::real: return 1;
    case ScalarField::complex: return 2;
    case ScalarField::quaternion: return 4;
    }
    return 0;
}

/// alpha = beta / 2
inline Rational field_alpha(ScalarField f) { return make_rational(dyson_beta(f), 2); }

inline std::string to_string(ScalarField f)
{
    switch (f) {
    case ScalarField::real: return "real";
    case ScalarField::complex: return "complex";
    case ScalarField::quaternion: return "quaternion";
    }
    return "?";
}

inline ScalarField field_from_alpha(const Rational& alpha)
{
    if (alpha == make_rational(1, 2))
        return ScalarField::real;
    if (alpha == 1)
        return ScalarField::complex;
    if (alpha == 2)
        return ScalarField::quaternion;
    throw DomainError("no scalar field with alpha = " + alpha.get_str());
}

inline ScalarField parse_field(const std::string& s)
{
    if (s == "real")
        return ScalarField::real;
    if (s == "complex")
        return ScalarField::complex;
    if (s == "quaternion")
        return ScalarField::quaternion;
    return field_from_alpha(parse_rational(s));
}

using CMatrix = Eigen::MatrixXcd;
using cplx = std::complex<double>;

/// 4x4 state (real, complex) or its 8x8 complex representation [[A, B], [-conj B, conj A]] (quaternion).
struct DensityMatrix {
    ScalarField field = ScalarField::complex;
    CMatrix m;

    double trace() const
    {
        double t = m.trace().real();
        return field == ScalarField::quaternion ? t / 2 : t;
    }
};

/// Complex representation of the quaternion matrix A + B j.
inline CMatrix quaternion_rep(const CMatrix& a, const CMatrix& b)
{
    CMatrix r(2 * a.rows(), 2 * a.cols());
    r << a, b, -b.conjugate(), a.conjugate();
    return r;
}

/// J-map check: a matrix M represents a quaternion matrix iff M = -J conj(M) J.
inline double symplectic_defect(const CMatrix& m)
{
    Eigen::Index n = m.rows() / 2;
    CMatrix a = m.topLeftCorner(n, n), b = m.topRightCorner(n, n);
    return (m - quaternion_rep(a, b)).cwiseAbs().maxCoeff();
}

/// Number of columns of the real or complex Ginibre factor: K = 3 + (k + 1)/alpha.
inline int ginibre_columns(int k, ScalarField f)
{
    if (f == ScalarField::real)
        return 5 + 2 * k;
    if (f == ScalarField::complex)
        return 4 + k;
    throw DomainError("ginibre_columns: quaternion states use the spectral construction");
}

namespace detail {

/// Eigenvalues of a beta = 4 Laguerre ensemble with parameter a via the bidiagonal model, normalized to sum 1.
inline Eigen::Vector4d quaternion_laguerre_spectrum(SampleStream& rng, int a)
{
    constexpr int beta = 4, n = 4;
    Eigen::Matrix4d bd = Eigen::Matrix4d::Zero();
    for (int i = 0; i < n; ++i)
        bd(i, i) = std::sqrt(rng.chi_square(2 * a - beta * i));
    for (int i = 0; i + 1 < n; ++i)
        bd(i + 1, i) = std::sqrt(rng.chi_square(beta * (n - 1 - i)));
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(bd * bd.transpose(), Eigen::EigenvaluesOnly);
    Eigen::Vector4d lam = es.eigenvalues();
    return lam / lam.sum();
}

}  // namespace detail

/**
 * One state from the induced measure. Real and complex: rho = G G^+ / tr with
 * G of size 4 x K. Quaternion: Haar quaternionic eigenvectors (from a 4 x 4
 * quaternionic Wishart matrix) with a beta = 4 Laguerre spectrum of parameter 7 + k.
 */
inline DensityMatrix sample_state(int k, ScalarField field, SampleStream& rng)
{
    if (k < 0)
        throw DomainError("sample_state: k must be nonnegative");
    DensityMatrix d;
    d.field = field;
    if (field == ScalarField::quaternion) {
        CMatrix a(4, 4), b(4, 4);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                a(i, j) = cplx(rng.normal(), rng.normal());
                b(i, j) = cplx(rng.normal(), rng.normal());
            }
        CMatrix g = quaternion_rep(a, b);
        Eigen::SelfAdjointEigenSolver<CMatrix> es(g * g.adjoint());
        Eigen::Vector4d lam = detail::quaternion_laguerre_spectrum(rng, 7 + k);
        Eigen::VectorXd mu(8);
        for (int i = 0; i < 4; ++i)
            mu(2 * i) = mu(2 * i + 1) = lam(i);
        const CMatrix& v = es.eigenvectors();
        d.m = v * mu.cast<cplx>().asDiagonal() * v.adjoint();
        d.m = (d.m + d.m.adjoint()) / 2.0;
        return d;
    }
    int cols = ginibre_columns(k, field);
    CMatrix g(4, cols);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < cols; ++j)
            g(i, j) = field == ScalarField::real ? cplx(rng.normal(), 0) : cplx(rng.normal(), rng.normal());
    CMatrix w = g * g.adjoint();
    double t = w.trace().real();
    d.m = w / t;
    return d;
}

namespace detail {

/// Transpose on the second qubit: M[(i, a), (j, b)] -> M[(i, b), (j, a)].
inline CMatrix pt_4x4(const CMatrix& m)
{
    CMatrix r(4, 4);
    for (int i = 0; i < 2; ++i)
        for (int a = 0; a < 2; ++a)
            for (int j = 0; j < 2; ++j)
                for (int b = 0; b < 2; ++b)
                    r(2 * i + a, 2 * j + b) = m(2 * i + b, 2 * j + a);
    return r;
}

}  // namespace detail

/// Partial transpose on the second factor; quaternionic conjugate transpose of the 2 x 2 blocks for quaternions.
inline DensityMatrix partial_transpose(const DensityMatrix& rho)
{
    DensityMatrix r;
    r.field = rho.field;
    if (rho.field != ScalarField::quaternion) {
        r.m = detail::pt_4x4(rho.m);
        return r;
    }
    // conj(a + b j) = conj(a) - b j
    CMatrix a = detail::pt_4x4(rho.m.topLeftCorner(4, 4)).conjugate();
    CMatrix b = -detail::pt_4x4(rho.m.topRightCorner(4, 4));
    r.m = quaternion_rep(a, b);
    return r;
}

/// Determinant; for quaternions the Moore determinant, the product of one eigenvalue from each degenerate pair.
inline double determinant(const DensityMatrix& rho)
{
    if (rho.field != ScalarField::quaternion)
        return rho.m.determinant().real();
    Eigen::SelfAdjointEigenSolver<CMatrix> es(rho.m, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd& e = es.eigenvalues();
    return e(0) * e(2) * e(4) * e(6);
}

/// Largest gap within the sorted eigenvalue pairs of a quaternionic representation.
inline double pairing_defect(const DensityMatrix& rho)
{
    Eigen::SelfAdjointEigenSolver<CMatrix> es(rho.m, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd& e = es.eigenvalues();
    double d = 0;
    for (int i = 0; i < 4; ++i)
        d = std::max(d, std::abs(e(2 * i + 1) - e(2 * i)));
    return d;
}

struct DeterminantPair {
    double det_rho;
    double det_pt;
};

inline DeterminantPair determinants(const DensityMatrix& rho)
{
    return {determinant(rho), determinant(partial_transpose(rho))};
}

struct MCResult {
    int k = 0;
    ScalarField field = ScalarField::complex;
    std::uint64_t n_samples = 0;
    std::uint64_t seed = 0;
    std::uint64_t count_q = 0;
    std::uint64_t count_p = 0;
    double q_hat = 0;
    double p_hat = 0;
    double stderr_q = 0;
    double stderr_p = 0;
    double min_ptdet = 0;
    double max_ptdet = 0;
    double min_diff = 0;
    double max_diff = 0;
    std::array<double, 4> diff_moments{};      ///< sample means of diff^n, n = 0..3
    std::array<double, 4> diff_moment_se{};    ///< standard errors of those means
};

namespace detail {

inline constexpr std::uint64_t kMcBlock = 4096;

struct BlockStats {
    std::uint64_t q = 0, p = 0;
    double min_pt = std::numeric_limits<double>::infinity();
    double max_pt = -std::numeric_limits<double>::infinity();
    double min_diff = std::numeric_limits<double>::infinity();
    double max_diff = -std::numeric_limits<double>::infinity();
    std::array<double, 4> s1{}, s2{};
};

inline BlockStats run_block(int k, ScalarField field, std::uint64_t seed, std::uint64_t begin, std::uint64_t end,
                            std::vector<DeterminantPair>* dump)
{
    BlockStats s;
    for (std::uint64_t i = begin; i < end; ++i) {
        SampleStream rng(seed, i);
        DeterminantPair d = determinants(sample_state(k, field, rng));
        if (dump)
            (*dump)[i] = d;
        double diff = d.det_pt - d.det_rho;
        s.q += d.det_pt > d.det_rho;
        s.p += d.det_pt > 0;
        s.min_pt = std::min(s.min_pt, d.det_pt);
        s.max_pt = std::max(s.max_pt, d.det_pt);
        s.min_diff = std::min(s.min_diff, diff);
        s.max_diff = std::max(s.max_diff, diff);
        double pw = 1;
        for (int n = 0; n < 4; ++n) {
            s.s1[n] += pw;
            s.s2[n] += pw * pw;
            pw *= diff;
        }
    }
    return s;
}

}  // namespace detail

/**
 * Monte Carlo estimate of Q(k, alpha) and P(k, alpha). Sample i uses the
 * stream keyed by (seed, i); per-block sums are reduced in block order, so
 * the result is identical for any worker count.
 */
inline MCResult mc_estimate(int k, ScalarField field, std::uint64_t n_samples, std::uint64_t seed,
                            unsigned worker_count = 1, std::vector<DeterminantPair>* dump = nullptr)
{
    if (n_samples == 0)
        throw DomainError("mc_estimate: n_samples must be positive");
    if (k < 0)
        throw DomainError("mc_estimate: k must be nonnegative");
    if (worker_count == 0)
        worker_count = 1;
    if (dump)
        dump->assign(n_samples, DeterminantPair{0, 0});
    std::uint64_t nblocks = (n_samples + detail::kMcBlock - 1) / detail::kMcBlock;
    std::vector<detail::BlockStats> blocks(nblocks);
    auto work = [&](unsigned w) {
        for (std::uint64_t b = w; b < nblocks; b += worker_count) {
            std::uint64_t begin = b * detail::kMcBlock;
            std::uint64_t end = std::min(n_samples, begin + detail::kMcBlock);
            blocks[b] = detail::run_block(k, field, seed, begin, end, dump);
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < worker_count; ++w)
        pool.emplace_back(work, w);
    work(0);
    for (auto& t : pool)
        t.join();

    MCResult r;
    r.k = k;
    r.field = field;
    r.n_samples = n_samples;
    r.seed = seed;
    detail::BlockStats tot;
    for (const auto& b : blocks) {
        tot.q += b.q;
        tot.p += b.p;
        tot.min_pt = std::min(tot.min_pt, b.min_pt);
        tot.max_pt = std::max(tot.max_pt, b.max_pt);
        tot.min_diff = std::min(tot.min_diff, b.min_diff);
        tot.max_diff = std::max(tot.max_diff, b.max_diff);
        for (int n = 0; n < 4; ++n) {
            tot.s1[n] += b.s1[n];
            tot.s2[n] += b.s2[n];
        }
    }
    auto n = static_cast<double>(n_samples);
    r.count_q = tot.q;
    r.count_p = tot.p;
    r.q_hat = static_cast<double>(tot.q) / n;
    r.p_hat = static_cast<double>(tot.p) / n;
    r.stderr_q = std::sqrt(r.q_hat * (1 - r.q_hat) / n);
    r.stderr_p = std::sqrt(r.p_hat * (1 - r.p_hat) / n);
    r.min_ptdet = tot.min_pt;
    r.max_ptdet = tot.max_pt;
    r.min_diff = tot.min_diff;
    r.max_diff = tot.max_diff;
    for (int m = 0; m < 4; ++m) {
        double mean = tot.s1[m] / n;
        r.diff_moments[m] = mean;
        double var = std::max(0.0, tot.s2[m] / n - mean * mean);
        r.diff_moment_se[m] = std::sqrt(var / n);
    }
    return r;
}

}  // namespace sepprob
