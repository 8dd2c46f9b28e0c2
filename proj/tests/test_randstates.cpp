#include "sepprob/randstates.hpp"
#include "sepprob/sepformulas.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

using namespace sepprob;
using sepprob::testing::q;

namespace {

DensityMatrix complex_state(const Eigen::Matrix4cd& m)
{
    DensityMatrix d;
    d.field = ScalarField::complex;
    d.m = m;
    return d;
}

DensityMatrix bell_state()
{
    Eigen::Vector4cd psi(1, 0, 0, 1);
    psi /= std::sqrt(2.0);
    return complex_state(psi * psi.adjoint());
}

}  // namespace

TEST(Philox, KnownAnswers)
{
    EXPECT_EQ(philox4x32_10({0, 0, 0, 0}, {0, 0}),
              (PhiloxCounter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
    EXPECT_EQ(philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}),
              (PhiloxCounter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
}

TEST(SampleStream, Deterministic)
{
    SampleStream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
    std::vector<double> va, vb, vc, vd;
    for (int i = 0; i < 16; ++i) {
        va.push_back(a.normal());
        vb.push_back(b.normal());
        vc.push_back(c.normal());
        vd.push_back(d.normal());
    }
    EXPECT_EQ(va, vb);
    EXPECT_NE(va, vc);
    EXPECT_NE(va, vd);
}

TEST(SampleStream, UniformAndNormalMoments)
{
    double su = 0, sn = 0, sn2 = 0, sc = 0;
    constexpr int n = 20000;
    for (int i = 0; i < n; ++i) {
        SampleStream s(1, static_cast<std::uint64_t>(i));
        double u = s.uniform();
        ASSERT_GT(u, 0);
        ASSERT_LT(u, 1);
        su += u;
        double z = s.normal();
        sn += z;
        sn2 += z * z;
        sc += s.chi_square(3);
    }
    EXPECT_NEAR(su / n, 0.5, 4 * std::sqrt(1.0 / 12 / n));
    EXPECT_NEAR(sn / n, 0.0, 4 / std::sqrt(n));
    EXPECT_NEAR(sn2 / n, 1.0, 4 * std::sqrt(2.0 / n));
    EXPECT_NEAR(sc / n, 3.0, 4 * std::sqrt(6.0 / n));
}

TEST(Fields, Parsing)
{
    EXPECT_EQ(parse_field("real"), ScalarField::real);
    EXPECT_EQ(parse_field("complex"), ScalarField::complex);
    EXPECT_EQ(parse_field("quaternion"), ScalarField::quaternion);
    EXPECT_EQ(parse_field("1/2"), ScalarField::real);
    EXPECT_EQ(parse_field("2"), ScalarField::quaternion);
    EXPECT_THROW(parse_field("3/2"), DomainError);
    EXPECT_EQ(to_string(ScalarField::complex), "complex");
}

TEST(Fields, BetaAndColumns)
{
    EXPECT_EQ(dyson_beta(ScalarField::real), 1);
    EXPECT_EQ(dyson_beta(ScalarField::complex), 2);
    EXPECT_EQ(dyson_beta(ScalarField::quaternion), 4);
    EXPECT_EQ(field_alpha(ScalarField::quaternion), 2);
    EXPECT_EQ(ginibre_columns(0, ScalarField::real), 5);
    EXPECT_EQ(ginibre_columns(2, ScalarField::real), 9);
    EXPECT_EQ(ginibre_columns(0, ScalarField::complex), 4);
    EXPECT_EQ(ginibre_columns(3, ScalarField::complex), 7);
    EXPECT_THROW(ginibre_columns(0, ScalarField::quaternion), DomainError);
}

TEST(Determinants, KnownStates)
{
    DeterminantPair bell = determinants(bell_state());
    EXPECT_NEAR(bell.det_rho, 0.0, 1e-15);
    EXPECT_NEAR(bell.det_pt, -1.0 / 16, 1e-15);

    DeterminantPair mixed = determinants(complex_state(Eigen::Matrix4cd::Identity() / 4.0));
    EXPECT_NEAR(mixed.det_rho, 1.0 / 256, 1e-15);
    EXPECT_NEAR(mixed.det_pt, 1.0 / 256, 1e-15);

    Eigen::Matrix2cd a, b;
    a << 0.7, cplx(0.1, 0.2), cplx(0.1, -0.2), 0.3;
    b << 0.4, cplx(0, 0.1), cplx(0, -0.1), 0.6;
    Eigen::Matrix4cd prod;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            prod.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    DeterminantPair p = determinants(complex_state(prod));
    EXPECT_NEAR(p.det_pt - p.det_rho, 0.0, 1e-15);
}

TEST(Sampler, TraceOneAndHermitian)
{
    for (ScalarField f : {ScalarField::real, ScalarField::complex, ScalarField::quaternion})
        for (int k = 0; k <= 2; ++k) {
            SampleStream rng(5, static_cast<std::uint64_t>(k));
            DensityMatrix d = sample_state(k, f, rng);
            EXPECT_NEAR(d.trace(), 1.0, 1e-12);
            EXPECT_LT((d.m - d.m.adjoint()).cwiseAbs().maxCoeff(), 1e-14);
            Eigen::SelfAdjointEigenSolver<CMatrix> es(d.m, Eigen::EigenvaluesOnly);
            EXPECT_GT(es.eigenvalues().minCoeff(), 0);
            if (f == ScalarField::real)
                EXPECT_EQ(d.m.imag().cwiseAbs().maxCoeff(), 0);
        }
    SampleStream rng(1, 1);
    EXPECT_THROW(sample_state(-1, ScalarField::complex, rng), DomainError);
}

TEST(Sampler, QuaternionStructure)
{
    for (std::uint64_t i = 0; i < 20; ++i) {
        SampleStream rng(9, i);
        DensityMatrix d = sample_state(1, ScalarField::quaternion, rng);
        ASSERT_EQ(d.m.rows(), 8);
        EXPECT_LT(symplectic_defect(d.m), 1e-14);
        EXPECT_LT(pairing_defect(d), 1e-12);
        DensityMatrix pt = partial_transpose(d);
        EXPECT_LT(symplectic_defect(pt.m), 1e-14);
        EXPECT_LT(pairing_defect(pt), 1e-12);
        EXPECT_NEAR(pt.trace(), 1.0, 1e-12);
    }
}

TEST(PartialTranspose, Involution)
{
    SampleStream rng(3, 0);
    DensityMatrix d = sample_state(0, ScalarField::complex, rng);
    DensityMatrix back = partial_transpose(partial_transpose(d));
    EXPECT_LT((back.m - d.m).cwiseAbs().maxCoeff(), 1e-16);
    EXPECT_NEAR(partial_transpose(d).trace(), 1.0, 1e-12);
}

TEST(MonteCarlo, WorkerCountInvariance)
{
    MCResult a = mc_estimate(0, ScalarField::complex, 10000, 99, 1);
    MCResult b = mc_estimate(0, ScalarField::complex, 10000, 99, 3);
    MCResult c = mc_estimate(0, ScalarField::complex, 10000, 99, 8);
    EXPECT_EQ(a.count_q, b.count_q);
    EXPECT_EQ(a.count_p, c.count_p);
    EXPECT_EQ(a.diff_moments, b.diff_moments);
    EXPECT_EQ(a.diff_moments, c.diff_moments);
    EXPECT_EQ(a.min_ptdet, c.min_ptdet);
    MCResult d = mc_estimate(0, ScalarField::complex, 10000, 100, 1);
    EXPECT_NE(a.diff_moments[1], d.diff_moments[1]);
}

TEST(MonteCarlo, Errors)
{
    EXPECT_THROW(mc_estimate(0, ScalarField::real, 0, 1), DomainError);
    EXPECT_THROW(mc_estimate(-1, ScalarField::real, 10, 1), DomainError);
}

TEST(MonteCarlo, BoundsOfDeterminants)
{
    MCResult r = mc_estimate(0, ScalarField::complex, 20000, 4);
    EXPECT_GE(r.min_ptdet, -1.0 / 16);
    EXPECT_LE(r.max_ptdet, 1.0 / 256);
    EXPECT_LE(r.max_diff, 1.0 / 256);
    EXPECT_LT(r.min_ptdet, 0);
    EXPECT_GE(r.count_p, r.count_q);
}

struct McCase {
    int k;
    ScalarField field;
};

class MonteCarloAgreement : public ::testing::TestWithParam<McCase> {};

TEST_P(MonteCarloAgreement, MatchesExactWithinFourSigma)
{
    McCase c = GetParam();
    Rational alpha = field_alpha(c.field);
    MCResult r = mc_estimate(c.k, c.field, 30000, 20240601 + static_cast<std::uint64_t>(c.k));
    double qe = q_value(c.k, alpha).approx(64).to_double();
    double pe = p_total_closed(c.k, alpha).approx(64).to_double();
    EXPECT_LT(std::abs(r.q_hat - qe), 4 * std::sqrt(qe * (1 - qe) / 30000)) << r.q_hat << " vs " << qe;
    EXPECT_LT(std::abs(r.p_hat - pe), 4 * std::sqrt(pe * (1 - pe) / 30000)) << r.p_hat << " vs " << pe;
}

INSTANTIATE_TEST_SUITE_P(Fields, MonteCarloAgreement,
                         ::testing::Values(McCase{0, ScalarField::real}, McCase{0, ScalarField::complex},
                                           McCase{0, ScalarField::quaternion}, McCase{1, ScalarField::real},
                                           McCase{1, ScalarField::complex}, McCase{1, ScalarField::quaternion}));
