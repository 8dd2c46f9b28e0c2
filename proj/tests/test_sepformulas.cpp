#include "sepprob/sepformulas.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace sepprob;
using sepprob::testing::q;

namespace {

bool exact_is(const SepValue& v, const Rational& r) { return v.is_rational() && v.rational() == r; }

Integer big(const char* s) { return Integer(s); }

}  // namespace

TEST(ParamOffsets, UpperSets)
{
    ParamOffsets p1 = param_offsets(1);
    EXPECT_EQ(p1.upper[0], q(11, 6));
    EXPECT_EQ(p1.upper[1], q(13, 6));
    std::vector<Rational> fifths1(p1.upper.begin() + 2, p1.upper.end());
    EXPECT_EQ(fifths1, (std::vector<Rational>{q(9, 5), q(11, 5), q(12, 5), q(13, 5)}));
    ParamOffsets p5 = param_offsets(5);
    EXPECT_EQ(p5.upper[0], q(19, 6));
    EXPECT_EQ(p5.upper[1], q(23, 6));
    std::vector<Rational> fifths5(p5.upper.begin() + 2, p5.upper.end());
    EXPECT_EQ(fifths5, (std::vector<Rational>{q(16, 5), q(17, 5), q(18, 5), q(19, 5)}));
    EXPECT_THROW(param_offsets(-2), DomainError);
}

TEST(ParamOffsets, SumsAreIntegral)
{
    for (long k = -1; k <= 30; ++k) {
        ParamOffsets p = param_offsets(k);
        Rational lower_sum = 0;
        for (const auto& b : p.lower)
            lower_sum += b;
        EXPECT_EQ(lower_sum, 3 * Rational(k) + q(33, 2)) << k;
        EXPECT_TRUE(is_integer(p.upper[0] + p.upper[1])) << k;
        EXPECT_TRUE(is_integer(p.upper[2] + p.upper[3] + p.upper[4] + p.upper[5])) << k;
    }
}

TEST(MCount, Table)
{
    EXPECT_EQ(m_count(-1), 3);
    EXPECT_EQ(m_count(0), 5);
    EXPECT_EQ(m_count(9), 10);
    EXPECT_THROW(m_count(10), DomainError);
}

TEST(G1Factor, Values)
{
    for (long k = -1; k <= 9; ++k)
        EXPECT_EQ(g1_factor(k, 1), q(1)) << k;
    EXPECT_EQ(g1_factor(0, 2), q(9, 3034));
    EXPECT_EQ(g1_factor(1, 3), q(831402, 5687164735L));
    EXPECT_EQ(q_integer_alpha(1, 3), q(12689, 620310));
}

TEST(HTerm, Values)
{
    EXPECT_EQ(h_term(q(1), 0), q(1));
    EXPECT_EQ(h_term(q(1), 1), q(23, 33));
    std::vector<Rational> t = h_terms(q(2), 4);
    ASSERT_EQ(t.size(), 5u);
    for (unsigned long j = 0; j < 5; ++j)
        EXPECT_EQ(t[j], h_term(q(2), j));
}

TEST(QAtNegAlpha, Values)
{
    EXPECT_TRUE(exact_is(q_at_neg_alpha(q(1)), q(1, 14)));
    EXPECT_TRUE(exact_is(q_at_neg_alpha(q(0)), q(1, 2)));
    EXPECT_TRUE(exact_is(q_at_neg_alpha(q(2)), q(3, 286)));
    EXPECT_TRUE(q_at_neg_alpha(q(1, 2)).approx(128).contains(q(3, 16)));
}

TEST(QAtNegAlpha, MatchesFiniteSumStart)
{
    for (long a = 0; a <= 12; ++a)
        EXPECT_TRUE(exact_is(q_at_neg_alpha(q(a)), q_integer_alpha(-a, a))) << a;
}

TEST(QIntegerAlpha, Values)
{
    EXPECT_EQ(q_integer_alpha(0, 1), q(4, 33));
    EXPECT_EQ(q_integer_alpha(1, 1), q(45, 286));
    EXPECT_EQ(q_integer_alpha(2, 1), q(1553, 8398));
    EXPECT_EQ(q_integer_alpha(0, 2), q(13, 323));
    EXPECT_EQ(q_integer_alpha(-1, 2), q(11, 442));
    EXPECT_EQ(q_integer_alpha(3, 2), q(3439, 41354));
    EXPECT_EQ(q_integer_alpha(9, 1), make_rational(big("13988600951"), big("49611697974")));
    EXPECT_THROW(q_integer_alpha(-3, 2), DomainError);
}

TEST(QIntegerAlpha, ExtendedRoots)
{
    EXPECT_EQ(q_integer_extended(-2, 1), q(0));
    EXPECT_EQ(q_integer_extended(-3, 2), q(0));
    EXPECT_EQ(located_roots(1), (std::vector<long>{-2, -3}));
    EXPECT_EQ(located_roots(2), (std::vector<long>{-3, -4, -5}));
}

TEST(QIntegerAlpha, MonotoneInK)
{
    for (long a = 1; a <= 3; ++a)
        for (long k = -1; k < 9; ++k)
            EXPECT_LT(q_integer_alpha(k, a), q_integer_alpha(k + 1, a)) << k << " " << a;
    for (long k = -1; k < 9; ++k) {
        BoundedFloat lo = q_value(k, q(1, 2)).approx(128), hi = q_value(k + 1, q(1, 2)).approx(128);
        EXPECT_TRUE((hi - lo).certainly_positive()) << k;
    }
}

TEST(QValue, BoundedBelowHalf)
{
    for (const Rational& a : {q(1, 2), q(1), q(3, 2), q(2), q(3)})
        for (long k = 0; k <= 9; ++k) {
            BoundedFloat v = q_value(k, a).approx(128);
            EXPECT_TRUE(v.certainly_positive()) << k << " " << a;
            EXPECT_TRUE((Rational(q(1, 2)) - v).certainly_positive()) << k << " " << a;
        }
}

TEST(QMaster, Values)
{
    SepValue h = q_master(0, q(1, 2), 128);
    EXPECT_TRUE(h.approx(128).contains(q(29, 128)));
    EXPECT_LT(h.approx(128).error_double(), 1e-30);
    EXPECT_TRUE(q_master(0, q(2), 128).approx(128).contains(q(13, 323)));
    EXPECT_TRUE(q_master(3, q(2), 128).approx(128).contains(q(3439, 41354)));
    EXPECT_TRUE(q_master(0, q(1), 128).approx(128).contains(q(4, 33)));
    EXPECT_THROW(q_master(0, q(-1, 2), 128), DomainError);
}

TEST(QMaster, AgreesWithFiniteSums)
{
    for (long a = 1; a <= 4; ++a)
        for (long k = -a; k <= 4; ++k)
            EXPECT_TRUE(q_master(k, q(a), 128).approx(128).contains(q_integer_alpha(k, a))) << k << " " << a;
}

TEST(QMaster, ZeroAtWindowStart)
{
    for (long a = 1; a <= 6; ++a)
        EXPECT_TRUE(q_master(-a - 1, q(a), 160).approx(160).contains(0)) << a;
}

TEST(QClosedForm, Values)
{
    EXPECT_TRUE(exact_is(q_closed_form(0, q(1, 2)), q(29, 128)));
    EXPECT_TRUE(exact_is(q_closed_form(-2, q(1)), q(0)));
    EXPECT_TRUE(q_closed_form(0, q(-1, 4)).approx(128).contains(1));
    EXPECT_TRUE(exact_is(q_closed_form(2, q(-1, 2)), q(13, 16)));
    EXPECT_TRUE(exact_is(q_closed_form(1, q(2)), q_integer_alpha(1, 2)));
    EXPECT_THROW(q_closed_form(0, q(1, 3)), DomainError);
}

TEST(QClosedForm, NegHalfOverride)
{
    for (long k : {-1L, 0L}) {
        SepValue v = q_closed_form(k, q(-1, 2));
        EXPECT_TRUE(exact_is(v, q(1, 2)));
        EXPECT_EQ(v.flag, kFlagOverride);
    }
    EXPECT_TRUE(q_closed_form(3, q(-1, 2)).flag.empty());
}

TEST(QClosedForm, OutsideRangeFlag)
{
    SepValue v = q_closed_form(-1, q(-1, 4));
    EXPECT_EQ(v.flag, kFlagOutsideRange);
    BoundedFloat L = NamedConstants::lemniscate_L(128);
    EXPECT_TRUE(v.approx(128).overlaps(Rational(1) + q(4, 5) / L));
    BoundedFloat observed = q_concise_sum(-1, q(-1, 4), 1e-25).approx(128);
    EXPECT_TRUE(observed.overlaps(Rational(1) + q(8, 5) / L));
}

TEST(QClosedForm, CatalogMatchesMaster)
{
    for (const auto& e : closed_form_catalog()) {
        if (sgn(e.alpha) <= 0)
            continue;
        for (long k = e.k_min; k <= e.k_max; ++k)
            EXPECT_TRUE(q_closed_form(k, e.alpha).approx(128).overlaps(q_master(k, e.alpha, 128).approx(128)))
                << k << " " << e.alpha;
    }
}

TEST(QClosedForm, QuarterSeriesPrinted)
{
    BoundedFloat L = NamedConstants::lemniscate_L(160);
    EXPECT_TRUE(q_closed_form(1, q(-1, 4)).approx(128).overlaps(Rational(1) - q(4, 5) / L));
    EXPECT_TRUE(q_closed_form(2, q(-1, 4)).approx(128).overlaps(Rational(1) - q(184, 195) / L));
    EXPECT_TRUE(q_closed_form(3, q(-1, 4)).approx(128).overlaps(Rational(1) - q(1116, 1105) / L));
}

TEST(SuccessiveDiff, Values)
{
    EXPECT_TRUE(exact_is(q_successive_diff(0, q(1)), q(31, 858)));
    EXPECT_TRUE(exact_is(q_successive_diff(1, q(1)), q(1553, 8398) - q(45, 286)));
    EXPECT_TRUE(exact_is(q_successive_diff(-2, q(1)), q(1, 14)));
}

TEST(SuccessiveDiff, Telescoping)
{
    for (long a = 1; a <= 12; ++a)
        for (long k = -a; k <= 9; ++k)
            EXPECT_TRUE(exact_is(q_successive_diff(k, q(a)), q_integer_alpha(k + 1, a) - q_integer_alpha(k, a)))
                << k << " " << a;
}

TEST(SuccessiveDiff, HalfAlpha)
{
    BoundedFloat d = q_successive_diff(0, q(1, 2)).approx(128);
    EXPECT_TRUE(d.contains(q(281, 1024) - q(29, 128)));
}

TEST(ConciseSum, Values)
{
    EXPECT_TRUE(q_concise_sum(0, q(1), 1e-25).approx(128).overlaps(BoundedFloat::from_rational(q(4, 33), 128)));
    for (const auto& [k, a, v] : std::vector<std::tuple<long, Rational, Rational>>{
             {0, q(1), q(4, 33)},
             {-1, q(1, 2), q(1, 8)},
             {3, q(1, 2), q(84883, 262144)},
             {1, q(1), q(45, 286)},
             {-1, q(2), q(11, 442)}}) {
        double gap = std::fabs((q_concise_sum(k, a, 1e-25).approx(128) - v).to_double());
        EXPECT_LT(gap, 1e-25) << k << " " << a;
    }
    EXPECT_THROW(q_concise_sum(2, q(1)), DomainError);
}

TEST(ConciseSum, NamedConstantValues)
{
    const mpfr_prec_t p = 160;
    BoundedFloat C2 = NamedConstants::baxter_C2(p), L = NamedConstants::lemniscate_L(p);
    BoundedFloat G = NamedConstants::gauss_G(p), W = NamedConstants::omega1_im(p);
    auto near = [](const SepValue& v, const BoundedFloat& ref) {
        return std::fabs((v.approx(160) - ref).to_double()) < 1e-25;
    };
    EXPECT_TRUE(near(q_concise_sum(-1, q(2, 3), 1e-30), Rational(1) - C2 * q(27, 44)));
    EXPECT_TRUE(near(q_concise_sum(-1, q(1, 4), 1e-30), Rational(1) - G));
    EXPECT_TRUE(near(q_concise_sum(-1, q(-1, 4), 1e-30), Rational(1) + q(8, 5) / L));
    EXPECT_TRUE(near(q_concise_sum(1, q(-1, 4), 1e-30), Rational(1) - q(4, 5) / L));
    EXPECT_TRUE(near(q_concise_sum(-1, q(-2, 3), 1e-30), Rational(1) - q(163, 1008) / W));
    EXPECT_TRUE(near(q_concise_sum(0, q(-1, 3), 1e-30), Rational(1) + C2 * q(1, 2)));
    EXPECT_TRUE(near(q_concise_sum(1, q(-1, 3), 1e-30), Rational(1) - C2 * q(3, 20)));
}

TEST(ConciseSum, ThirdSeriesAtMinusOne)
{
    BoundedFloat C2 = NamedConstants::baxter_C2(160);
    SepValue v = q_concise_sum(-1, q(-1, 3), 1e-30);
    EXPECT_LT(std::fabs((v.approx(160) - (Rational(1) + C2 * q(19, 60))).to_double()), 1e-25);
    // Q(0,a) - Q(-1,a) from the gamma-ratio difference formula at a = -1/3
    const mpfr_prec_t w = 192;
    BoundedFloat d = gamma_ratio_numeric({q(1, 2), q(-1, 6), q(-1, 2), q(-5, 3)},
                                         {q(1, 6), q(2, 3), q(-1, 3), q(-1, 6), q(1, 2), q(5, 6)}, w) *
                     pow(q(3), q(0), w) * sqrt(BoundedFloat::pi(w)) * q(11, 18);
    BoundedFloat q0 = q_concise_sum(0, q(-1, 3), 1e-30).approx(160);
    EXPECT_LT(std::fabs((q0 - v.approx(160) - d).to_double()), 1e-25);
    EXPECT_LT(std::fabs((d - (C2 * q(1, 2) - C2 * q(19, 60))).to_double()), 1e-25);
}

TEST(PTotal, Values)
{
    EXPECT_TRUE(exact_is(p_total_closed(1, q(1)), q(61, 143)));
    EXPECT_TRUE(exact_is(p_total_closed(0, q(1)), q(8, 33)));
    EXPECT_TRUE(exact_is(p_total_closed(0, q(1, 2)), q(29, 64)));
    EXPECT_TRUE(exact_is(p_total_closed(-4, q(1)), q(5, 2)));
    EXPECT_TRUE(exact_is(p_total_closed(-5, q(1)), q(19, 4)));
    EXPECT_TRUE(exact_is(p_total_closed(-6, q(2)), q(-1)));
}

TEST(Complement, Values)
{
    EXPECT_TRUE(exact_is(complement_prob(1, q(1)), q(7, 26)));
    EXPECT_TRUE(exact_is(complement_prob(0, q(1)), q(4, 33)));
    for (const Rational& a : {q(1, 2), q(1), q(2)})
        EXPECT_TRUE(complement_prob(-1, a).approx(128).contains(0)) << a;
}

TEST(Envelope, Values)
{
    EXPECT_TRUE(exact_is(p_envelope(0, q(1)), q(1, 8448)));
    EXPECT_THROW(p_envelope(-5, q(1)), PoleError);
}

TEST(RootWindow, Values)
{
    RootWindow w1 = root_window(q(1));
    EXPECT_EQ(w1.k_start, q(-2));
    EXPECT_EQ(w1.count, q(1));
    EXPECT_EQ(w1.k_end, q(-3));
    EXPECT_EQ(root_window(q(2)).k_start, q(-3));
    RootWindow h = root_window(q(1, 2));
    EXPECT_TRUE(h.complex_parity);
    EXPECT_EQ(h.k_end, q(3, 2));
    EXPECT_EQ(h.k_end_imag, q(1, 4));
    EXPECT_THROW(root_window(q(1, 3)), DomainError);
}

TEST(RootWindow, LocatedRootsExceedCountByOne)
{
    for (long a = 1; a <= 4; ++a) {
        RootWindow w = root_window(q(a));
        auto roots = located_roots(a);
        EXPECT_EQ(Rational(static_cast<long>(roots.size())), w.count + 1) << a;
        EXPECT_EQ(roots.front(), -a - 1);
        for (std::size_t i = 1; i < roots.size(); ++i)
            EXPECT_EQ(roots[i], roots[i - 1] - 1);
    }
}

TEST(Boundary, Values)
{
    BoundaryValues b1 = boundary_values(1), b2 = boundary_values(2);
    EXPECT_EQ(b1.p_boundary, q(5, 2));
    EXPECT_EQ(b2.p_boundary, q(-1));
    EXPECT_EQ(b2.q_real, q(1, 2));
    EXPECT_EQ(b1.q_real, q(-1, 4));
    EXPECT_EQ(boundary_values(4).p_boundary, q(1));
    EXPECT_EQ(b1.p_boundary, p_total_closed(-4, q(1)).rational());
    EXPECT_EQ(b2.p_boundary, p_total_closed(-6, q(2)).rational());
}

TEST(Limits, Values)
{
    auto lim = [](long a, LimitCase c) { return limit_values(q(a), c); };
    LimitValue v = lim(1, LimitCase::k_neg1_neg4a);
    EXPECT_EQ(v.k, q(-5));
    ASSERT_TRUE(v.value);
    EXPECT_TRUE(exact_is(*v.value, q(19, 4)));
    EXPECT_TRUE(exact_is(*v.value, p_total_closed(-5, q(1)).rational()));
    EXPECT_TRUE(exact_is(*lim(1, LimitCase::k_neg2_neg4a).value, q(43, 4)));
    EXPECT_TRUE(exact_is(*lim(2, LimitCase::k_neg2_neg4a).value, q(142)));
    EXPECT_TRUE(exact_is(*lim(2, LimitCase::k_neg1_neg4a).value, q(211, 4)));
    EXPECT_TRUE(exact_is(*lim(1, LimitCase::k_neg3h_neg5a2).value, q(5, 2)));
    EXPECT_EQ(lim(4, LimitCase::k_neg1_neg5a2).kind, LimitKind::plus_one);
    EXPECT_EQ(lim(2, LimitCase::k_neg1_neg5a2).kind, LimitKind::minus_one);
    EXPECT_EQ(lim(1, LimitCase::k_neg1_neg5a2).kind, LimitKind::minus_infinity);
    EXPECT_EQ(lim(3, LimitCase::k_neg1_neg5a2).kind, LimitKind::plus_infinity);
    LimitValue e = lim(2, LimitCase::k_neg5a2);
    ASSERT_TRUE(e.value);
    EXPECT_EQ(e.value->kind, ProbKind::q_partial);
    EXPECT_THROW(limit_values(q(1, 2), LimitCase::k_neg1_neg5a2), DomainError);
}

TEST(Limits, ClosedFormContinuity)
{
    for (long a = 1; a <= 2; ++a) {
        LimitValue v = limit_values(q(a), LimitCase::k_neg2_neg4a);
        EXPECT_TRUE(exact_is(*v.value, p_total_closed(to_long(v.k), q(a)).rational())) << a;
    }
}

TEST(Identity, HalfSum)
{
    IdentityCheck c0 = half_sum_identity_check(q(0), 256);
    EXPECT_TRUE(c0.lhs.contains(1));
    EXPECT_TRUE(c0.rhs.contains(1) || c0.rhs.overlaps(BoundedFloat::from_rational(1, 256)));
    EXPECT_TRUE(c0.holds);
    for (const Rational& a : {q(1), q(1, 3), q(1, 2), q(7, 10)}) {
        IdentityCheck c = half_sum_identity_check(a, 256);
        EXPECT_TRUE(c.holds) << a;
        EXPECT_LT(c.residual.error_double(), 1e-25) << a;
    }
    IdentityCheck c2 = half_sum_identity_check(q(2), 256);
    EXPECT_TRUE(c2.hyper2_half);
    EXPECT_THROW(half_sum_identity_check(q(-1, 8)), DomainError);
}

TEST(LeadingCoeffs, Values)
{
    EXPECT_EQ(leading_coeffs(1, 1), q(17, 2));
    EXPECT_EQ(leading_coeffs(2, 1), q(3, 2));
    EXPECT_EQ(leading_coeffs(4, 1), q(0));
    EXPECT_EQ(leading_coeffs(1, 3), q(4913, 48));
    EXPECT_THROW(leading_coeffs(8, 1), DomainError);
}

TEST(Exterior, Values)
{
    EXPECT_NEAR(exterior_probabilities(ExteriorCase::insphere_qubit).to_double(), 0.240357, 5e-7);
    EXPECT_NEAR(exterior_probabilities(ExteriorCase::insphere_rebit).to_double(), 0.453124868, 5e-10);
    EXPECT_NEAR(exterior_probabilities(ExteriorCase::abssep_rebit).to_double(), 0.433387744, 5e-10);
    EXPECT_NEAR(exterior_probabilities(ExteriorCase::abssep_qubit_numeric).to_double(), 0.239643, 1e-12);
}

TEST(Ratios, FirstPart)
{
    for (long a = 1; a <= 5; ++a)
        EXPECT_TRUE(q1_minus_q0(q(a), 128).contains(q_integer_alpha(1, a) - q_integer_alpha(0, a))) << a;
    EXPECT_EQ(pq_ratio_firstpart(1) * (q_integer_alpha(1, 1) - q_integer_alpha(0, 1)), q(16, 9));
    EXPECT_THROW(pq_ratio_firstpart(0), DomainError);
}

TEST(Asymptotics, LogRatioTendsToSixteenTwentySevenths)
{
    const mpfr_prec_t p = 256;
    BoundedFloat l200 = log(p_total_closed(200, q(1, 2), p).approx(p));
    BoundedFloat l201 = log(p_total_closed(201, q(1, 2), p).approx(p));
    EXPECT_LT(std::fabs((l201 / l200).to_double() - 16.0 / 27.0), 5e-3);
}
