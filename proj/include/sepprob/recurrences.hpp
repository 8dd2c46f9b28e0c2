/**
 * @file recurrences.hpp
 * @brief First-order inhomogeneous recurrences p0(a) + p1(a) y(a) + p2(a) y(a+1) = 0
 * for the hypergeometric factor G2 of Q(k, a): evaluation, exact fitting by
 * fraction-free elimination, and structural checks of the polynomial coefficients.
 */
#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "poly.hpp"
#include "sepformulas.hpp"

namespace sepprob {

/// p0(a) + p1(a) y(a) + p2(a) y(a+1) = 0 with integer, content-free coefficients.
struct RecurrenceCandidate {
    RatPoly p0;
    RatPoly p1;
    RatPoly p2;

    Rational residual(const Rational& a, const Rational& y, const Rational& y_next) const
    {
        return p0(a) + p1(a) * y + p2(a) * y_next;
    }

    long total_degree() const { return p0.degree() + p1.degree() + p2.degree(); }
};

/// Degree bounds for p0, p1 and p2.
struct FitBounds {
    long d0;
    long d1;
    long d2;
    long unknowns() const { return d0 + d1 + d2 + 3; }
};

/// Rescales to integer coefficients with unit content and a positive leading coefficient.
inline RecurrenceCandidate normalize(RecurrenceCandidate r)
{
    Integer l = 1, g = 0;
    for (const RatPoly* p : {&r.p0, &r.p1, &r.p2})
        for (const auto& c : p->coeffs())
            mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
    for (const RatPoly* p : {&r.p0, &r.p1, &r.p2})
        for (const auto& c : p->coeffs()) {
            Rational v = c * Rational(l);
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_num_mpz_t());
        }
    if (g == 0)
        throw DomainError("normalize: all recurrence polynomials vanish");
    Rational s = make_rational(l, g);
    const RatPoly* first = !r.p2.is_zero() ? &r.p2 : !r.p1.is_zero() ? &r.p1 : &r.p0;
    if (sgn(first->lead()) < 0)
        s = -s;
    r.p0 = r.p0 * s;
    r.p1 = r.p1 * s;
    r.p2 = r.p2 * s;
    return r;
}

/// y(start), ..., y(start + n - 1) from y(start) = y1.
inline std::vector<Rational> eval_recurrence(const RecurrenceCandidate& rec, const Rational& y1, long n,
                                             long start = 1)
{
    if (n < 1)
        throw DomainError("eval_recurrence: n must be positive");
    std::vector<Rational> y{y1};
    for (long a = start; a < start + n - 1; ++a) {
        Rational A(a);
        Rational d = rec.p2(A);
        if (d == 0)
            throw DomainError("eval_recurrence: singular step, p2 vanishes at alpha = " + std::to_string(a));
        y.push_back(-(rec.p0(A) + rec.p1(A) * y.back()) / d);
    }
    return y;
}

/// True when every consecutive pair satisfies the recurrence.
inline bool verify_recurrence(const RecurrenceCandidate& rec, const std::vector<Rational>& seq, long start = 1)
{
    for (std::size_t i = 0; i + 1 < seq.size(); ++i)
        if (rec.residual(Rational(start + static_cast<long>(i)), seq[i], seq[i + 1]) != 0)
            return false;
    return true;
}

/**
 * Basis of the right nullspace of a rational matrix. Rows are cleared to
 * integers, reduced by fraction-free (Bareiss) elimination, and each free
 * column yields one basis vector by back substitution.
 */
inline std::vector<std::vector<Rational>> rational_nullspace(const std::vector<std::vector<Rational>>& rows,
                                                             std::size_t ncols)
{
    std::vector<std::vector<Integer>> m;
    m.reserve(rows.size());
    for (const auto& row : rows) {
        Integer l = 1, g = 0;
        for (const auto& x : row)
            mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
        std::vector<Integer> r(ncols);
        for (std::size_t j = 0; j < ncols; ++j) {
            Rational v = row[j] * Rational(l);
            r[j] = v.get_num();
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), r[j].get_mpz_t());
        }
        if (g == 0)
            continue;
        for (auto& x : r)
            mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
        m.push_back(std::move(r));
    }
    std::vector<std::size_t> pivots;
    Integer prev = 1;
    std::size_t rank = 0;
    for (std::size_t c = 0; c < ncols && rank < m.size(); ++c) {
        std::size_t p = rank;
        while (p < m.size() && m[p][c] == 0)
            ++p;
        if (p == m.size())
            continue;
        std::swap(m[p], m[rank]);
        const Integer piv = m[rank][c];
        for (std::size_t i = rank + 1; i < m.size(); ++i) {
            const Integer f = m[i][c];
            for (std::size_t j = c + 1; j < ncols; ++j) {
                Integer t = piv * m[i][j] - f * m[rank][j];
                mpz_divexact(m[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
            m[i][c] = 0;
        }
        // Entries left of c in lower rows are zero; rows above keep their scale.
        prev = piv;
        pivots.push_back(c);
        ++rank;
    }
    std::vector<bool> is_pivot(ncols, false);
    for (auto c : pivots)
        is_pivot[c] = true;
    std::vector<std::vector<Rational>> basis;
    for (std::size_t f = 0; f < ncols; ++f) {
        if (is_pivot[f])
            continue;
        std::vector<Rational> x(ncols, Rational(0));
        x[f] = 1;
        for (std::size_t r = rank; r-- > 0;) {
            std::size_t pc = pivots[r];
            Rational s = 0;
            for (std::size_t j = pc + 1; j < ncols; ++j)
                if (x[j] != 0)
                    s += Rational(m[r][j]) * x[j];
            x[pc] = -s / Rational(m[r][pc]);
        }
        basis.push_back(std::move(x));
    }
    return basis;
}

namespace detail {

inline std::vector<std::vector<Rational>> recurrence_rows(const std::vector<Rational>& seq, const FitBounds& b,
                                                          long start)
{
    std::vector<std::vector<Rational>> rows;
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
        Rational a(start + static_cast<long>(i));
        std::vector<Rational> r;
        r.reserve(static_cast<std::size_t>(b.unknowns()));
        Rational pw = 1;
        for (long d = 0; d <= std::max({b.d0, b.d1, b.d2}); ++d) {
            if (d <= b.d0)
                r.push_back(pw);
            pw *= a;
        }
        pw = 1;
        for (long d = 0; d <= b.d1; ++d, pw *= a)
            r.push_back(seq[i] * pw);
        pw = 1;
        for (long d = 0; d <= b.d2; ++d, pw *= a)
            r.push_back(seq[i + 1] * pw);
        rows.push_back(std::move(r));
    }
    return rows;
}

inline RecurrenceCandidate candidate_from_vector(const std::vector<Rational>& v, const FitBounds& b)
{
    auto slice = [&](std::size_t from, long d) {
        return RatPoly(std::vector<Rational>(v.begin() + static_cast<long>(from),
                                             v.begin() + static_cast<long>(from) + d + 1));
    };
    RecurrenceCandidate r{slice(0, b.d0), slice(static_cast<std::size_t>(b.d0 + 1), b.d1),
                          slice(static_cast<std::size_t>(b.d0 + b.d1 + 2), b.d2)};
    return normalize(r);
}

inline std::size_t coefficient_bits(const RecurrenceCandidate& r)
{
    std::size_t bits = 0;
    for (const RatPoly* p : {&r.p0, &r.p1, &r.p2})
        for (const auto& c : p->coeffs())
            bits = std::max(bits, mpz_sizeinbase(c.get_num_mpz_t(), 2));
    return bits;
}

inline std::vector<RecurrenceCandidate> candidates_at(const std::vector<Rational>& seq, const FitBounds& b,
                                                      long start)
{
    std::vector<RecurrenceCandidate> out;
    if (static_cast<long>(seq.size()) - 1 < b.unknowns() + 1)
        return out;
    for (const auto& v : rational_nullspace(recurrence_rows(seq, b, start), static_cast<std::size_t>(b.unknowns())))
        out.push_back(candidate_from_vector(v, b));
    std::sort(out.begin(), out.end(), [](const RecurrenceCandidate& x, const RecurrenceCandidate& y) {
        if (x.total_degree() != y.total_degree())
            return x.total_degree() < y.total_degree();
        return coefficient_bits(x) < coefficient_bits(y);
    });
    return out;
}

}  // namespace detail

/**
 * Minimal-degree recurrence within the bounds, verified against every pair.
 * The degree of p1 = p2 is minimized first, then the degree of p0. Requires
 * at least unknowns + 2 terms at the full bounds.
 */
inline std::optional<RecurrenceCandidate> fit_recurrence(const std::vector<Rational>& seq, const FitBounds& bounds,
                                                         long start = 1)
{
    if (bounds.d0 < 0 || bounds.d1 < 0 || bounds.d2 < 0)
        throw DomainError("fit_recurrence: degree bounds must be nonnegative");
    if (static_cast<long>(seq.size()) < bounds.unknowns() + 2)
        throw DomainError("fit_recurrence: sequence of length " + std::to_string(seq.size()) +
                          " too short for " + std::to_string(bounds.unknowns()) + " unknowns");
    auto exists = [&](const FitBounds& b) { return !detail::candidates_at(seq, b, start).empty(); };
    if (!exists(bounds))
        return std::nullopt;
    long d12 = std::max(bounds.d1, bounds.d2);
    for (long d = 0; d < d12; ++d)
        if (exists({bounds.d0, std::min(d, bounds.d1), std::min(d, bounds.d2)})) {
            d12 = d;
            break;
        }
    FitBounds b{bounds.d0, std::min(d12, bounds.d1), std::min(d12, bounds.d2)};
    long lo = 0, hi = bounds.d0;
    while (lo < hi) {
        long mid = (lo + hi) / 2;
        if (exists({mid, b.d1, b.d2}))
            hi = mid;
        else
            lo = mid + 1;
    }
    b.d0 = lo;
    for (const auto& c : detail::candidates_at(seq, b, start))
        if (verify_recurrence(c, seq, start))
            return c;
    return std::nullopt;
}

inline std::optional<RecurrenceCandidate> fit_recurrence(const std::vector<Rational>& seq, long degree_bound,
                                                         long start = 1)
{
    return fit_recurrence(seq, FitBounds{degree_bound, degree_bound, degree_bound}, start);
}

/// G2(k, a) = Q(k, a) / G1(k, a) for a = 1..alpha_max.
inline std::vector<Rational> g2_sequence(long k, long alpha_max)
{
    if (k < -1)
        throw DomainError("g2_sequence: k must be >= -1");
    if (alpha_max < 3)
        throw DomainError("g2_sequence: alpha_max must be >= 3");
    std::vector<Rational> s;
    for (long a = 1; a <= alpha_max; ++a)
        s.push_back(q_integer_alpha(k, a) / g1_factor(k, a));
    return s;
}

/// Irreducible inhomogeneous factors for k = -1..4; k = 4 includes its (4a + 9) factor.
inline RatPoly reference_p0(long k)
{
    using detail::poly_from_ints;
    switch (k) {
    case -1:
    case 0:
    case 1:
    case 3: return concise_poly(k);
    case 2:
        return poly_from_ints({22004136, 100092606, 192332891, 202090226, 125164535, 45576950, 9002000, 740000});
    case 4:
        return poly_from_ints({9, 4}) *
               poly_from_ints({175452420, 522054355, 656629192, 451645197, 182972656, 43492140, 5584000, 296000});
    default: throw DomainError("reference_p0: k must lie in -1..4");
    }
}

/// prod (u_ik - 1) as a polynomial in alpha.
inline RatPoly upper_minus_one_product(long k)
{
    ParamOffsets p = param_offsets(k);
    RatPoly r(1);
    for (const auto& u : p.upper)
        r = r * RatPoly::linear(u - 1);
    return r;
}

/// prod b_ik as a polynomial in alpha.
inline RatPoly lower_product(long k)
{
    ParamOffsets p = param_offsets(k);
    RatPoly r(1);
    for (const auto& b : p.lower)
        r = r * RatPoly::linear(b);
    return r;
}

/// prod b_ik (b_ik - 1) as a polynomial in alpha.
inline RatPoly lower_pair_product(long k)
{
    ParamOffsets p = param_offsets(k);
    RatPoly r(1);
    for (const auto& b : p.lower)
        r = r * RatPoly::linear(b) * RatPoly::linear(b - 1);
    return r;
}

/// True when |n| = 37 * 2^a * 5^b.
inline bool is_37_times_2_5_power(Integer n)
{
    n = abs(n);
    if (n == 0 || n % 37 != 0)
        return false;
    n /= 37;
    while (n % 2 == 0)
        n /= 2;
    while (n % 5 == 0)
        n /= 5;
    return n == 1;
}

struct StructuralReport {
    long k = 0;
    bool p2_proportional = false;
    Rational p2_ratio;
    bool p1_proportional = false;
    Rational p1_ratio;
    bool p0_divisible = false;      ///< prod b(b-1) * reference_p0 divides p0
    RatPoly p0_cofactor;            ///< p0 / (prod b(b-1) * reference_p0) when divisible
    bool p0_proportional = false;   ///< cofactor is constant
    bool lead_37_2_5 = false;       ///< leading coefficient of the reference factor(s)
    std::vector<std::string> failures;

    bool all_hold() const { return p2_proportional && p1_proportional && p0_divisible; }
};

namespace detail {

inline bool proportional(const RatPoly& a, const RatPoly& b, Rational& ratio)
{
    if (a.is_zero() || b.is_zero() || a.degree() != b.degree())
        return false;
    ratio = a.lead() / b.lead();
    return a == b * ratio;
}

}  // namespace detail

inline StructuralReport structural_check(const RecurrenceCandidate& rec, long k)
{
    StructuralReport r;
    r.k = k;
    r.p2_proportional = detail::proportional(rec.p2, upper_minus_one_product(k), r.p2_ratio);
    if (!r.p2_proportional)
        r.failures.push_back("p2");
    r.p1_proportional = detail::proportional(rec.p1, lower_product(k), r.p1_ratio);
    if (!r.p1_proportional)
        r.failures.push_back("p1");
    RatPoly ref = reference_p0(k);
    RatPoly base = lower_pair_product(k) * ref;
    if (!rec.p0.is_zero()) {
        auto [q, rem] = RatPoly::divmod(rec.p0, base);
        r.p0_divisible = rem.is_zero();
        if (r.p0_divisible) {
            r.p0_cofactor = q;
            r.p0_proportional = q.degree() == 0;
        }
    }
    if (!r.p0_divisible)
        r.failures.push_back("p0");
    Integer lead = ref.integerized().first.back();
    r.lead_37_2_5 = is_37_times_2_5_power(lead);
    if (k == 4)
        r.lead_37_2_5 = r.lead_37_2_5 && is_37_times_2_5_power(Integer(296000));
    return r;
}

}  // namespace sepprob
