/**
 * @file hyperg.hpp
 * @brief Generalized hypergeometric sums: exact terminating, certified numeric,
 * regularized, plus digamma and the Lerch transcendent at z = -1, s = 1.
 */
#pragma once

#include <string>
#include <vector>

#include "bounded_float.hpp"
#include "series.hpp"

namespace sepprob {

/// pFq(upper; lower; argument).
struct HyperSeries {
    std::vector<Rational> upper;
    std::vector<Rational> lower;
    Rational argument;

    HyperSeries() = default;
    HyperSeries(std::vector<Rational> up, std::vector<Rational> lo, Rational z)
        : upper(std::move(up)), lower(std::move(lo)), argument(std::move(z))
    {
        to_ratio_series().validate();
    }

    /// Sum of lower minus sum of upper parameters.
    Rational parameter_excess() const
    {
        Rational s = 0;
        for (const auto& b : lower)
            s += b;
        for (const auto& a : upper)
            s -= a;
        return s;
    }

    bool terminates() const { return to_ratio_series().last_term().has_value(); }

    /// Term ratio with equal regular parameter pairs cancelled.
    RatioSeries to_ratio_series() const
    {
        RatioSeries s;
        s.scale = argument;
        std::vector<Rational> lo = lower;
        lo.push_back(1);
        std::vector<bool> used(lo.size(), false);
        for (const auto& a : upper) {
            bool cancelled = false;
            if (!is_nonpositive_integer(a)) {
                for (std::size_t i = 0; i < lo.size(); ++i)
                    if (!used[i] && lo[i] == a) {
                        used[i] = true;
                        cancelled = true;
                        break;
                    }
            }
            if (!cancelled)
                s.upper.push_back(a);
        }
        for (std::size_t i = 0; i < lo.size(); ++i)
            if (!used[i])
                s.lower.push_back(lo[i]);
        return s;
    }

    std::string to_string() const
    {
        std::string r = std::to_string(upper.size()) + "F" + std::to_string(lower.size()) + "(";
        for (std::size_t i = 0; i < upper.size(); ++i)
            r += (i ? "," : "") + upper[i].get_str();
        r += ";";
        for (std::size_t i = 0; i < lower.size(); ++i)
            r += (i ? "," : "") + lower[i].get_str();
        return r + ";" + argument.get_str() + ")";
    }
};

inline Rational pfq_exact(const HyperSeries& s)
{
    RatioSeries r = s.to_ratio_series();
    if (!r.last_term())
        throw ModeError("pfq_exact: series " + s.to_string() + " does not terminate");
    return sum_terminating(r);
}

inline BoundedFloat pfq_numeric(const HyperSeries& s, mpfr_prec_t precision_bits)
{
    RatioSeries r = s.to_ratio_series();
    if (r.last_term())
        return BoundedFloat::from_rational(sum_terminating(r), precision_bits);
    Rational az = abs(s.argument);
    if (az > 1 || (az == 1 && s.upper.size() > s.lower.size() + 1))
        throw ConvergenceError("pfq_numeric: divergent series " + s.to_string());
    if (az == 1 && s.upper.size() == s.lower.size() + 1 && sgn(s.parameter_excess()) <= 0)
        throw ConvergenceError("pfq_numeric: parameter excess not positive for " + s.to_string());
    return sum_certified(r, precision_bits).value;
}

/// pfq divided by the product of Gamma over the lower parameters.
inline BoundedFloat pfq_regularized(const HyperSeries& s, mpfr_prec_t precision_bits)
{
    for (const auto& b : s.lower)
        if (sgn(b) <= 0)
            throw PoleError("pfq_regularized: nonpositive lower parameter " + b.get_str());
    mpfr_prec_t w = precision_bits + 32;
    BoundedFloat v = pfq_numeric(s, w);
    for (const auto& b : s.lower)
        v = v / gamma(b, w);
    return v.rounded(precision_bits);
}

/// Phi(-1, 1, b) = sum (-1)^i / (i + b) = (psi((b+1)/2) - psi(b/2)) / 2.
inline BoundedFloat lerch_phi_neg1(const Rational& b, mpfr_prec_t precision_bits)
{
    if (sgn(b) <= 0)
        throw PoleError("lerch_phi_neg1: b must be positive");
    mpfr_prec_t w = precision_bits + 16;
    BoundedFloat d = digamma((b + 1) / 2, w) - digamma(b / 2, w);
    return (d * make_rational(1, 2)).rounded(precision_bits);
}

}  // namespace sepprob
