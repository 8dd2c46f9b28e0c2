/**
 * @file cli.hpp
 * @brief Command-line front end: eval, table, asymptotics, mc, reconstruct,
 * fitrec and check, with CSV and JSON output.
 */
#pragma once

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "momentdensity.hpp"
#include "randstates.hpp"
#include "recurrences.hpp"
#include "sepformulas.hpp"

namespace sepprob {

using ojson = nlohmann::ordered_json;

class IOError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum ExitCode { exit_ok = 0, exit_domain = 1, exit_convergence = 2, exit_io = 3 };

// ---------------------------------------------------------------------------
// Ranges and least squares.

/// Inclusive rational range "a..b[:step]" or a single value.
inline std::vector<Rational> parse_rational_range(const std::string& text)
{
    auto dots = text.find("..");
    if (dots == std::string::npos)
        return {parse_rational(text)};
    std::string rest = text.substr(dots + 2);
    Rational step = 1;
    auto colon = rest.find(':');
    if (colon != std::string::npos) {
        step = parse_rational(rest.substr(colon + 1));
        rest = rest.substr(0, colon);
    }
    Rational a = parse_rational(text.substr(0, dots)), b = parse_rational(rest);
    if (sgn(step) <= 0)
        throw DomainError("range step must be positive in '" + text + "'");
    if (b < a)
        throw DomainError("empty range '" + text + "'");
    std::vector<Rational> r;
    for (Rational x = a; x <= b; x += step)
        r.push_back(x);
    return r;
}

inline std::vector<long> parse_integer_range(const std::string& text)
{
    std::vector<long> r;
    for (const auto& x : parse_rational_range(text)) {
        if (!is_integer(x))
            throw DomainError("integer range expected, got " + x.get_str());
        r.push_back(to_long(x));
    }
    return r;
}

inline std::vector<Rational> parse_rational_list(const std::string& text)
{
    std::vector<Rational> r;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty())
            r.push_back(parse_rational(item));
    if (r.empty())
        throw DomainError("empty list '" + text + "'");
    return r;
}

/// Ordinary least squares y = slope x + intercept.
struct FitReport {
    std::vector<std::pair<double, double>> points;
    double slope = 0;
    double intercept = 0;
    double r_squared = 0;
};

inline FitReport ols_fit(std::vector<std::pair<double, double>> points)
{
    if (points.size() < 2)
        throw DomainError("ols_fit: need at least two points");
    long double n = static_cast<long double>(points.size()), sx = 0, sy = 0;
    for (const auto& [x, y] : points) {
        sx += x;
        sy += y;
    }
    long double mx = sx / n, my = sy / n, sxx = 0, sxy = 0, syy = 0;
    for (const auto& [x, y] : points) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    FitReport f;
    f.points = std::move(points);
    f.slope = static_cast<double>(sxy / sxx);
    f.intercept = static_cast<double>(my - sxy / sxx * mx);
    f.r_squared = syy == 0 ? 1.0 : static_cast<double>(std::clamp(sxy * sxy / (sxx * syy), 0.0L, 1.0L));
    return f;
}

// ---------------------------------------------------------------------------
// Serialization.

inline std::string decimal_string(const BoundedFloat& x, int digits = 30) { return x.value_string(digits); }

inline ojson to_json(const SepValue& v, int digits = 30)
{
    ojson j;
    j["kind"] = to_string(v.kind);
    if (v.exact) {
        j["exact"] = v.exact->coeff.get_str();
        j["sqrtpi_pow"] = v.exact->sqrtpi_pow;
    } else {
        j["exact"] = nullptr;
        j["sqrtpi_pow"] = 0;
    }
    BoundedFloat a = v.approx(std::max<mpfr_prec_t>(128, static_cast<mpfr_prec_t>(digits * 3.33) + 16));
    j["value"] = a.value_string(digits);
    j["error"] = a.error_string();
    j["flag"] = v.flag;
    return j;
}

inline ojson to_json(const MCResult& r)
{
    return ojson{{"k", r.k},
                 {"field", to_string(r.field)},
                 {"alpha", field_alpha(r.field).get_str()},
                 {"n_samples", r.n_samples},
                 {"seed", r.seed},
                 {"count_q", r.count_q},
                 {"count_p", r.count_p},
                 {"q_hat", r.q_hat},
                 {"p_hat", r.p_hat},
                 {"stderr_q", r.stderr_q},
                 {"stderr_p", r.stderr_p},
                 {"extremes",
                  {{"min_ptdet", r.min_ptdet}, {"max_ptdet", r.max_ptdet}, {"min_diff", r.min_diff},
                   {"max_diff", r.max_diff}}},
                 {"diff_moments", r.diff_moments},
                 {"diff_moment_se", r.diff_moment_se}};
}

inline ojson poly_json(const RatPoly& p)
{
    ojson a = ojson::array();
    for (const auto& c : p.coeffs())
        a.push_back(c.get_str());
    return a;
}

inline ojson to_json(const RecurrenceCandidate& r)
{
    return ojson{{"p0", poly_json(r.p0)}, {"p1", poly_json(r.p1)}, {"p2", poly_json(r.p2)}};
}

inline ojson to_json(const StructuralReport& s)
{
    return ojson{{"k", s.k},
                 {"p2_proportional", s.p2_proportional},
                 {"p2_ratio", s.p2_ratio.get_str()},
                 {"p1_proportional", s.p1_proportional},
                 {"p1_ratio", s.p1_ratio.get_str()},
                 {"p0_divisible", s.p0_divisible},
                 {"p0_proportional", s.p0_proportional},
                 {"p0_cofactor", poly_json(s.p0_cofactor)},
                 {"lead_37_2_5", s.lead_37_2_5},
                 {"failures", s.failures}};
}

inline ojson to_json(const FitReport& f)
{
    ojson pts = ojson::array();
    for (const auto& [x, y] : f.points)
        pts.push_back({x, y});
    return ojson{{"slope", f.slope}, {"intercept", f.intercept}, {"r_squared", f.r_squared}, {"points", pts}};
}

/// RFC 4180 field quoting.
inline std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\r\n") == std::string::npos)
        return s;
    std::string r = "\"";
    for (char c : s) {
        if (c == '"')
            r += '"';
        r += c;
    }
    return r + "\"";
}

inline std::string csv_row(const std::vector<std::string>& fields)
{
    std::string r;
    for (std::size_t i = 0; i < fields.size(); ++i)
        r += (i ? "," : "") + csv_field(fields[i]);
    return r + "\r\n";
}

// ---------------------------------------------------------------------------
// Commands.

struct RunConfig {
    std::string command;
    std::string what;
    long k = 0;
    std::string alpha;
    std::string k_range = "-1..9";
    std::string alpha_range;
    std::string alphas = "0,1/4,1/3,1/2,1,3/2,2,0.7";
    long alpha_max = 40;
    long prec = 128;
    std::uint64_t seed = 7;
    std::uint64_t samples = 1000000;
    unsigned threads = 1;
    std::string out;
    std::string format = "csv";
    long moments = 64;
    long deg = -1;
    long deg_p0 = -1;
    long deg_p12 = -1;
    double tol = 1e-30;
    std::string mode = "loglog-p";
    std::string kind = "diff";
    std::string support;
    std::string dump;
    long points = 200;

    std::string alpha_or(const std::string& d) const { return alpha.empty() ? d : alpha; }
    std::string alpha_range_or(const std::string& d) const { return alpha_range.empty() ? d : alpha_range; }
};

inline SepValue eval_value(const std::string& what, long k, const Rational& alpha, mpfr_prec_t prec)
{
    if (what == "q")
        return q_value(k, alpha, prec);
    if (what == "p")
        return p_total_closed(k, alpha, prec);
    if (what == "complement")
        return complement_prob(k, alpha, prec);
    if (what == "master")
        return q_master(k, alpha, prec);
    if (what == "closed")
        return q_closed_form(k, alpha, prec);
    if (what == "diff")
        return q_successive_diff(k, alpha, prec);
    if (what == "concise")
        return q_concise_sum(k, alpha, std::pow(2.0, -static_cast<double>(prec)));
    if (what == "envelope")
        return p_envelope(k, alpha, prec);
    throw DomainError("unknown quantity '" + what + "'");
}

inline std::string value_text(const SepValue& v, int digits = 30)
{
    std::string s = v.is_rational() ? v.rational().get_str() : v.approx().to_string(digits);
    if (v.exact && !v.is_rational())
        s = v.exact->to_string() + " = " + v.approx().to_string(digits);
    return s;
}

inline void emit(const RunConfig& c, const std::string& text, std::ostream& out)
{
    if (c.out.empty()) {
        out << text;
        return;
    }
    std::ofstream f(c.out, std::ios::binary);
    if (!f)
        throw IOError("cannot open '" + c.out + "' for writing");
    f << text;
    if (!f)
        throw IOError("write to '" + c.out + "' failed");
}

inline int cmd_eval(const RunConfig& c, std::ostream& out)
{
    Rational a = parse_rational(c.alpha_or("1"));
    SepValue v = eval_value(c.what, c.k, a, static_cast<mpfr_prec_t>(c.prec));
    int digits = static_cast<int>(c.prec * 0.30103);
    if (c.format == "json") {
        ojson j = to_json(v, digits);
        j["k"] = c.k;
        j["alpha"] = a.get_str();
        emit(c, j.dump(2) + "\n", out);
    } else {
        std::string s = value_text(v, digits);
        if (!v.flag.empty())
            s += " [" + v.flag + "]";
        emit(c, s + "\n", out);
    }
    return exit_ok;
}

/// One table cell: value text, natural log, mode.
struct TableCell {
    long k;
    Rational alpha;
    std::optional<SepValue> value;
    std::string error;
};

inline int cmd_table(const RunConfig& c, std::ostream& out, std::ostream& err)
{
    auto ks = parse_integer_range(c.k_range);
    auto as = parse_rational_range(c.alpha_range_or("1..10"));
    auto prec = static_cast<mpfr_prec_t>(c.prec);
    int digits = static_cast<int>(c.prec * 0.30103) - 2;
    std::vector<TableCell> cells;
    for (long k : ks)
        for (const auto& a : as) {
            TableCell cell{k, a, std::nullopt, ""};
            try {
                cell.value = eval_value(c.what, k, a, prec);
            } catch (const std::exception& e) {
                cell.error = e.what();
            }
            cells.push_back(std::move(cell));
        }
    auto log_text = [&](const SepValue& v) -> std::string {
        BoundedFloat x = v.approx(prec + 16);
        if (!x.certainly_positive())
            return "";
        return log(x).value_string(digits);
    };
    auto mode_text = [](const TableCell& t) -> std::string {
        if (!t.value)
            return "error";
        std::string m = t.value->is_rational() ? "exact" : "numeric";
        return t.value->flag.empty() ? m : m + "+" + t.value->flag;
    };
    std::string body;
    if (c.format == "json") {
        ojson rows = ojson::array();
        for (const auto& t : cells) {
            ojson r{{"k", t.k}, {"alpha", t.alpha.get_str()}, {"mode", mode_text(t)}};
            if (t.value) {
                r["value"] = t.value->is_rational() ? t.value->rational().get_str()
                                                    : t.value->approx().value_string(digits);
                r["log_value"] = log_text(*t.value);
            } else {
                r["value"] = "";
                r["log_value"] = "";
                r["error"] = t.error;
            }
            rows.push_back(r);
        }
        body = rows.dump(2) + "\n";
    } else {
        body = csv_row({"k", "alpha", "value", "log_value", "mode"});
        for (const auto& t : cells) {
            std::string v = !t.value ? "" : t.value->is_rational() ? t.value->rational().get_str()
                                                                   : t.value->approx().value_string(digits);
            body += csv_row({std::to_string(t.k), t.alpha.get_str(), v, t.value ? log_text(*t.value) : "",
                             mode_text(t)});
        }
    }
    emit(c, body, out);
    // Monotonicity in k at fixed alpha for Q.
    if (c.what == "q") {
        for (const auto& a : as) {
            const SepValue* prev = nullptr;
            for (const auto& t : cells) {
                if (t.alpha != a || !t.value)
                    continue;
                if (prev) {
                    bool inc = prev->is_rational() && t.value->is_rational()
                                   ? prev->rational() < t.value->rational()
                                   : (t.value->approx() - prev->approx()).certainly_positive();
                    if (!inc) {
                        err << "monotonicity violated at alpha = " << a.get_str() << ", k = " << t.k << "\n";
                        return exit_domain;
                    }
                }
                prev = &*t.value;
            }
        }
    }
    return exit_ok;
}

/// log(-log P(k, alpha)) for k in ks, from the exact complement F = 1 - P.
inline FitReport loglog_p_fit(const Rational& alpha, const std::vector<long>& ks, mpfr_prec_t prec)
{
    GammaTerm t = detail::p_closed_term(alpha);
    std::vector<std::pair<double, double>> pts;
    for (long k : ks) {
        Rational kk(k);
        BoundedFloat f = t.exact_at(kk) ? to_bounded_float(t.exact(kk), prec) : t.numeric(kk, prec);
        BoundedFloat lp = -log1p(-f);
        if (!lp.certainly_positive())
            throw DomainError("loglog-p: -log P not positive at k = " + std::to_string(k));
        pts.emplace_back(static_cast<double>(k), log(lp).to_double());
    }
    return ols_fit(std::move(pts));
}

/// Q(k, alpha + 1) / Q(k, alpha) for integer alpha from exact finite sums.
inline Rational q_alpha_ratio(long k, long alpha) { return q_integer_alpha(k, alpha + 1) / q_integer_alpha(k, alpha); }

inline int cmd_asymptotics(const RunConfig& c, std::ostream& out)
{
    auto prec = static_cast<mpfr_prec_t>(std::max<long>(c.prec, 256));
    ojson j;
    j["mode"] = c.mode;
    if (c.mode == "loglog-p") {
        Rational a = parse_rational(c.alpha_or("1/2"));
        std::vector<long> ks;
        for (long k = 1; k <= c.points; ++k)
            ks.push_back(k);
        FitReport f = loglog_p_fit(a, ks, prec);
        j["alpha"] = a.get_str();
        j["fit"] = to_json(f);
        j["reference"] = std::log(16.0 / 27.0);
        j["reference_label"] = "log(16/27)";
    } else if (c.mode == "p-log-ratio") {
        Rational a = parse_rational(c.alpha_or("1/2"));
        GammaTerm t = detail::p_closed_term(a);
        ojson rows = ojson::array();
        BoundedFloat prev_log = BoundedFloat::from_rational(0, prec);
        for (long k = 1; k <= c.points + 1; ++k) {
            Rational kk(k);
            BoundedFloat f = t.exact_at(kk) ? to_bounded_float(t.exact(kk), prec) : t.numeric(kk, prec);
            BoundedFloat lp = log1p(-f);
            if (k > 1)
                rows.push_back({{"k", k - 1}, {"ratio", (lp / prev_log).value_string(20)}});
            prev_log = lp;
        }
        j["alpha"] = a.get_str();
        j["ratios"] = rows;
        j["reference"] = 16.0 / 27.0;
        j["reference_label"] = "16/27";
    } else if (c.mode == "q-alpha-ratio") {
        long a = to_long(parse_rational(c.alpha_or("100")));
        ojson rows = ojson::array();
        for (long k : parse_integer_range(c.k_range)) {
            Rational r = q_alpha_ratio(k, a);
            rows.push_back({{"k", k}, {"ratio", BoundedFloat::from_rational(r, prec).value_string(20)}});
        }
        j["alpha"] = a;
        j["ratios"] = rows;
        j["reference"] = 27.0 / 64.0;
        j["reference_label"] = "27/64";
    } else if (c.mode == "q-alpha-slope") {
        std::string range = c.alpha_range_or("1..1451:50");
        std::vector<std::pair<double, double>> pts;
        for (const auto& a : parse_rational_range(range)) {
            Rational q = q_integer_alpha(c.k, to_long(a));
            pts.emplace_back(a.get_d(), log(BoundedFloat::from_rational(q, prec)).to_double());
        }
        j["k"] = c.k;
        j["fit"] = to_json(ols_fit(std::move(pts)));
        j["reference"] = std::log(27.0 / 64.0);
        j["reference_label"] = "log(27/64)";
    } else {
        throw DomainError("unknown asymptotics mode '" + c.mode + "'");
    }
    emit(c, j.dump(2) + "\n", out);
    return exit_ok;
}

inline void write_dump(const std::string& path, const std::vector<DeterminantPair>& d)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw IOError("cannot open '" + path + "' for writing");
    for (const auto& p : d) {
        f.write(reinterpret_cast<const char*>(&p.det_rho), sizeof(double));
        f.write(reinterpret_cast<const char*>(&p.det_pt), sizeof(double));
    }
    if (!f)
        throw IOError("write to '" + path + "' failed");
}

inline int cmd_mc(const RunConfig& c, std::ostream& out)
{
    if (c.samples < 10000)
        throw DomainError("mc: at least 10000 samples are required");
    ScalarField field = parse_field(c.alpha_or("1"));
    std::vector<DeterminantPair> dump;
    MCResult r = mc_estimate(static_cast<int>(c.k), field, c.samples, c.seed, c.threads,
                             c.dump.empty() ? nullptr : &dump);
    if (!c.dump.empty())
        write_dump(c.dump, dump);
    if (c.format == "csv") {
        std::ostringstream s;
        s << std::setprecision(17);
        s << csv_row({"k", "field", "n_samples", "seed", "q_hat", "p_hat", "stderr_q", "stderr_p"});
        auto d = [](double x) {
            std::ostringstream o;
            o << std::setprecision(17) << x;
            return o.str();
        };
        s << csv_row({std::to_string(r.k), to_string(r.field), std::to_string(r.n_samples), std::to_string(r.seed),
                      d(r.q_hat), d(r.p_hat), d(r.stderr_q), d(r.stderr_p)});
        emit(c, s.str(), out);
    } else {
        emit(c, to_json(r).dump(2) + "\n", out);
    }
    return exit_ok;
}

inline int cmd_reconstruct(const RunConfig& c, std::ostream& out)
{
    MomentSpec spec{parse_moment_kind(c.kind), c.k, parse_rational(c.alpha_or("1")), c.moments};
    spec.validate();
    long deg = c.deg < 0 ? c.moments : c.deg;
    if (deg > c.moments)
        throw DomainError("reconstruct: degree exceeds the number of moments");
    std::optional<SupportInterval> sup;
    if (!c.support.empty()) {
        auto v = parse_rational_list(c.support);
        if (v.size() != 2)
            throw DomainError("reconstruct: --support expects lo,hi");
        sup = SupportInterval{v[0], v[1]};
    }
    Reconstruction r = reconstruct(spec, deg, sup, static_cast<mpfr_prec_t>(c.prec));
    if (c.format == "csv") {
        std::string body = csv_row({"j", "lambda"});
        for (std::size_t j = 0; j < r.density.legendre_coeffs.size(); ++j)
            body += csv_row({std::to_string(j), r.density.legendre_coeffs[j].value_string(25)});
        emit(c, body, out);
    } else {
        ojson lam = ojson::array();
        for (const auto& x : r.density.legendre_coeffs)
            lam.push_back(x.value_string(25));
        ojson j{{"kind", to_string(spec.kind)},
                {"k", spec.k},
                {"alpha", spec.alpha.get_str()},
                {"degree", deg},
                {"support", {r.density.support.lo.get_str(), r.density.support.hi.get_str()}},
                {"tail", r.tail.value_string(25)},
                {"total_mass", r.density.total_mass().get_str()},
                {"legendre_coeffs", lam}};
        emit(c, j.dump(2) + "\n", out);
    }
    return exit_ok;
}

inline int cmd_fitrec(const RunConfig& c, std::ostream& out)
{
    std::vector<Rational> seq = g2_sequence(c.k, c.alpha_max);
    long d = c.deg < 0 ? 20 : c.deg;
    FitBounds b{c.deg_p0 < 0 ? d : c.deg_p0, c.deg_p12 < 0 ? (c.deg < 0 ? 6 : d) : c.deg_p12,
                c.deg_p12 < 0 ? (c.deg < 0 ? 6 : d) : c.deg_p12};
    ojson j{{"k", c.k}, {"alpha_max", c.alpha_max}, {"bounds", {b.d0, b.d1, b.d2}}};
    auto rec = fit_recurrence(seq, b);
    if (!rec) {
        j["found"] = false;
        emit(c, j.dump(2) + "\n", out);
        return exit_ok;
    }
    j["found"] = true;
    j["candidate"] = to_json(*rec);
    j["degrees"] = {rec->p0.degree(), rec->p1.degree(), rec->p2.degree()};
    j["round_trip"] = eval_recurrence(*rec, seq[0], static_cast<long>(seq.size())) == seq;
    if (c.k >= -1 && c.k <= 4) {
        j["structure"] = to_json(structural_check(*rec, c.k));
        j["reference_p0"] = poly_json(reference_p0(c.k));
    }
    emit(c, j.dump(2) + "\n", out);
    return exit_ok;
}

inline int cmd_check(const RunConfig& c, std::ostream& out)
{
    auto prec = static_cast<mpfr_prec_t>(c.prec);
    ojson rows = ojson::array();
    if (c.what == "identity") {
        for (const auto& a : parse_rational_list(c.alphas)) {
            IdentityCheck ic = half_sum_identity_check(a, prec);
            ojson r{{"alpha", a.get_str()},
                    {"lhs", ic.lhs.value_string(40)},
                    {"rhs", ic.rhs.value_string(40)},
                    {"residual", ic.residual.value_string(10)},
                    {"bound", ic.residual.error_string()},
                    {"holds", ic.holds}};
            if (ic.hyper2) {
                r["hyper2"] = ic.hyper2->value_string(40);
                r["hyper2_half"] = ic.hyper2_half;
            }
            rows.push_back(r);
        }
    } else if (c.what == "roots") {
        for (const auto& a : parse_rational_range(c.alpha_range_or("0..10"))) {
            RootWindow w = root_window(a);
            ojson r{{"alpha", a.get_str()},
                    {"k_start", w.k_start.get_str()},
                    {"k_end", w.k_end.get_str()},
                    {"count", w.count.get_str()},
                    {"complex_parity", w.complex_parity}};
            if (w.complex_parity) {
                r["k_end_imag"] = w.k_end_imag.get_str();
                r["count_imag"] = w.count_imag.get_str();
            } else if (sgn(a) > 0) {
                std::vector<long> roots = located_roots(to_long(a));
                r["located"] = roots;
                BoundaryValues b = boundary_values(to_long(a), prec);
                r["boundary_k"] = b.k.get_str();
                r["boundary_p"] = b.p_boundary.get_str();
                r["boundary_q_real"] = b.q_real.get_str();
                r["boundary_q_imag"] = b.q_imag.value_string(20);
            }
            rows.push_back(r);
        }
    } else {
        throw DomainError("unknown check '" + c.what + "'");
    }
    emit(c, rows.dump(2) + "\n", out);
    return exit_ok;
}

/// Parses argv-style arguments and runs one command; returns the exit code.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
    CLI::App app{"Separability probability formulas and cross-checks"};
    app.require_subcommand(1);
    RunConfig c;
    auto common = [&](CLI::App* s) {
        s->add_option("--prec", c.prec, "Working precision in bits")->check(CLI::Range(64L, 1L << 20));
        s->add_option("--out", c.out, "Output file (default stdout)");
        s->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json", "text"}));
    };
    auto* eval = app.add_subcommand("eval", "Evaluate one quantity");
    eval->add_option("what", c.what, "q, p, complement, master, closed, diff, concise or envelope")->required();
    eval->add_option("--k", c.k);
    eval->add_option("--alpha", c.alpha);
    common(eval);

    auto* table = app.add_subcommand("table", "Grid of Q or P values");
    table->add_option("what", c.what, "q or p")->required();
    table->add_option("--k-range", c.k_range);
    table->add_option("--alpha-range", c.alpha_range);
    common(table);

    auto* asym = app.add_subcommand("asymptotics", "Slope and ratio analyses");
    asym->add_option("--mode", c.mode)->check(CLI::IsMember({"loglog-p", "p-log-ratio", "q-alpha-ratio", "q-alpha-slope"}));
    asym->add_option("--alpha", c.alpha);
    asym->add_option("--k", c.k);
    asym->add_option("--k-range", c.k_range);
    asym->add_option("--alpha-range", c.alpha_range);
    asym->add_option("--points", c.points);
    common(asym);

    auto* mc = app.add_subcommand("mc", "Monte Carlo estimate of Q and P");
    mc->add_option("--k", c.k);
    mc->add_option("--alpha", c.alpha, "1/2, 1, 2 or real, complex, quaternion");
    mc->add_option("--samples", c.samples);
    mc->add_option("--seed", c.seed);
    mc->add_option("--threads", c.threads);
    mc->add_option("--dump", c.dump, "Binary little-endian (det_rho, det_pt) float64 pairs");
    common(mc);

    auto* rec = app.add_subcommand("reconstruct", "Legendre density reconstruction from exact moments");
    rec->add_option("--kind", c.kind)->check(CLI::IsMember({"diff", "ptdet"}));
    rec->add_option("--k", c.k);
    rec->add_option("--alpha", c.alpha);
    rec->add_option("--moments", c.moments);
    rec->add_option("--deg", c.deg);
    rec->add_option("--support", c.support, "lo,hi");
    common(rec);

    auto* fit = app.add_subcommand("fitrec", "Fit a first-order recurrence to G2");
    fit->add_option("--k", c.k);
    fit->add_option("--alpha-max", c.alpha_max);
    fit->add_option("--deg", c.deg, "Uniform degree bound for p0, p1, p2");
    fit->add_option("--deg-p0", c.deg_p0);
    fit->add_option("--deg-p12", c.deg_p12);
    common(fit);

    auto* chk = app.add_subcommand("check", "Identity and root checks");
    chk->add_option("what", c.what, "identity or roots")->required();
    chk->add_option("--alphas", c.alphas);
    chk->add_option("--alpha-range", c.alpha_range);
    chk->add_option("--tol", c.tol);
    common(chk);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return exit_domain;
    }
    try {
        if (eval->parsed())
            return cmd_eval(c, out);
        if (table->parsed())
            return cmd_table(c, out, err);
        if (asym->parsed())
            return cmd_asymptotics(c, out);
        if (mc->parsed()) {
            if (c.format == "csv" && c.out.empty())
                c.format = "json";
            return cmd_mc(c, out);
        }
        if (rec->parsed()) {
            if (c.format == "csv" && c.out.empty())
                c.format = "json";
            return cmd_reconstruct(c, out);
        }
        if (fit->parsed())
            return cmd_fitrec(c, out);
        if (chk->parsed())
            return cmd_check(c, out);
    } catch (const ConvergenceError& e) {
        err << "convergence failure: " << e.what() << "\n";
        return exit_convergence;
    } catch (const IOError& e) {
        err << "I/O error: " << e.what() << "\n";
        return exit_io;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_domain;
    }
    return exit_domain;
}

inline int run_cli(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
    std::vector<const char*> argv{"sepprob"};
    for (const auto& a : args)
        argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace sepprob
