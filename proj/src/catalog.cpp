#include "expdens/catalog.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "expdens/specfun.hpp"

namespace expdens::catalog {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<double> parse_params(const std::string& text, size_t colon)
{
    std::vector<double> params;
    if (colon == std::string::npos) return params;
    std::stringstream ss(text.substr(colon + 1));
    std::string piece;
    while (std::getline(ss, piece, ',')) {
        size_t used = 0;
        const double v = std::stod(piece, &used);
        if (used != piece.size())
            throw std::invalid_argument("distribution spec: bad parameter '" + piece + "'");
        params.push_back(v);
    }
    return params;
}

void require_params(const std::vector<double>& p, size_t n, const std::string& fam)
{
    if (p.size() != n)
        throw std::invalid_argument("distribution spec: " + fam + " expects " +
                                    std::to_string(n) + " parameters");
}

std::string format_param(double v)
{
    std::ostringstream os;
    os << v;
    return os.str();
}

} // namespace

std::string family_name(Family f)
{
    switch (f) {
        case Family::gamma: return "gamma";
        case Family::nakagami: return "nakagami";
        case Family::weibull: return "weibull";
        case Family::lomax: return "lomax";
        case Family::cauchy_abs_tail: return "cauchy_abs_tail";
    }
    return "?";
}

DistributionSpec parse_spec(const std::string& text)
{
    const size_t colon = text.find(':');
    const std::string fam = text.substr(0, colon);
    const std::vector<double> p = parse_params(text, colon);

    DistributionSpec spec;
    if (fam == "gamma") {
        require_params(p, 2, fam);
        spec.family = Family::gamma;
        spec.p1 = p[0];
        spec.p2 = p[1];
        if (!(spec.p1 > 0.0 && spec.p2 > 0.0))
            throw std::invalid_argument("gamma: shape and rate must be positive");
    } else if (fam == "exp") {
        require_params(p, 1, fam);
        spec.family = Family::gamma;
        spec.p1 = 1.0;
        spec.p2 = p[0];
        if (!(spec.p2 > 0.0)) throw std::invalid_argument("exp: rate must be positive");
    } else if (fam == "nakagami") {
        require_params(p, 2, fam);
        spec.family = Family::nakagami;
        spec.p1 = p[0];
        spec.p2 = p[1];
        if (!(spec.p1 >= 0.5 && spec.p2 > 0.0))
            throw std::invalid_argument("nakagami: requires m >= 1/2 and Omega > 0");
        spec.fit.eps = 1e-11;
        spec.fit.n = 500;
    } else if (fam == "weibull") {
        require_params(p, 2, fam);
        spec.family = Family::weibull;
        spec.p1 = p[0];
        spec.p2 = p[1];
        if (!(spec.p1 > 0.0 && spec.p2 > 0.0))
            throw std::invalid_argument("weibull: scale and shape must be positive");
        spec.fit.eps = 1e-11;
    } else if (fam == "lomax") {
        require_params(p, 2, fam);
        spec.family = Family::lomax;
        spec.p1 = p[0];
        spec.p2 = p[1];
        if (!(spec.p1 > 0.0 && spec.p2 > 0.0))
            throw std::invalid_argument("lomax: shape and scale must be positive");
        spec.fit.eps = 1e-10;
    } else if (fam == "cauchy_abs_tail") {
        require_params(p, 0, fam);
        spec.family = Family::cauchy_abs_tail;
        spec.fit.eps = 1e-13;
        spec.fit.n = 2000;
    } else {
        throw std::invalid_argument("unknown distribution family: '" + fam + "'");
    }
    return spec;
}

double reference_pdf(const DistributionSpec& spec, double x)
{
    switch (spec.family) {
        case Family::gamma: {
            const double a = spec.p1, b = spec.p2;
            if (x < 0.0) return 0.0;
            if (x == 0.0) return a == 1.0 ? b : (a > 1.0 ? 0.0 : INFINITY);
            return std::exp(a * std::log(b) - std::lgamma(a) + (a - 1.0) * std::log(x) -
                            b * x);
        }
        case Family::nakagami: {
            const double m = spec.p1, om = spec.p2;
            if (x <= 0.0) return 0.0;
            return 2.0 * std::pow(m / om, m) / std::tgamma(m) *
                   std::pow(x, 2.0 * m - 1.0) * std::exp(-m / om * x * x);
        }
        case Family::weibull: {
            const double lam = spec.p1, k = spec.p2;
            if (x < 0.0) return 0.0;
            if (x == 0.0) return k == 1.0 ? 1.0 / lam : (k > 1.0 ? 0.0 : INFINITY);
            return k / lam * std::pow(x / lam, k - 1.0) *
                   std::exp(-std::pow(x / lam, k));
        }
        case Family::lomax: {
            const double a = spec.p1, lam = spec.p2;
            if (x < 0.0) return 0.0;
            return a / lam * std::pow(1.0 + x / lam, -(a + 1.0));
        }
        case Family::cauchy_abs_tail:
            // density of |X| for standard Cauchy X
            if (x < 0.0) return 0.0;
            return 2.0 / (kPi * (1.0 + x * x));
    }
    return 0.0;
}

ExpSumDensity cauchy_tail_terms(const DistributionSpec& spec)
{
    std::vector<Term> terms;
    for (int j = spec.cauchy_j_min; j <= spec.cauchy_j_max; ++j) {
        const double s = j * spec.cauchy_h0;
        const double es = std::exp(s);
        terms.push_back(Term{Complex(spec.cauchy_h0 / kPi * es * std::sin(es), 0.0),
                             Complex(es, 0.0)});
    }
    ExpSumDensity d(1.0, std::move(terms), 1e-13);
    d.provenance = "cauchy_tail";
    return d;
}

ExpSumDensity cauchy_full_approx(const DistributionSpec& spec)
{
    const ExpSumDensity tail = cauchy_tail_terms(spec);

    // head fit of f_exact - f_tail; sampling out to twice the breakpoint,
    // where the target is already ~1e-15, pins the extrapolated tail of the
    // head terms so the combined mass stays accurate
    prony::Target target;
    target.f = [&tail](double x) -> Complex {
        return Complex(1.0 / (kPi * (1.0 + x * x)), 0.0) - tail.kernel(x);
    };
    target.singular_at_zero = false;
    target.suggested_range = 2.0 * spec.cauchy_break;

    prony::FitConfig cfg = spec.fit;
    cfg.range = 2.0 * spec.cauchy_break;
    cfg.multipass_intervals = {cfg.range};
    auto [head_terms, head_report] = prony::multipass_fit(target, cfg);

    std::vector<Term> all = tail.terms();
    all.insert(all.end(), head_terms.begin(), head_terms.end());
    FitReport rep = head_report;
    rep.terms_kept = int(all.size());
    ExpSumDensity combined(1.0, std::move(all), std::max(1e-12, 10.0 * cfg.eps), rep);

    PruneResult pruned = prune(combined, spec.cauchy_prune);
    pruned.density.provenance = "cauchy_full";
    return pruned.density;
}

ExpSumDensity to_expsum(const DistributionSpec& spec)
{
    const std::string prov = family_name(spec.family) + ":" + format_param(spec.p1) +
                             "," + format_param(spec.p2);
    switch (spec.family) {
        case Family::gamma: {
            const double a = spec.p1, b = spec.p2;
            const Complex coef = std::exp(a * std::log(b) - std::lgamma(a));
            FitReport rep;
            rep.terms_kept = 1;
            ExpSumDensity d(a, {Term{coef, Complex(b, 0.0)}}, 1e-13, rep);
            d.provenance = prov;
            return d;
        }
        case Family::nakagami: {
            const double m = spec.p1, om = spec.p2;
            const double scale = 2.0 * std::pow(m / om, m) / std::tgamma(m);
            const double rate = m / om;
            prony::Target target;
            target.f = [scale, rate](double x) -> Complex {
                return Complex(scale * std::exp(-rate * x * x), 0.0);
            };
            target.singular_at_zero = false;
            target.suggested_range = 6.0 * std::sqrt(om / m);

            prony::FitConfig cfg = spec.fit;
            if (cfg.range <= 0.0) cfg.range = target.suggested_range;
            if (cfg.multipass_intervals.empty()) cfg.multipass_intervals = {cfg.range};
            auto [terms, report] = prony::multipass_fit(target, cfg);
            ExpSumDensity d(2.0 * m, std::move(terms),
                            std::max(10.0 * cfg.eps * scale, 20.0 * report.max_residual),
                            report);
            d.provenance = prov;
            return d;
        }
        case Family::weibull: {
            const double lam = spec.p1, k = spec.p2;
            const double scale = k / std::pow(lam, k);
            prony::Target target;
            target.f = [scale, lam, k](double x) -> Complex {
                return Complex(scale * std::exp(-std::pow(x / lam, k)), 0.0);
            };
            target.singular_at_zero = false;
            target.suggested_range =
                lam * std::pow(std::log(std::max(scale, 2.0) / (0.1 * spec.fit.eps)),
                               1.0 / k);

            prony::FitConfig cfg = spec.fit;
            if (cfg.range <= 0.0) cfg.range = target.suggested_range;
            if (cfg.t_min <= 0.0 && cfg.multipass_intervals.empty())
                cfg.t_min = cfg.range * 1e-6;
            auto [terms, report] = prony::multipass_fit(target, cfg);
            ExpSumDensity d(k, std::move(terms),
                            std::max(10.0 * cfg.eps * std::max(scale, 1.0),
                                     20.0 * report.max_residual),
                            report);
            d.provenance = prov;
            return d;
        }
        case Family::lomax: {
            const double a = spec.p1, lam = spec.p2;
            prony::Target target;
            target.f = [a, lam](double x) -> Complex {
                return Complex(a / lam * std::pow(1.0 + x / lam, -(a + 1.0)), 0.0);
            };
            target.singular_at_zero = false;
            target.suggested_range =
                lam * (std::pow(a / (lam * 0.1 * spec.fit.eps), 1.0 / (a + 1.0)) - 1.0);

            prony::FitConfig cfg = spec.fit;
            if (cfg.range <= 0.0)
                cfg.range = prony::probe_range(target.f, 0.1 * cfg.eps,
                                               target.suggested_range);
            if (cfg.t_min <= 0.0 && cfg.multipass_intervals.empty())
                cfg.t_min = std::min(1e-2 * lam, cfg.range * 1e-4);
            auto [terms, report] = prony::multipass_fit(target, cfg);

            // heavy tail: record the mass beyond the certified range
            report.truncated_tail_mass = std::pow(1.0 + cfg.range / lam, -a);
            ExpSumDensity d(1.0, std::move(terms),
                            std::max(10.0 * cfg.eps * std::max(a / lam, 1.0),
                                     20.0 * report.max_residual),
                            report);
            d.provenance = prov;
            return d;
        }
        case Family::cauchy_abs_tail: {
            const ExpSumDensity half = cauchy_full_approx(spec);
            std::vector<Term> doubled = half.terms();
            for (Term& t : doubled) t.coef *= 2.0;
            ExpSumDensity d(1.0, std::move(doubled), half.im_tol() * 2.0,
                            half.report());
            d.provenance = "cauchy_abs_tail";
            return d;
        }
    }
    throw std::logic_error("to_expsum: unhandled family");
}

} // namespace expdens::catalog
