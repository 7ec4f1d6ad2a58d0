#include "expdens/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

#include "expdens/specfun.hpp"

namespace expdens::ops {

namespace {

double min_decay_rate(const ExpSumDensity& d)
{
    double m = std::numeric_limits<double>::max();
    for (const Term& t : d.terms()) m = std::min(m, t.expo.real());
    return m;
}

double kernel_peak(const KernelEvaluator& k, double range)
{
    double peak = 0.0;
    for (int i = 0; i <= 64; ++i) {
        double t = range * i / 64.0;
        if (t == 0.0 && k.singular_at_zero) t = range * 1e-9;
        peak = std::max(peak, std::abs(k.eval(t)));
    }
    return peak;
}

void require_nonempty(const ExpSumDensity& f, const ExpSumDensity& g, const char* op)
{
    if (f.empty() || g.empty())
        throw std::invalid_argument(std::string(op) + ": empty input density");
}

// probe target weighted by (1+t) so that both the tail mass and the tail
// first moment of the density are below the accuracy target
std::function<Complex(double)> moment_weighted(const KernelEvaluator& k)
{
    auto eval = k.eval;
    return [eval](double t) { return (1.0 + t) * eval(t); };
}

ExpSumDensity fit_kernel(const KernelEvaluator& kernel, FitConfig cfg,
                         double extra_tail_mass = 0.0)
{
    if (cfg.range <= 0.0) {
        double hint = kernel.suggested_range > 0.0 ? kernel.suggested_range : 1.0;
        cfg.range = prony::probe_range(moment_weighted(kernel), 0.1 * cfg.eps, hint);
    }

    prony::Target target{kernel.eval, kernel.singular_at_zero, cfg.range};
    auto [terms, report] = prony::multipass_fit(target, cfg);

    report.truncated_tail_mass = extra_tail_mass;
    const double peak = kernel_peak(kernel, cfg.range);
    const double im_tol = std::max(10.0 * cfg.eps * std::max(peak, 1.0),
                                   20.0 * report.max_residual);

    ExpSumDensity out(kernel.monomial_exponent + 1.0, std::move(terms), im_tol, report);
    return cfg.renormalize ? normalize(out) : out;
}

} // namespace

KernelEvaluator sum_kernel(const ExpSumDensity& f, const ExpSumDensity& g,
                           double eps_hint)
{
    require_nonempty(f, g, "sum_pdf");
    const double alpha = f.alpha();
    const double beta = g.alpha();
    const double bfac =
        std::exp(std::lgamma(alpha) + std::lgamma(beta) - std::lgamma(alpha + beta));

    struct Pair {
        Complex ab;
        Complex xi, eta;
        double decay;
    };
    auto pairs = std::make_shared<std::vector<Pair>>();
    double dmin = std::numeric_limits<double>::max();
    for (const Term& tf : f.terms())
        for (const Term& tg : g.terms()) {
            Pair p{tf.coef * tg.coef, tf.expo, tg.expo,
                   std::min(tf.expo.real(), tg.expo.real())};
            dmin = std::min(dmin, p.decay);
            pairs->push_back(p);
        }

    KernelEvaluator k;
    k.monomial_exponent = alpha + beta - 1.0;
    k.singular_at_zero = false;
    k.suggested_range = std::log(std::max(1.0 / eps_hint, 10.0)) / dmin;
    k.eval = [pairs, alpha, beta, bfac](double t) -> Complex {
        Complex acc(0.0, 0.0);
        for (const Pair& p : *pairs) {
            if (p.decay * t > 745.0) continue;
            acc += p.ab * specfun::kummer_bridge(alpha, beta, p.xi, p.eta, t);
        }
        return bfac * acc;
    };
    return k;
}

KernelEvaluator product_kernel(const ExpSumDensity& f, const ExpSumDensity& g,
                               double eps_hint)
{
    require_nonempty(f, g, "product_pdf");
    const double alpha = f.alpha();
    const double beta = g.alpha();
    const double nu = std::abs(alpha - beta);

    struct Pair {
        Complex pref;   // 2 a b (eta/xi)^{(alpha-beta)/2}
        Complex s;      // sqrt(xi eta), Re > 0
        double t_skip;  // K underflows beyond this abscissa
    };
    auto pairs = std::make_shared<std::vector<Pair>>();
    double coef_sum = 0.0;
    double smin = std::numeric_limits<double>::max();
    for (const Term& tf : f.terms())
        for (const Term& tg : g.terms()) {
            Pair p;
            p.pref = 2.0 * tf.coef * tg.coef *
                     specfun::pow_principal(tg.expo / tf.expo, 0.5 * (alpha - beta));
            p.s = std::sqrt(tf.expo * tg.expo);
            const double re = std::max(p.s.real(), 1e-300);
            p.t_skip = (375.0 / re) * (375.0 / re);
            coef_sum += std::abs(p.pref);
            smin = std::min(smin, re);
            pairs->push_back(p);
        }
    std::stable_sort(pairs->begin(), pairs->end(),
                     [](const Pair& a, const Pair& b) { return a.t_skip > b.t_skip; });

    auto korder = std::make_shared<specfun::BesselKOrder>(nu);
    const bool log_singular = nu < 1e-9;

    KernelEvaluator k;
    k.monomial_exponent = 0.5 * (alpha + beta - 2.0 - nu);
    k.singular_at_zero = log_singular;
    {
        const double l = std::log(std::max(coef_sum / eps_hint, 10.0));
        k.suggested_range = (l * l) / (4.0 * smin * smin);
    }
    k.eval = [pairs, korder, nu, log_singular](double t) -> Complex {
        if (t < 0.0) throw std::domain_error("product kernel: t must be >= 0");
        Complex acc(0.0, 0.0);
        if (t == 0.0) {
            if (log_singular)
                throw std::domain_error("product kernel: logarithmic singularity at 0");
            const double half_gamma = 0.5 * std::tgamma(nu);
            for (const Pair& p : *pairs)
                acc += p.pref * half_gamma * specfun::pow_principal(p.s, -nu);
            return acc;
        }
        const double rt = 2.0 * std::sqrt(t);
        for (const Pair& p : *pairs) {
            if (t > p.t_skip) break;  // sorted by decreasing t_skip
            acc += p.pref * (*korder)(rt * p.s);
        }
        return std::pow(t, 0.5 * nu) * acc;
    };
    return k;
}

KernelEvaluator quotient_kernel(const ExpSumDensity& f, const ExpSumDensity& g,
                                double eps_hint)
{
    require_nonempty(f, g, "quotient_pdf");
    const double alpha = f.alpha();
    const double beta = g.alpha();
    const double c = alpha + beta;
    if (c > 171.62)
        throw std::overflow_error("quotient_pdf: Gamma(alpha+beta) out of range");
    const double lg = std::lgamma(c);

    struct Pair {
        Complex ab;
        Complex xi, eta;
    };
    auto pairs = std::make_shared<std::vector<Pair>>();
    double csum = 0.0;
    for (const Term& tf : f.terms())
        for (const Term& tg : g.terms()) {
            pairs->push_back({tf.coef * tg.coef, tf.expo, tg.expo});
            csum += std::abs(tf.coef * tg.coef) *
                    std::exp(lg - c * std::log(std::abs(tf.expo)));
        }

    KernelEvaluator k;
    k.monomial_exponent = alpha - 1.0;
    k.singular_at_zero = false;
    // density tail ~ t^(alpha-1) w(t) ~ C t^(-(beta+1))
    k.suggested_range = std::pow(std::max(csum, 1e-30) / eps_hint, 1.0 / (beta + 1.0));
    k.eval = [pairs, lg, c](double t) -> Complex {
        Complex acc(0.0, 0.0);
        for (const Pair& p : *pairs)
            acc += p.ab * std::exp(lg - c * std::log(p.xi * t + p.eta));
        return acc;
    };
    return k;
}

ExpSumDensity sum_pdf(const ExpSumDensity& f, const ExpSumDensity& g, FitConfig cfg)
{
    const KernelEvaluator k = sum_kernel(f, g, cfg.eps);
    // the kernel is entire, so a single pass certified on [0, R] suffices
    return fit_kernel(k, cfg);
}

ExpSumDensity product_pdf(const ExpSumDensity& f, const ExpSumDensity& g,
                          FitConfig cfg)
{
    const KernelEvaluator k = product_kernel(f, g, cfg.eps);
    if (cfg.range <= 0.0)
        cfg.range =
            prony::probe_range(moment_weighted(k), 0.1 * cfg.eps, k.suggested_range);
    // deep multipass: the kernel is weakly singular at zero and the mass
    // below the innermost grid must stay under the accuracy target
    if (cfg.t_min <= 0.0 && cfg.multipass_intervals.empty())
        cfg.t_min = cfg.range * 1e-10;
    return fit_kernel(k, cfg);
}

Complex product_trapezoid_weight(const ExpSumDensity& f, const ExpSumDensity& g,
                                 double tau)
{
    const double alpha = f.alpha();
    const double beta = g.alpha();
    const double nu = std::abs(alpha - beta);
    const double etau = std::exp(tau);
    Complex acc(0.0, 0.0);
    for (const Term& tf : f.terms())
        for (const Term& tg : g.terms()) {
            const Complex w = (alpha >= beta) ? tg.expo : tf.expo;
            const Complex q = tf.expo * tg.expo;
            acc += tf.coef * tg.coef * specfun::pow_principal(w, nu) *
                   std::exp(-q * etau + nu * tau);
        }
    return acc;
}

ExpSumDensity product_pdf_trapezoid(const ExpSumDensity& f, const ExpSumDensity& g,
                                    FitConfig cfg)
{
    require_nonempty(f, g, "product_pdf_trapezoid");
    double qmin = std::numeric_limits<double>::max();
    double csum = 0.0;
    const double nu = std::abs(f.alpha() - g.alpha());
    for (const Term& tf : f.terms())
        for (const Term& tg : g.terms()) {
            const Complex q = tf.expo * tg.expo;
            if (!(q.real() > 0.0))
                throw std::domain_error(
                    "product_pdf_trapezoid: requires Re(xi_m eta_n) > 0 for all pairs");
            qmin = std::min(qmin, q.real());
            const Complex w = (f.alpha() >= g.alpha()) ? tg.expo : tf.expo;
            csum += std::abs(tf.coef * tg.coef) * std::pow(std::abs(w), nu);
        }

    const KernelEvaluator bessel_path = product_kernel(f, g, cfg.eps);
    double range = cfg.range;
    if (range <= 0.0)
        range = prony::probe_range(bessel_path.eval, 0.1 * cfg.eps,
                                   bessel_path.suggested_range);
    const double t_min = cfg.t_min > 0.0 ? cfg.t_min : range * 1e-6;

    const double eps_small = 0.01 * cfg.eps / std::max(csum, 1.0);
    const double llim = std::log(std::max(std::log(1.0 / eps_small), 1.0));
    const double tau_lo = -(llim - std::log(t_min)) - 0.5;
    const double tau_hi = llim - std::log(qmin) + 0.5;

    auto discretize = [&](double h) {
        std::vector<Term> terms;
        const int count = int(std::ceil((tau_hi - tau_lo) / h)) + 1;
        terms.reserve(count);
        for (int j = 0; j < count; ++j) {
            const double tau = tau_lo + j * h;
            const Complex sig = product_trapezoid_weight(f, g, tau);
            const double lam = std::exp(-tau);
            if (std::abs(sig) * h < 1e-300) continue;
            terms.push_back(Term{h * sig, Complex(lam, 0.0)});
        }
        return terms;
    };

    // halve the step until the discretized integral stabilizes on probes
    std::vector<double> probes;
    for (int i = 0; i < 17; ++i)
        probes.push_back(t_min * std::pow(range / t_min, i / 16.0));
    auto eval_terms = [](const std::vector<Term>& terms, double t) {
        Complex s(0.0, 0.0);
        for (const Term& tm : terms) s += tm.coef * std::exp(-tm.expo * t);
        return s;
    };

    double h = 0.5;
    std::vector<Term> terms = discretize(h);
    for (int halving = 0; halving < 5; ++halving) {
        const std::vector<Term> finer = discretize(0.5 * h);
        double diff = 0.0;
        for (double t : probes)
            diff = std::max(diff, std::abs(eval_terms(terms, t) - eval_terms(finer, t)));
        terms = finer;
        h *= 0.5;
        if (diff < 0.1 * cfg.eps) break;
    }

    FitReport raw;
    raw.terms_kept = int(terms.size());
    ExpSumDensity dense(bessel_path.monomial_exponent + 1.0, std::move(terms),
                        std::max(10.0 * cfg.eps, 1e-13), raw);

    FitConfig rcfg = cfg;
    rcfg.range = range;
    rcfg.t_min = t_min;
    rcfg.multipass_intervals.clear();
    ExpSumDensity out = prony::reduce(dense, cfg.eps, rcfg);
    return cfg.renormalize ? normalize(out) : out;
}

ExpSumDensity quotient_pdf(const ExpSumDensity& f, const ExpSumDensity& g,
                           FitConfig cfg)
{
    const KernelEvaluator k = quotient_kernel(f, g, cfg.eps);
    const double alpha = f.alpha();

    if (cfg.range <= 0.0) {
        // R such that the density tail t^(alpha-1) w(t) stays below eps
        auto density_tail = [&](double t) {
            return k.eval(t) * std::pow(t, alpha - 1.0);
        };
        cfg.range = prony::probe_range(density_tail, 0.1 * cfg.eps, k.suggested_range);
    }
    if (cfg.t_min <= 0.0 && cfg.multipass_intervals.empty())
        cfg.t_min = std::min(1e-2, cfg.range * 1e-4);

    // report the truncated tail mass of the heavy-tailed target
    double tail_mass = 0.0;
    {
        const double R = cfg.range;
        auto integrand = [&](double u) {
            const double t = R * std::exp(u);
            return std::abs(k.eval(t)) * std::pow(t, alpha - 1.0) * t;
        };
        double h = 0.05;
        for (int j = 0;; ++j) {
            const double term = integrand(j * h);
            tail_mass += term * h;
            if (term * h < 1e-18 * std::max(tail_mass, 1e-30) || j > 4000) break;
        }
    }

    return fit_kernel(k, cfg, tail_mass);
}

ExpSumDensity power_pdf(const ExpSumDensity& f, int k, FitConfig cfg)
{
    if (k < 2 || (k & (k - 1)) != 0)
        throw std::invalid_argument("power_pdf: k must be a power of two >= 2");
    ExpSumDensity cur = f;
    for (int stage = k; stage > 1; stage /= 2) cur = product_pdf(cur, cur, cfg);
    return cur;
}

} // namespace expdens::ops
