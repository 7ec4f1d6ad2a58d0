#include "expdens/expsum.hpp"

#include <cmath>
#include <stdexcept>

#include "expdens/quadrature.hpp"
#include "expdens/specfun.hpp"

namespace expdens {

SampleGrid::SampleGrid(double t0_, double h_, std::vector<Complex> v)
    : t0(t0_), h(h_), values(std::move(v))
{
    if (values.empty() || values.size() % 2 == 0)
        throw std::invalid_argument("SampleGrid: needs an odd number (2N+1) of samples");
    if (!(h > 0.0)) throw std::invalid_argument("SampleGrid: step must be positive");
    if (t0 < 0.0) throw std::invalid_argument("SampleGrid: origin must be >= 0");
}

ExpSumDensity::ExpSumDensity(double alpha, std::vector<Term> terms, double im_tol,
                             std::optional<FitReport> report)
    : alpha_(alpha), im_tol_(im_tol), report_(std::move(report))
{
    if (!(alpha > 0.0)) throw std::invalid_argument("ExpSumDensity: alpha must be > 0");
    if (!(im_tol >= 0.0)) throw std::invalid_argument("ExpSumDensity: im_tol must be >= 0");
    terms_.reserve(terms.size());
    for (const Term& t : terms) {
        if (!(t.expo.real() > 0.0))
            throw std::invalid_argument("ExpSumDensity: Re(xi) must be > 0 for every term");
        if (!std::isfinite(t.coef.real()) || !std::isfinite(t.coef.imag()) ||
            !std::isfinite(t.expo.real()) || !std::isfinite(t.expo.imag()))
            throw std::invalid_argument("ExpSumDensity: non-finite term");
        bool merged = false;
        for (Term& kept : terms_) {
            if (std::abs(kept.expo - t.expo) <= 1e-12 * (1.0 + std::abs(kept.expo))) {
                kept.coef += t.coef;
                merged = true;
                break;
            }
        }
        if (!merged) terms_.push_back(t);
    }
}

Complex ExpSumDensity::kernel(double t) const
{
    Complex s(0.0, 0.0);
    for (const Term& tm : terms_) s += tm.coef * std::exp(-tm.expo * t);
    return s;
}

Complex ExpSumDensity::evaluate_complex(double t) const
{
    if (t < 0.0) throw std::domain_error("evaluate: t must be >= 0");
    if (t == 0.0) {
        if (alpha_ < 1.0)
            throw std::domain_error("evaluate: monomial factor singular at t = 0");
        if (alpha_ > 1.0) return {0.0, 0.0};
        return kernel(0.0);
    }
    return std::pow(t, alpha_ - 1.0) * kernel(t);
}

double ExpSumDensity::evaluate(double t) const
{
    const Complex v = evaluate_complex(t);
    if (std::abs(v.imag()) > im_tol_ * std::max(1.0, std::abs(v.real())))
        throw std::runtime_error("evaluate: imaginary residue exceeds representation tolerance");
    return v.real();
}

double total_mass(const ExpSumDensity& d) { return moment(d, 0); }

double moment(const ExpSumDensity& d, int k)
{
    if (k < 0) throw std::domain_error("moment: order must be >= 0");
    const double a = d.alpha() + k;
    if (a > 171.62)
        throw std::overflow_error("moment: Gamma(alpha + k) exceeds double range");
    Complex s(0.0, 0.0);
    for (const Term& t : d.terms()) s += t.coef * specfun::gamma_times_pow(a, t.expo);
    return s.real();
}

ExpSumDensity normalize(const ExpSumDensity& d)
{
    const double mass = total_mass(d);
    if (!(mass > 0.0)) throw std::runtime_error("normalize: total mass must be positive");
    // single real linear constraint Re(sum a_m g_m) = 1 where
    // g_m = Gamma(alpha) xi_m^(-alpha); the minimal-norm correction in
    // R^{2M} is delta * conj(g) / sum |g|^2.
    std::vector<Complex> g(d.terms().size());
    double norm2 = 0.0;
    for (size_t i = 0; i < g.size(); ++i) {
        g[i] = specfun::gamma_times_pow(d.alpha(), d.terms()[i].expo);
        norm2 += std::norm(g[i]);
    }
    if (!(norm2 > 0.0)) throw std::runtime_error("normalize: constraint gradient vanishes");
    const double delta = 1.0 - mass;
    std::vector<Term> out = d.terms();
    for (size_t i = 0; i < out.size(); ++i) out[i].coef += delta * std::conj(g[i]) / norm2;
    ExpSumDensity r(d.alpha(), std::move(out), d.im_tol(), d.report());
    r.provenance = d.provenance;
    return r;
}

PruneResult prune(const ExpSumDensity& d, double threshold)
{
    if (!(threshold >= 0.0)) throw std::invalid_argument("prune: threshold must be >= 0");
    PruneResult res;
    std::vector<Term> kept;
    Complex dropped(0.0, 0.0);
    for (const Term& t : d.terms()) {
        if (std::abs(t.coef) < threshold) {
            dropped += t.coef * specfun::gamma_times_pow(d.alpha(), t.expo);
            ++res.dropped_terms;
        } else {
            kept.push_back(t);
        }
    }
    res.dropped_mass = std::abs(dropped);
    res.emptied = kept.empty() && !d.terms().empty();
    FitReport rep = d.report().value_or(FitReport{});
    rep.terms_kept = int(kept.size());
    rep.pruned_all = res.emptied;
    res.density = ExpSumDensity(d.alpha(), std::move(kept), d.im_tol(), rep);
    res.density.provenance = d.provenance;
    return res;
}

double expectation(const ExpSumDensity& d, const std::function<double(double)>& u,
                   double quad_tol)
{
    auto integrand = [&](double x) { return u(x) * d.evaluate(x); };
    const auto r = quadrature::integrate_positive_axis(integrand, quad_tol);
    if (!r.converged)
        throw std::runtime_error("expectation: quadrature did not converge; achieved " +
                                 std::to_string(r.error_estimate));
    return r.value;
}

double expectation(const ExpSumDensity& d, const ExpSumDensity& u)
{
    // pointwise product is x^(alpha_d + alpha_u - 2) * double sum; its mass
    // is the expectation.
    const double a = d.alpha() + u.alpha() - 1.0;
    if (!(a > 0.0))
        throw std::domain_error("expectation: combined monomial exponent must be > 0");
    if (a > 171.62) throw std::overflow_error("expectation: Gamma overflow");
    Complex s(0.0, 0.0);
    for (const Term& td : d.terms())
        for (const Term& tu : u.terms())
            s += td.coef * tu.coef * specfun::gamma_times_pow(a, td.expo + tu.expo);
    return s.real();
}

} // namespace expdens
