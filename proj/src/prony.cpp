#include "expdens/prony.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace expdens::prony {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

namespace {

constexpr double kInDiskMargin = 1e-12;

// gamma^n for n = 0..count-1, with the running product re-anchored on
// exact exponentials to keep the relative drift at a few ulps.
void node_powers(Complex gamma, int count, Complex* out)
{
    const Complex lg = std::log(gamma);
    Complex cur(1.0, 0.0);
    for (int n = 0; n < count; ++n) {
        if (n % 256 == 0) cur = std::exp(double(n) * lg);
        out[n] = cur;
        cur *= gamma;
    }
}

std::vector<Complex> companion_roots(VectorXcd coeffs)
{
    const double maxabs = coeffs.cwiseAbs().maxCoeff();
    if (maxabs == 0.0) return {};
    int hi = int(coeffs.size()) - 1;
    while (hi > 0 && std::abs(coeffs[hi]) < 1e-14 * maxabs) --hi;
    int lo = 0;
    while (lo < hi && std::abs(coeffs[lo]) < 1e-300) ++lo;
    const int deg = hi - lo;
    if (deg < 1) return {};

    MatrixXcd comp = MatrixXcd::Zero(deg, deg);
    for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -coeffs[lo + i] / coeffs[hi];
    for (int i = 1; i < deg; ++i) comp(i, i - 1) = Complex(1.0, 0.0);

    // Parlett-Reinsch balancing with powers of two
    for (int sweep = 0; sweep < 50; ++sweep) {
        bool converged = true;
        for (int j = 0; j < deg; ++j) {
            double r = 0.0, c = 0.0;
            for (int i = 0; i < deg; ++i) {
                if (i == j) continue;
                r += std::abs(comp(j, i));
                c += std::abs(comp(i, j));
            }
            if (r == 0.0 || c == 0.0) continue;
            const double s = c + r;
            double f = 1.0;
            while (c < r / 2.0) {
                c *= 2.0;
                r /= 2.0;
                f *= 2.0;
            }
            while (c > r * 2.0) {
                c /= 2.0;
                r *= 2.0;
                f /= 2.0;
            }
            if (c + r < 0.95 * s && f != 1.0) {
                converged = false;
                comp.col(j) *= f;
                comp.row(j) /= f;
            }
        }
        if (converged) break;
    }

    Eigen::ComplexEigenSolver<MatrixXcd> es(comp, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("fit_con_eigen: companion eigensolver failed");
    std::vector<Complex> roots(es.eigenvalues().data(),
                               es.eigenvalues().data() + es.eigenvalues().size());
    return roots;
}

struct NodeFilterResult {
    std::vector<Complex> nodes;
};

// Keep nodes strictly inside the unit disk, finite, non-degenerate, and
// representable after the grid-offset unfold.
NodeFilterResult filter_nodes(const std::vector<Complex>& raw, double t0, double h)
{
    NodeFilterResult res;
    const double off_ratio = (t0 > 0.0) ? t0 / h : 0.0;
    for (const Complex& g : raw) {
        const double a = std::abs(g);
        if (!std::isfinite(a)) continue;
        if (a > 1.0 - kInDiskMargin) continue;
        if (a <= 0.0) continue;
        // e^{omega t0} = |gamma|^{-t0/h} must stay representable
        if (off_ratio > 0.0 && -std::log(a) * off_ratio > 500.0) continue;
        bool dup = false;
        for (const Complex& kept : res.nodes) {
            if (std::abs(kept - g) <= 1e-12 * (1.0 + std::abs(kept))) {
                dup = true;
                break;
            }
        }
        if (!dup) res.nodes.push_back(g);
    }
    return res;
}

struct FitOutcome {
    std::vector<Term> terms;
    FitReport report;
};

FitOutcome assemble_fit(const std::vector<Complex>& nodes_raw, const SampleGrid& grid,
                        double sigma_ratio, double sigma0, bool eps_reached,
                        double eps)
{
    FitOutcome out;
    out.report.sigma_ratio = sigma_ratio;
    out.report.sigma0 = sigma0;
    out.report.eps_reached = eps_reached;

    const auto filtered = filter_nodes(nodes_raw, grid.t0, grid.h);
    const int count = int(grid.values.size());

    if (filtered.nodes.empty()) {
        double mx = 0.0;
        for (const Complex& v : grid.values) mx = std::max(mx, std::abs(v));
        out.report.max_residual = mx;
        out.report.terms_kept = 0;
        return out;
    }

    VectorXcd nodes(filtered.nodes.size());
    for (size_t i = 0; i < filtered.nodes.size(); ++i) nodes[i] = filtered.nodes[i];

    double cond = 0.0;
    VectorXcd coeffs = vandermonde_coeffs(nodes, grid, &cond);
    out.report.cond_estimate = cond;

    // noise-floor terms contribute nothing at the target accuracy
    {
        int kept = 0;
        for (int k = 0; k < nodes.size(); ++k) {
            if (std::abs(coeffs[k]) <= 1e-2 * eps) continue;
            nodes[kept] = nodes[k];
            coeffs[kept] = coeffs[k];
            ++kept;
        }
        nodes.conservativeResize(kept);
        coeffs.conservativeResize(kept);
    }

    // a posteriori residual on the full sample grid
    std::vector<Complex> model(count, Complex(0.0, 0.0));
    std::vector<Complex> pw(count);
    for (int k = 0; k < nodes.size(); ++k) {
        node_powers(nodes[k], count, pw.data());
        for (int n = 0; n < count; ++n) model[n] += coeffs[k] * pw[n];
    }
    double resid = 0.0;
    for (int n = 0; n < count; ++n)
        resid = std::max(resid, std::abs(grid.values[n] - model[n]));
    out.report.max_residual = resid;

    out.terms.reserve(nodes.size());
    for (int k = 0; k < nodes.size(); ++k) {
        const Complex omega = -std::log(nodes[k]) / grid.h;
        const Complex a = coeffs[k] * std::exp(omega * grid.t0);
        if (omega.real() <= 0.0) continue;  // decay invariant
        out.terms.push_back(Term{a, omega});
    }
    out.report.terms_kept = int(out.terms.size());
    return out;
}

hankel::RandomizedSvdConfig svd_config(const FitConfig& cfg)
{
    hankel::RandomizedSvdConfig s = cfg.svd;
    s.seed = cfg.seed;
    return s;
}

} // namespace

VectorXcd vandermonde_coeffs(const VectorXcd& nodes, const SampleGrid& grid,
                             double* cond_estimate)
{
    const int m = int(nodes.size());
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            if (std::abs(nodes[i] - nodes[j]) <= 1e-12 * (1.0 + std::abs(nodes[i])))
                throw std::invalid_argument("vandermonde_coeffs: duplicate nodes");
    for (int i = 0; i < m; ++i)
        if (std::abs(nodes[i]) >= 1.0)
            throw std::invalid_argument("vandermonde_coeffs: nodes must lie inside the unit disk");

    const int rows = int(grid.values.size());
    MatrixXcd v(rows, m);
    std::vector<Complex> pw(rows);
    for (int k = 0; k < m; ++k) {
        node_powers(nodes[k], rows, pw.data());
        for (int n = 0; n < rows; ++n) v(n, k) = pw[n];
    }
    Eigen::ColPivHouseholderQR<MatrixXcd> qr(v);
    const auto rdiag = qr.matrixR().diagonal().head(m).cwiseAbs().eval();
    if (cond_estimate)
        *cond_estimate = (rdiag(m - 1) > 0.0) ? rdiag(0) / rdiag(m - 1)
                                              : std::numeric_limits<double>::infinity();
    Eigen::Map<const VectorXcd> rhs(grid.values.data(), rows);
    return qr.solve(rhs.eval());
}

TermsReport fit_matrix_pencil(const SampleGrid& grid, const FitConfig& cfg)
{
    hankel::HankelOperator h(grid.values);
    const auto svd = hankel::randomized_svd(h, cfg.eps, svd_config(cfg));

    if (svd.m == 0 || svd.sigma.size() == 0) {
        FitOutcome empty = assemble_fit({}, grid, 0.0,
                                        svd.sigma.size() ? svd.sigma(0) : 0.0, true,
                                        cfg.eps);
        return {empty.terms, empty.report};
    }

    const int m = std::min<int>(svd.m, int(svd.u_conj.cols()));
    const int n = h.n();
    const MatrixXcd u1 = svd.u_conj.block(0, 0, n, m);
    const MatrixXcd u2 = svd.u_conj.block(1, 0, n, m);
    const MatrixXcd u3 = u1.colPivHouseholderQr().solve(u2);

    Eigen::ComplexEigenSolver<MatrixXcd> es(u3, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("fit_matrix_pencil: pencil eigensolver failed");
    std::vector<Complex> nodes(es.eigenvalues().data(),
                               es.eigenvalues().data() + es.eigenvalues().size());

    const double s0 = svd.sigma(0);
    const double ratio =
        (svd.m < svd.sigma.size()) ? svd.sigma(svd.m) / s0 : svd.sigma(svd.sigma.size() - 1) / s0;
    FitOutcome out = assemble_fit(nodes, grid, ratio, s0, svd.eps_reached, cfg.eps);
    return {out.terms, out.report};
}

TermsReport fit_con_eigen(const SampleGrid& grid, const FitConfig& cfg)
{
    if (grid.n() > 1024)
        throw std::runtime_error(
            "fit_con_eigen: companion-matrix rooting limited to N <= 1024; use the pencil method");
    hankel::HankelOperator h(grid.values);
    const auto ce = hankel::con_eigenvector(h, cfg.eps, svd_config(cfg));
    if (ce.u.size() == 0) {
        FitOutcome empty = assemble_fit({}, grid, 0.0, ce.sigma0, true, cfg.eps);
        return {empty.terms, empty.report};
    }
    const std::vector<Complex> nodes = companion_roots(ce.u);
    const double ratio = ce.sigma0 > 0.0 ? ce.sigma_m / ce.sigma0 : 0.0;
    FitOutcome out = assemble_fit(nodes, grid, ratio, ce.sigma0, ce.eps_reached, cfg.eps);
    return {out.terms, out.report};
}

double probe_range(const std::function<Complex(double)>& f, double eps,
                   double scale_hint, double cap)
{
    double r = std::max(scale_hint, 1e-6);
    auto quiet_beyond = [&](double R) {
        for (double fac : {1.0, 1.3, 1.9, 2.7, 4.0}) {
            if (std::abs(f(R * fac)) >= eps) return false;
        }
        return true;
    };
    while (r < cap && !quiet_beyond(r)) r *= 2.0;
    while (r > 1e-5 && quiet_beyond(0.5 * r)) r *= 0.5;  // tighten a loose hint
    return std::min(r, cap);
}

namespace {

SampleGrid sample_target(const std::function<Complex(double)>& f, double t0, double h,
                         int n)
{
    std::vector<Complex> v(2 * n + 1);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int k = 0; k <= 2 * n; ++k) v[size_t(k)] = f(t0 + k * h);
    return SampleGrid(t0, h, std::move(v));
}

Complex eval_terms(const std::vector<Term>& terms, double t)
{
    Complex s(0.0, 0.0);
    for (const Term& tm : terms) s += tm.coef * std::exp(-tm.expo * t);
    return s;
}

} // namespace

TermsReport multipass_fit(const Target& target, FitConfig cfg)
{
    if (!(cfg.eps > 0.0 && cfg.eps < 1.0))
        throw std::invalid_argument("multipass_fit: eps must be in (0,1)");

    double range = cfg.range;
    if (range <= 0.0) {
        range = (target.suggested_range > 0.0)
                    ? target.suggested_range
                    : probe_range(target.f, 0.1 * cfg.eps);
    }

    std::vector<double> intervals = cfg.multipass_intervals;
    if (intervals.empty()) {
        intervals.push_back(range);
        if (cfg.t_min > 0.0)
            while (intervals.back() > 100.0 * cfg.t_min)
                intervals.push_back(intervals.back() / 100.0);
    }

    std::vector<Term> accumulated;
    FitReport total;
    total.passes = int(intervals.size());
    total.eps_reached = true;

    for (size_t pass = 0; pass < intervals.size(); ++pass) {
        const double b = intervals[pass];
        int n = (pass < cfg.multipass_n.size() && cfg.multipass_n[pass] > 0)
                    ? cfg.multipass_n[pass]
                    : cfg.n;
        const double w_lo = (pass + 1 < intervals.size())
                                ? intervals[pass + 1]
                                : std::max(cfg.t_min, 0.0);
        const double w_hi = b;

        auto residual_fn = [&](double t) {
            return target.f(t) - eval_terms(accumulated, t);
        };

        bool window_ok = false;
        double window_resid = 0.0;
        std::vector<Term> pass_terms;
        FitReport pass_report;

        for (int attempt = 0; attempt < 2 && !window_ok; ++attempt) {
            double t0;
            if (pass < cfg.multipass_offsets.size() && cfg.multipass_offsets[pass] >= 0.0)
                t0 = cfg.multipass_offsets[pass];
            else if (cfg.grid_offset >= 0.0 && pass == 0)
                t0 = cfg.grid_offset;
            else
                t0 = 0.0;
            double h;
            if (t0 == 0.0 && target.singular_at_zero) {
                h = b / (2.0 * n + 0.5);
                t0 = 0.5 * h;
            } else {
                h = (b - t0) / (2.0 * n);
            }

            const SampleGrid grid = sample_target(residual_fn, t0, h, n);

            // residual already below target on this interval: nothing to add
            double grid_peak = 0.0;
            for (const Complex& v : grid.values)
                grid_peak = std::max(grid_peak, std::abs(v));
            if (grid_peak <= 0.5 * cfg.eps) {
                window_ok = true;
                window_resid = grid_peak;
                pass_terms.clear();
                pass_report = FitReport{};
                break;
            }

            auto [terms, report] = (cfg.method == Method::pencil)
                                       ? fit_matrix_pencil(grid, cfg)
                                       : fit_con_eigen(grid, cfg);

            window_resid = 0.0;
            for (size_t k = 0; k < grid.values.size(); ++k) {
                const double t = grid.t(int(k));
                if (t < w_lo || t > w_hi) continue;
                window_resid = std::max(window_resid,
                                        std::abs(grid.values[k] - eval_terms(terms, t)));
            }
            window_ok = window_resid <= 10.0 * cfg.eps;
            pass_terms = std::move(terms);
            pass_report = report;
            if (!window_ok) n *= 2;  // one retry with doubled sampling
        }

        accumulated.insert(accumulated.end(), pass_terms.begin(), pass_terms.end());
        total.max_residual = std::max(total.max_residual, window_resid);
        total.sigma_ratio = std::max(total.sigma_ratio, pass_report.sigma_ratio);
        total.sigma0 = std::max(total.sigma0, pass_report.sigma0);
        total.cond_estimate = std::max(total.cond_estimate, pass_report.cond_estimate);

        if (!window_ok) {
            // pass failed to reduce the residual: return the partial result
            total.eps_reached = false;
            total.passes = int(pass) + 1;
            break;
        }
    }

    total.terms_kept = int(accumulated.size());
    return {accumulated, total};
}

ExpSumDensity reduce(const ExpSumDensity& d, double eps, FitConfig cfg)
{
    if (d.empty()) {
        FitReport rep;
        rep.empty_result = true;
        return ExpSumDensity(d.alpha(), {}, d.im_tol(), rep);
    }

    double min_re = std::numeric_limits<double>::max();
    double max_re = 0.0;
    for (const Term& t : d.terms()) {
        min_re = std::min(min_re, t.expo.real());
        max_re = std::max(max_re, t.expo.real());
    }

    Target target;
    target.f = [&d](double t) { return d.kernel(t); };
    target.singular_at_zero = false;
    target.suggested_range = cfg.range > 0.0
                                 ? cfg.range
                                 : probe_range(target.f, 0.1 * eps, 1.0 / min_re);
    // resolve the fastest modes: shrink passes down to their time scale
    if (cfg.t_min <= 0.0 && cfg.multipass_intervals.empty())
        cfg.t_min = std::min(target.suggested_range * 1e-2, 0.01 / max_re);

    // nothing to fit when the kernel is below eps everywhere
    double peak = 0.0;
    for (int k = 0; k <= 64; ++k) {
        const double t = target.suggested_range * k / 64.0;
        peak = std::max(peak, std::abs(d.kernel(t)));
    }
    if (peak < eps) {
        FitReport rep;
        rep.empty_result = true;
        return ExpSumDensity(d.alpha(), {}, d.im_tol(), rep);
    }

    cfg.eps = eps;
    auto [terms, report] = multipass_fit(target, cfg);

    if (terms.size() >= d.terms().size()) {
        // keep the smaller representation
        FitReport rep = d.report().value_or(FitReport{});
        rep.terms_kept = d.size();
        ExpSumDensity same(d.alpha(), d.terms(), d.im_tol(), rep);
        same.provenance = d.provenance;
        return same;
    }
    ExpSumDensity out(d.alpha(), std::move(terms), std::max(d.im_tol(), 10.0 * eps),
                      report);
    out.provenance = d.provenance;
    return out;
}

} // namespace expdens::prony
