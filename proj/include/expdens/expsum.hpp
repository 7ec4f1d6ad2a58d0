///
/// \file expsum.hpp
///
/// The density representation x^(alpha-1) * sum_m a_m e^(-xi_m x) with
/// complex coefficients and exponents, Re(xi_m) > 0, plus its evaluation,
/// integration, moments, normalization and pruning.
///
#ifndef EXPDENS_EXPSUM_HPP
#define EXPDENS_EXPSUM_HPP

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace expdens {

using Complex = std::complex<double>;

/// One term a * e^(-xi * x) of an exponential sum.
struct Term {
    Complex coef;
    Complex expo;
};

/// Diagnostics attached to a fitted representation.
struct FitReport {
    int terms_kept = 0;
    double sigma_ratio = 0.0;   ///< sigma_M / sigma_0 of the Hankel spectrum
    double max_residual = 0.0;  ///< a posteriori max |v_n - sum c_k gamma_k^n|
    int passes = 1;
    bool eps_reached = true;
    bool pruned_all = false;
    bool empty_result = false;           ///< target below eps everywhere
    double sigma0 = 0.0;                 ///< largest Hankel singular value
    double cond_estimate = 0.0;          ///< Vandermonde condition estimate
    double truncated_tail_mass = 0.0;    ///< quotient-style tail truncation
};

/// Equispaced samples t_n = t0 + n h, n = 0..2N, of a target function.
struct SampleGrid {
    double t0 = 0.0;
    double h = 0.0;
    std::vector<Complex> values;  ///< size 2N+1 (odd)

    SampleGrid() = default;
    SampleGrid(double t0_, double h_, std::vector<Complex> v);

    int n() const { return (int(values.size()) - 1) / 2; }
    double t(int k) const { return t0 + k * h; }
};

class ExpSumDensity {
public:
    ExpSumDensity() = default;  ///< empty density (evaluates to zero)

    /// Validates alpha > 0 and Re(xi) > 0 for every term; merges terms whose
    /// exponents collide within 1e-12 * (1 + |xi|).
    ExpSumDensity(double alpha, std::vector<Term> terms, double im_tol = 1e-9,
                  std::optional<FitReport> report = std::nullopt);

    double alpha() const { return alpha_; }
    const std::vector<Term>& terms() const { return terms_; }
    double im_tol() const { return im_tol_; }
    const std::optional<FitReport>& report() const { return report_; }
    void set_report(FitReport r) { report_ = std::move(r); }
    bool empty() const { return terms_.empty(); }
    int size() const { return int(terms_.size()); }

    /// Re( t^(alpha-1) sum a_m e^(-xi_m t) ). Throws std::domain_error for
    /// t = 0 with alpha < 1 and std::runtime_error when the imaginary
    /// residue exceeds im_tol * max(1, |Re|).
    double evaluate(double t) const;

    /// The complex value without the realness check (internal and test use).
    Complex evaluate_complex(double t) const;

    /// Kernel part sum a_m e^(-xi_m t), without the monomial factor.
    Complex kernel(double t) const;

    std::string provenance;  ///< optional family tag carried through files

private:
    double alpha_ = 1.0;
    std::vector<Term> terms_;
    double im_tol_ = 1e-9;
    std::optional<FitReport> report_;
};

/// Integral over (0, inf): Re( sum a_m Gamma(alpha) xi_m^(-alpha) ).
double total_mass(const ExpSumDensity& d);

/// Raw moment E[Z^k] = Re( sum a_m Gamma(alpha+k) xi_m^(-(alpha+k)) ).
double moment(const ExpSumDensity& d, int k);

/// Minimal-norm coefficient correction enforcing total mass exactly one.
ExpSumDensity normalize(const ExpSumDensity& d);

struct PruneResult {
    ExpSumDensity density;
    double dropped_mass = 0.0;  ///< |mass contribution| of removed terms
    int dropped_terms = 0;
    bool emptied = false;
};

/// Remove terms with coefficient magnitude |a_m| below the threshold.
PruneResult prune(const ExpSumDensity& d, double threshold);

/// E[u(Z)] by quadrature, treating the density as a weight.
/// Throws std::runtime_error with the achieved estimate on non-convergence.
double expectation(const ExpSumDensity& d, const std::function<double(double)>& u,
                   double quad_tol = 1e-11);

/// Closed-form E[u(Z)] when u is itself a monomial-times-exponential-sum.
double expectation(const ExpSumDensity& d, const ExpSumDensity& u);

} // namespace expdens

#endif
