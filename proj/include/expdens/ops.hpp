///
/// \file ops.hpp
///
/// The calculus on densities: PDFs of sums, products and quotients of
/// independent non-negative variables, computed through closed-form kernels
/// and recompressed into the exponential-sum representation.
///
#ifndef EXPDENS_OPS_HPP
#define EXPDENS_OPS_HPP

#include "expdens/expsum.hpp"
#include "expdens/prony.hpp"

namespace expdens::ops {

using prony::FitConfig;

/// Kernel handed to the fitters: the monomial power factored out of the
/// result plus the pointwise evaluator of the remaining smooth part.
struct KernelEvaluator {
    double monomial_exponent = 0.0;  ///< result is t^monomial_exponent * eval(t)
    std::function<Complex(double)> eval;
    double suggested_range = 0.0;
    bool singular_at_zero = false;
};

/// Closed-form kernels of the three operations (exposed for tests and for
/// direct evaluation without compression).
KernelEvaluator sum_kernel(const ExpSumDensity& f, const ExpSumDensity& g,
                           double eps_hint = 1e-10);
KernelEvaluator product_kernel(const ExpSumDensity& f, const ExpSumDensity& g,
                               double eps_hint = 1e-10);
KernelEvaluator quotient_kernel(const ExpSumDensity& f, const ExpSumDensity& g,
                                double eps_hint = 1e-10);

/// PDF of X + Y via the confluent-hypergeometric kernel; monomial exponent
/// alpha + beta - 1.
ExpSumDensity sum_pdf(const ExpSumDensity& f, const ExpSumDensity& g,
                      FitConfig cfg = {});

/// PDF of X * Y via the Bessel-K kernel; monomial exponent
/// (alpha + beta - 2 - |alpha - beta|) / 2.
ExpSumDensity product_pdf(const ExpSumDensity& f, const ExpSumDensity& g,
                          FitConfig cfg = {});

/// PDF of X * Y via trapezoidal discretization of the Laplace-type integral
/// representation; requires Re(xi_m eta_n) > 0 for all pairs. The raw
/// discretization is compressed with reduce().
ExpSumDensity product_pdf_trapezoid(const ExpSumDensity& f, const ExpSumDensity& g,
                                    FitConfig cfg = {});

/// Weight sigma(tau) of the trapezoidal product representation (test hook).
Complex product_trapezoid_weight(const ExpSumDensity& f, const ExpSumDensity& g,
                                 double tau);

/// PDF of X / Y via the power-law kernel; monomial exponent alpha - 1. The
/// representation is certified on [0, R]; the truncated tail mass is
/// recorded in the report.
ExpSumDensity quotient_pdf(const ExpSumDensity& f, const ExpSumDensity& g,
                           FitConfig cfg = {});

/// PDF of X^k for k a power of two, by repeated squaring of iid copies.
ExpSumDensity power_pdf(const ExpSumDensity& f, int k, FitConfig cfg = {});

} // namespace expdens::ops

#endif
