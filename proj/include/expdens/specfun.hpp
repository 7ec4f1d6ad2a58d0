///
/// \file specfun.hpp
///
/// Special-function kernels: gamma, confluent hypergeometric 1F1 with real
/// parameters and complex argument, and the modified Bessel function K_nu
/// for real order nu >= 0 and complex argument in the right half-plane.
///
#ifndef EXPDENS_SPECFUN_HPP
#define EXPDENS_SPECFUN_HPP

#include <complex>

namespace expdens::specfun {

using Complex = std::complex<double>;

/// Accuracy knobs shared by the series/continued-fraction evaluators.
struct Accuracy {
    double rel_tol = 1e-14;
    int series_max_terms = 2000;
};

/// Gamma function on the positive real axis. Throws std::overflow_error
/// once Gamma(x) exceeds the double range (x > 171.62).
double gamma_fn(double x);

/// log Gamma(x), x > 0. Used to form Gamma(a) * xi^(-a) without overflow.
double log_gamma(double x);

/// Principal-branch power base^expo for complex base off the negative real
/// axis. Equivalent to std::pow but kept as a named entry point.
Complex pow_principal(Complex base, double expo);

/// Gamma(a) * xi^(-a) with the principal branch, composed in log space.
Complex gamma_times_pow(double a, Complex xi);

/// Kummer's function 1F1(a, b; z).
///
/// For Re(z) < 0 the first Kummer transformation 1F1(a,b;z) =
/// e^z 1F1(b-a,b;-z) is applied before summing. Moderate arguments use the
/// Taylor series accumulated in double-double arithmetic; large |z| uses the
/// two-branch asymptotic expansion. Throws std::runtime_error when neither
/// converges to the requested tolerance.
Complex kummer_1f1(double a, double b, Complex z, const Accuracy& acc = {});

/// e^(-xi*t) * 1F1(beta, alpha+beta; (xi-eta)*t), evaluated without forming
/// either overflowing factor. This is the bounded per-pair kernel of the
/// sum-of-variables formula.
Complex kummer_bridge(double alpha, double beta, Complex xi, Complex eta,
                      double t, const Accuracy& acc = {});

/// Modified Bessel function of the second kind, K_nu(z), nu >= 0 real,
/// Re(z) > 0. Silently underflows to zero for large Re(z). Symmetric in the
/// sign of the order (K_{-nu} = K_nu), so only nu >= 0 is exposed.
Complex bessel_k(double nu, Complex z, const Accuracy& acc = {});

/// Evaluator for many K_nu(z) calls at a fixed order: precomputes the
/// order-dependent constants of the small-|z| series once.
class BesselKOrder {
public:
    explicit BesselKOrder(double nu, const Accuracy& acc = {});

    Complex operator()(Complex z) const;

    double order() const { return nu_; }

private:
    double nu_;
    int steps_;      // upward recurrences from mu to nu
    double mu_;      // fractional part in [-1/2, 1/2]
    double even_lg_; // even part of log Gamma(1 -+ mu)
    double odd_lg_;  // odd part of log Gamma(1 -+ mu)
    double odd_over_mu_;
    Accuracy acc_;
};

} // namespace expdens::specfun

#endif
