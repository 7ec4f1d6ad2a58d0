///
/// \file quadrature.hpp
///
/// Deterministic quadrature helpers: tanh-sinh on a finite interval and a
/// trapezoidal rule on the exponential substitution x = e^u for integrals
/// over (0, inf) with exponentially decaying integrands.
///
#ifndef EXPDENS_QUADRATURE_HPP
#define EXPDENS_QUADRATURE_HPP

#include <functional>

namespace expdens::quadrature {

struct Result {
    double value = 0.0;
    double error_estimate = 0.0;
    bool converged = false;
};

/// Tanh-sinh (double exponential) quadrature on (a, b); tolerates integrable
/// endpoint singularities.
Result tanh_sinh(const std::function<double(double)>& f, double a, double b,
                 double tol, int max_level = 12);

/// Integral of g over (0, inf) via x = e^u and the trapezoidal rule with
/// automatic truncation and step halving.
Result integrate_positive_axis(const std::function<double(double)>& g, double tol);

} // namespace expdens::quadrature

#endif
