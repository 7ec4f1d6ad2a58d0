///
/// \file catalog.hpp
///
/// Parametric input distributions and the recipes that bring them into the
/// exponential-sum representation.
///
#ifndef EXPDENS_CATALOG_HPP
#define EXPDENS_CATALOG_HPP

#include <string>

#include "expdens/expsum.hpp"
#include "expdens/prony.hpp"

namespace expdens::catalog {

enum class Family { gamma, nakagami, weibull, lomax, cauchy_abs_tail };

struct DistributionSpec {
    Family family = Family::gamma;
    double p1 = 1.0;  ///< gamma alpha | nakagami m | weibull lambda | lomax alpha
    double p2 = 1.0;  ///< gamma beta  | nakagami Omega | weibull k  | lomax lambda
    prony::FitConfig fit;

    /// Cauchy pipeline constants (§ defaults; override through here).
    double cauchy_h0 = 0.25;
    int cauchy_j_min = -70;
    int cauchy_j_max = 5;
    double cauchy_break = 7.4748;
    double cauchy_prune = 0.33e-12;
};

/// Parse "gamma:2,2", "exp:1", "nakagami:1,1", "weibull:1,1.5", "lomax:5,2"
/// or "cauchy_abs_tail". Throws std::invalid_argument on bad input.
DistributionSpec parse_spec(const std::string& text);

/// True density evaluator of the family (reference, no approximation).
double reference_pdf(const DistributionSpec& spec, double x);

/// Bring the distribution into exponential-sum form. Gamma is exact
/// (single term); the others fit their non-monomial factor.
ExpSumDensity to_expsum(const DistributionSpec& spec);

/// The pure Laplace-transform tail discretization of the standard Cauchy
/// density 1/(pi(1+x^2)) (valid for x >= cauchy_break). Test hook and
/// building block of the cauchy_abs_tail pipeline.
ExpSumDensity cauchy_tail_terms(const DistributionSpec& spec);

/// Tail + head approximation of 1/(pi(1+x^2)) before the factor-two
/// rescaling to the half-line |X| density, pruned at cauchy_prune.
ExpSumDensity cauchy_full_approx(const DistributionSpec& spec);

std::string family_name(Family f);

} // namespace expdens::catalog

#endif
