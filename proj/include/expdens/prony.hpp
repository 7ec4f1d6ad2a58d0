///
/// \file prony.hpp
///
/// Recovery of exponential sums from equispaced samples: matrix-pencil and
/// con-eigenvector polynomial fitters, Vandermonde coefficient solve,
/// multipass shrinking-interval refinement and term-count reduction.
///
#ifndef EXPDENS_PRONY_HPP
#define EXPDENS_PRONY_HPP

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "expdens/expsum.hpp"
#include "expdens/hankel.hpp"

namespace expdens::prony {

enum class Method { pencil, coneig };

struct FitConfig {
    double eps = 1e-10;       ///< target absolute accuracy on the samples
    double range = 0.0;       ///< fitting range R; 0 -> probe automatically
    int n = 2000;             ///< N, giving 2N+1 samples per pass
    Method method = Method::pencil;
    double grid_offset = -1.0;  ///< t0; negative -> 0, or h/2 when singular
    std::vector<double> multipass_intervals;  ///< b_1 > b_2 > ... (empty -> auto)
    std::vector<int> multipass_n;             ///< per-pass N override
    std::vector<double> multipass_offsets;    ///< per-pass t0 override
    double t_min = 0.0;       ///< lower edge of the certified interval
    std::uint64_t seed = 0x9e3779b97f4a7c15ULL;
    hankel::RandomizedSvdConfig svd;
    bool renormalize = false; ///< calculus outputs: renormalize mass to 1
};

/// Target function handed to the fitters: complex evaluator plus hints.
struct Target {
    std::function<Complex(double)> f;
    bool singular_at_zero = false;
    double suggested_range = 0.0;
};

using TermsReport = std::pair<std::vector<Term>, FitReport>;

/// Algorithm: con-eigenvectors by randomized SVD, shifted-subspace pencil
/// U1^+ U2, eigenvalue nodes, Vandermonde least-squares coefficients.
TermsReport fit_matrix_pencil(const SampleGrid& grid, const FitConfig& cfg);

/// Algorithm: single con-eigenvector, roots of its polynomial inside the
/// unit disk, Vandermonde least-squares coefficients. The companion-matrix
/// rooting is limited to N <= 1024.
TermsReport fit_con_eigen(const SampleGrid& grid, const FitConfig& cfg);

/// Least-squares solve of the (2N+1) x M Vandermonde system V c = v by
/// column-pivoted QR (never normal equations). Throws on duplicate nodes.
Eigen::VectorXcd vandermonde_coeffs(const Eigen::VectorXcd& nodes,
                                    const SampleGrid& grid,
                                    double* cond_estimate = nullptr);

/// Repeated fitting on shrinking intervals [0,b_i] of the running residual;
/// the concatenated representation is certified on [t_min, R].
TermsReport multipass_fit(const Target& target, FitConfig cfg);

/// Resample the kernel of d on an automatically chosen range and refit,
/// returning a representation with fewer or equal terms.
ExpSumDensity reduce(const ExpSumDensity& d, double eps, FitConfig cfg = {});

/// Probe |f| outward from `scale` until it stays below eps; used to choose R.
double probe_range(const std::function<Complex(double)>& f, double eps,
                   double scale_hint = 1.0, double cap = 1e9);

} // namespace expdens::prony

#endif
