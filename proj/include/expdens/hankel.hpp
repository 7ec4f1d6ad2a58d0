///
/// \file hankel.hpp
///
/// Implicit Hankel operator H = [v_{i+j}], i,j = 0..N, held by its 2N+1
/// defining samples and applied through FFT convolution, with a randomized
/// low-rank SVD and con-eigenvector extraction (Takagi phase correction).
///
#ifndef EXPDENS_HANKEL_HPP
#define EXPDENS_HANKEL_HPP

#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Dense>

namespace expdens::hankel {

using Complex = std::complex<double>;
using VectorXc = Eigen::VectorXcd;
using MatrixXc = Eigen::MatrixXcd;

class HankelOperator {
public:
    /// Takes the 2N+1 samples v_0..v_{2N}; the count must be odd.
    explicit HankelOperator(std::vector<Complex> samples);
    ~HankelOperator();

    HankelOperator(const HankelOperator&) = delete;
    HankelOperator& operator=(const HankelOperator&) = delete;

    int n() const { return n_; }
    int dim() const { return n_ + 1; }
    const std::vector<Complex>& samples() const { return samples_; }

    /// H x via fast circular convolution, O(N log N).
    VectorXc apply(const VectorXc& x) const;

    /// H* x = conj(H conj(x)) (H is complex symmetric).
    VectorXc apply_adjoint(const VectorXc& x) const;

private:
    std::vector<Complex> samples_;
    int n_ = 0;
    struct FftPlan;
    std::unique_ptr<FftPlan> fft_;
};

struct RandomizedSvdConfig {
    int oversampling = 10;       ///< p >= 4
    int initial_rank_guess = 16;
    std::uint64_t seed = 0x243f6a8885a308d3ULL;
    int max_rank = 0;            ///< 0 -> min(N+1, 512)
};

struct SvdResult {
    MatrixXc u_conj;          ///< conjugated right factor: columns span the
                              ///< con-eigenvector space used by the pencil
    Eigen::VectorXd sigma;    ///< non-increasing singular values
    int m = 0;                ///< count of sigma_k with sigma_k/sigma_0 >= eps
    bool eps_reached = true;  ///< false when the rank cap was hit first
};

/// Randomized SVD of the Hankel operator: sketch, pivoted QR, adjoint
/// application, small SVD; doubles the rank guess until the smallest pivot
/// falls below eps times the leading one.
SvdResult randomized_svd(const HankelOperator& h, double eps,
                         const RandomizedSvdConfig& cfg = {});

struct ConEigResult {
    VectorXc u;           ///< con-eigenvector: H u ~= sigma_m conj(u)
    double sigma_m = 0.0;
    double sigma0 = 0.0;
    int m = 0;
    bool eps_reached = true;
};

/// Con-eigenvector of the largest singular value with sigma_M/sigma_0 < eps,
/// phase-corrected so that H u = sigma_M conj(u) up to the stated residual.
ConEigResult con_eigenvector(const HankelOperator& h, double eps,
                             const RandomizedSvdConfig& cfg = {});

} // namespace expdens::hankel

#endif
