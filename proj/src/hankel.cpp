#include "expdens/hankel.hpp"

#include <cmath>
#include <mutex>
#include <random>
#include <stdexcept>

#include <fftw3.h>

namespace expdens::hankel {

namespace {

std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

int next_pow2(int n)
{
    int p = 1;
    while (p < n) p <<= 1;
    return p;
}

// Deterministic standard complex normal entries (Box-Muller over mt19937_64),
// independent of the platform's std::normal_distribution.
class GaussianSource {
public:
    explicit GaussianSource(std::uint64_t seed) : rng_(seed) {}

    Complex next()
    {
        const double u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        // scale 1/sqrt(2) per component -> unit-variance complex normal
        return {r * std::cos(2.0 * M_PI * u2) * M_SQRT1_2,
                r * std::sin(2.0 * M_PI * u2) * M_SQRT1_2};
    }

private:
    std::mt19937_64 rng_;

    double uniform01()
    {
        // in (0,1]; avoids log(0)
        return (double(rng_() >> 11) + 1.0) * 0x1.0p-53;
    }
};

} // namespace

struct HankelOperator::FftPlan {
    int len = 0;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
    fftw_complex* in = nullptr;
    fftw_complex* out = nullptr;
    std::vector<Complex> v_hat;  // FFT of the padded sample sequence
    std::mutex scratch_mutex;

    ~FftPlan()
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
        if (in) fftw_free(in);
        if (out) fftw_free(out);
    }
};

HankelOperator::HankelOperator(std::vector<Complex> samples)
    : samples_(std::move(samples))
{
    if (samples_.empty() || samples_.size() % 2 == 0)
        throw std::invalid_argument("HankelOperator: needs 2N+1 samples");
    n_ = (int(samples_.size()) - 1) / 2;

    fft_ = std::make_unique<FftPlan>();
    fft_->len = next_pow2(3 * n_ + 2);
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fft_->in = fftw_alloc_complex(fft_->len);
        fft_->out = fftw_alloc_complex(fft_->len);
        fft_->fwd = fftw_plan_dft_1d(fft_->len, fft_->in, fft_->out, FFTW_FORWARD,
                                     FFTW_ESTIMATE);
        fft_->bwd = fftw_plan_dft_1d(fft_->len, fft_->in, fft_->out, FFTW_BACKWARD,
                                     FFTW_ESTIMATE);
    }

    auto* in = reinterpret_cast<Complex*>(fft_->in);
    std::fill(in, in + fft_->len, Complex(0.0, 0.0));
    std::copy(samples_.begin(), samples_.end(), in);
    fftw_execute(fft_->fwd);
    const auto* out = reinterpret_cast<const Complex*>(fft_->out);
    fft_->v_hat.assign(out, out + fft_->len);
}

HankelOperator::~HankelOperator() = default;

VectorXc HankelOperator::apply(const VectorXc& x) const
{
    if (int(x.size()) != n_ + 1)
        throw std::invalid_argument("HankelOperator::apply: dimension mismatch");
    std::lock_guard<std::mutex> lock(fft_->scratch_mutex);
    const int len = fft_->len;
    auto* in = reinterpret_cast<Complex*>(fft_->in);
    auto* out = reinterpret_cast<Complex*>(fft_->out);

    std::fill(in, in + len, Complex(0.0, 0.0));
    for (int j = 0; j <= n_; ++j) in[j] = x[n_ - j];
    fftw_execute(fft_->fwd);
    for (int k = 0; k < len; ++k) in[k] = out[k] * fft_->v_hat[k];
    fftw_execute(fft_->bwd);

    VectorXc y(n_ + 1);
    const double scale = 1.0 / len;
    for (int i = 0; i <= n_; ++i) y[i] = out[n_ + i] * scale;
    return y;
}

VectorXc HankelOperator::apply_adjoint(const VectorXc& x) const
{
    return apply(x.conjugate()).conjugate();
}

SvdResult randomized_svd(const HankelOperator& h, double eps,
                         const RandomizedSvdConfig& cfg)
{
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("randomized_svd: eps must be in (0,1)");
    if (cfg.oversampling < 4)
        throw std::invalid_argument("randomized_svd: oversampling must be >= 4");

    const int dim = h.dim();
    const int cap = std::min(dim, cfg.max_rank > 0 ? cfg.max_rank : std::min(dim, 512));

    SvdResult res;

    double smax = 0.0;
    for (const Complex& v : h.samples()) smax = std::max(smax, std::abs(v));
    if (smax == 0.0) {  // zero operator
        res.u_conj = MatrixXc(dim, 0);
        res.sigma = Eigen::VectorXd(0);
        res.m = 0;
        return res;
    }

    int guess = std::max(1, cfg.initial_rank_guess);
    for (;;) {
        const int mp = std::min(dim, guess + cfg.oversampling);

        GaussianSource gauss(cfg.seed);
        MatrixXc sketch(dim, mp);
        for (int j = 0; j < mp; ++j)
            for (int i = 0; i < dim; ++i) sketch(i, j) = gauss.next();

        MatrixXc range(dim, mp);
        for (int j = 0; j < mp; ++j) range.col(j) = h.apply(sketch.col(j));

        Eigen::ColPivHouseholderQR<MatrixXc> qr(range);
        const auto rdiag = qr.matrixR().diagonal().head(mp).cwiseAbs().eval();
        const double piv_max = rdiag(0);
        const double piv_min = rdiag(mp - 1);

        if (piv_min >= eps * piv_max && mp < cap) {
            guess *= 2;
            continue;
        }

        MatrixXc q = qr.householderQ() * MatrixXc::Identity(dim, mp);
        MatrixXc b(dim, mp);
        for (int j = 0; j < mp; ++j) b.col(j) = h.apply_adjoint(q.col(j));

        Eigen::JacobiSVD<MatrixXc> svd(b, Eigen::ComputeThinU | Eigen::ComputeThinV);
        // B = H*Q = U S V*, hence H = Q V S U*: right factor U carries the
        // con-eigenvector structure after conjugation.
        res.u_conj = svd.matrixU().conjugate();
        res.sigma = svd.singularValues();

        const double s0 = res.sigma.size() ? res.sigma(0) : 0.0;
        int m = 0;
        while (m < res.sigma.size() && res.sigma(m) >= eps * s0) ++m;
        res.m = m;
        res.eps_reached = (m < res.sigma.size());

        if (!res.eps_reached && mp < cap) {
            guess *= 2;
            continue;
        }
        return res;
    }
}

ConEigResult con_eigenvector(const HankelOperator& h, double eps,
                             const RandomizedSvdConfig& cfg)
{
    const SvdResult svd = randomized_svd(h, eps, cfg);
    ConEigResult res;
    res.eps_reached = svd.eps_reached;
    res.m = svd.m;
    res.sigma0 = svd.sigma.size() ? svd.sigma(0) : 0.0;
    if (svd.sigma.size() == 0) return res;  // zero operator

    const int idx = std::min<int>(svd.m, int(svd.sigma.size()) - 1);
    res.sigma_m = svd.sigma(idx);
    VectorXc u = svd.u_conj.col(idx).conjugate();  // right singular vector

    // Takagi phase: H u = sigma d conj(u) with |d| = 1; rotating u by
    // d^(-1/2) makes it a con-eigenvector.
    if (res.sigma_m > 1e-280 * res.sigma0 && res.sigma_m > 0.0) {
        const VectorXc hu = h.apply(u);
        Complex d(0.0, 0.0);
        for (int i = 0; i < u.size(); ++i) d += u[i] * hu[i];
        d /= res.sigma_m;
        if (std::abs(d) > 0.5) {
            const double theta = std::arg(d);
            u *= std::polar(1.0, -0.5 * theta);
        }
    }
    res.u = std::move(u);
    return res;
}

} // namespace expdens::hankel
