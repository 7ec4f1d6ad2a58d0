#include "expdens/specfun.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace expdens::specfun {

namespace {

constexpr double kEulerGamma = 0.57721566490153286061;
constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// Double-double arithmetic, used only to accumulate the 1F1 Taylor series
// where oscillatory arguments cancel up to ~e^{|z|} of the largest term.
// ---------------------------------------------------------------------------

struct DD {
    double hi = 0.0;
    double lo = 0.0;
};

inline DD quick_two_sum(double a, double b)
{
    const double s = a + b;
    return {s, b - (s - a)};
}

inline DD two_sum(double a, double b)
{
    const double s = a + b;
    const double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

inline DD two_prod(double a, double b)
{
    const double p = a * b;
    return {p, std::fma(a, b, -p)};
}

inline DD dd_add(DD a, DD b)
{
    DD s = two_sum(a.hi, b.hi);
    s.lo += a.lo + b.lo;
    return quick_two_sum(s.hi, s.lo);
}

inline DD dd_neg(DD a) { return {-a.hi, -a.lo}; }

inline DD dd_sub(DD a, DD b) { return dd_add(a, dd_neg(b)); }

inline DD dd_mul_d(DD a, double b)
{
    DD p = two_prod(a.hi, b);
    p.lo += a.lo * b;
    return quick_two_sum(p.hi, p.lo);
}

inline DD dd_mul(DD a, DD b)
{
    DD p = two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return quick_two_sum(p.hi, p.lo);
}

inline DD dd_div(DD a, DD b)
{
    const double q1 = a.hi / b.hi;
    DD r = dd_sub(a, dd_mul_d(b, q1));
    const double q2 = r.hi / b.hi;
    r = dd_sub(r, dd_mul_d(b, q2));
    const double q3 = r.hi / b.hi;
    DD q = quick_two_sum(q1, q2);
    return dd_add(q, {q3, 0.0});
}

struct DDC {
    DD re, im;
};

inline DDC ddc_add(DDC a, DDC b) { return {dd_add(a.re, b.re), dd_add(a.im, b.im)}; }

inline DDC ddc_mul_complex(DDC t, Complex z)
{
    const double x = z.real(), y = z.imag();
    return {dd_sub(dd_mul_d(t.re, x), dd_mul_d(t.im, y)),
            dd_add(dd_mul_d(t.re, y), dd_mul_d(t.im, x))};
}

inline DDC ddc_mul_dd(DDC t, DD s) { return {dd_mul(t.re, s), dd_mul(t.im, s)}; }

inline DDC ddc_div_dd(DDC t, DD s) { return {dd_div(t.re, s), dd_div(t.im, s)}; }

inline double ddc_abs(DDC t) { return std::hypot(t.re.hi, t.im.hi); }

inline Complex ddc_value(DDC t) { return {t.re.hi + t.re.lo, t.im.hi + t.im.lo}; }

// ---------------------------------------------------------------------------
// Riemann zeta at integer arguments >= 2, used by the stable evaluation of
// the even/odd parts of log Gamma(1 +- mu).
// ---------------------------------------------------------------------------

double zeta_int(int k)
{
    static const double low[] = {
        kPi * kPi / 6.0,                    // zeta(2)
        1.2020569031595942854,              // zeta(3)
        kPi * kPi * kPi * kPi / 90.0,       // zeta(4)
        1.0369277551433699263,              // zeta(5)
        std::pow(kPi, 6) / 945.0,           // zeta(6)
        1.0083492773819228268,              // zeta(7)
        std::pow(kPi, 8) / 9450.0,          // zeta(8)
        1.0020083928260822144,              // zeta(9)
        std::pow(kPi, 10) / 93555.0,        // zeta(10)
    };
    if (k >= 2 && k <= 10) return low[k - 2];
    double s = 1.0;
    for (int n = 2;; ++n) {
        const double term = std::pow(double(n), -double(k));
        s += term;
        if (term < 1e-20 * s) break;
    }
    return s;
}

// log Gamma(1+x) = -gamma*x + sum_{k>=2} (-1)^k zeta(k) x^k / k, |x| <= 1/2.
// Split into even part E(mu) and odd part O(mu) so that
// Gamma(1+mu) = exp(E+O), Gamma(1-mu) = exp(E-O), with O/mu finite at mu=0.
void lgamma_parts(double mu, double& even, double& odd_over_mu)
{
    even = 0.0;
    odd_over_mu = -kEulerGamma;
    const double mu2 = mu * mu;
    double pe = mu2;  // mu^k for even k, starting k=2
    double po = mu2;  // mu^(k-1) for odd k, starting k=3
    for (int k = 2; k < 200; ++k) {
        if (k % 2 == 0) {
            const double term = zeta_int(k) * pe / k;
            even += term;
            pe *= mu2;
            if (std::abs(term) < 1e-19) break;
        } else {
            odd_over_mu -= zeta_int(k) * po / k;
            po *= mu2;
        }
    }
}

inline Complex sinhc(Complex w)
{
    if (std::abs(w) < 1e-2) {
        const Complex w2 = w * w;
        return 1.0 + w2 / 6.0 * (1.0 + w2 / 20.0 * (1.0 + w2 / 42.0));
    }
    return std::sinh(w) / w;
}

// 1/Gamma(x) for real x, any sign; zero at the poles.
double rgamma(double x)
{
    if (x > 0.0) {
        if (x > 171.62) return 0.0;
        return 1.0 / std::tgamma(x);
    }
    if (x == std::floor(x)) return 0.0;
    // reflection: 1/Gamma(x) = sin(pi x) Gamma(1-x) / pi
    const double g = std::tgamma(1.0 - x);
    if (!std::isfinite(g)) return 0.0;
    return std::sin(kPi * x) * g / kPi;
}

// ---------------------------------------------------------------------------
// 1F1 Taylor series in double-double accumulation; caller guarantees
// Re(z) >= 0 (apply Kummer's transformation first).
// ---------------------------------------------------------------------------

Complex kummer_taylor_dd(double a, double b, Complex z, const Accuracy& acc)
{
    DDC term{{1.0, 0.0}, {0.0, 0.0}};
    DDC sum = term;
    const double az = std::abs(z);
    const int kmax = std::max(acc.series_max_terms, int(4.0 * az) + 200);
    for (int k = 0; k < kmax; ++k) {
        term = ddc_mul_complex(term, z);
        term = ddc_mul_dd(term, two_sum(a, double(k)));
        term = ddc_div_dd(term, two_sum(b, double(k)));
        term = ddc_div_dd(term, {double(k + 1), 0.0});
        sum = ddc_add(sum, term);
        if (k > az && ddc_abs(term) < 1e-17 * ddc_abs(sum)) return ddc_value(sum);
    }
    throw std::runtime_error("kummer_1f1: Taylor series did not converge");
}

// Poincare-type series sum_k (c1)_k (c2)_k / k! * w^k truncated at its
// smallest term; w = 1/z or -1/z. Returns the sum, reports the magnitude of
// the smallest term as the truncation error estimate.
Complex asymptotic_series(double c1, double c2, Complex w, double& err)
{
    Complex term(1.0, 0.0);
    Complex sum = term;
    double best = 1.0;
    for (int k = 0; k < 200; ++k) {
        const Complex next = term * ((c1 + k) * (c2 + k) / double(k + 1)) * w;
        const double an = std::abs(next);
        if (an >= std::abs(term) && k > 2) break;  // divergent tail reached
        sum += next;
        term = next;
        best = an;
        if (an < 1e-18 * std::abs(sum)) break;
    }
    err = best;
    return sum;
}

struct AsymptoticParts {
    Complex s1, s2;   // the two branch series
    double e1, e2;    // truncation error estimates (series scale)
    bool ok;
};

AsymptoticParts kummer_asymptotic_parts(double a, double b, Complex z,
                                        const Accuracy& acc)
{
    AsymptoticParts parts;
    parts.s1 = asymptotic_series(b - a, 1.0 - a, 1.0 / z, parts.e1);
    parts.s2 = asymptotic_series(a, a - b + 1.0, -1.0 / z, parts.e2);
    parts.ok = (parts.e1 < acc.rel_tol * 1e2 * std::abs(parts.s1)) &&
               (parts.e2 < acc.rel_tol * 1e2 * std::abs(parts.s2));
    return parts;
}

} // namespace

double gamma_fn(double x)
{
    if (!(x > 0.0)) throw std::domain_error("gamma_fn: requires x > 0");
    if (x > 171.62) throw std::overflow_error("gamma_fn: Gamma(x) overflows double range");
    return std::tgamma(x);
}

double log_gamma(double x)
{
    if (!(x > 0.0)) throw std::domain_error("log_gamma: requires x > 0");
    return std::lgamma(x);
}

Complex pow_principal(Complex base, double expo)
{
    return std::exp(expo * std::log(base));
}

Complex gamma_times_pow(double a, Complex xi)
{
    if (!(a > 0.0)) throw std::domain_error("gamma_times_pow: requires a > 0");
    return std::exp(std::lgamma(a) - a * std::log(xi));
}

Complex kummer_1f1(double a, double b, Complex z, const Accuracy& acc)
{
    if (b <= 0.0 && b == std::floor(b))
        throw std::invalid_argument("kummer_1f1: b must not be a non-positive integer");
    if (z == Complex(0.0, 0.0)) return {1.0, 0.0};
    if (z.real() < 0.0) return std::exp(z) * kummer_1f1(b - a, b, -z, acc);
    if (z.real() > 700.0)
        throw std::overflow_error("kummer_1f1: e^z factor overflows; use kummer_bridge");

    if (std::abs(z) <= 40.0) return kummer_taylor_dd(a, b, z, acc);

    const auto parts = kummer_asymptotic_parts(a, b, z, acc);
    const Complex pref1 = std::exp(z + (a - b) * std::log(z) + std::lgamma(b)) * rgamma(a);
    const Complex pref2 = std::exp(-a * std::log(-z) + std::lgamma(b)) * rgamma(b - a);
    const Complex value = pref1 * parts.s1 + pref2 * parts.s2;
    const double err = std::abs(pref1) * parts.e1 + std::abs(pref2) * parts.e2;
    if (parts.ok && err <= acc.rel_tol * 1e2 * std::abs(value)) return value;
    if (std::abs(z) <= 60.0) return kummer_taylor_dd(a, b, z, acc);
    throw std::runtime_error("kummer_1f1: no convergent expansion for this argument");
}

Complex kummer_bridge(double alpha, double beta, Complex xi, Complex eta,
                      double t, const Accuracy& acc)
{
    if (t < 0.0) throw std::domain_error("kummer_bridge: t must be >= 0");
    Complex z = (xi - eta) * t;
    if (z.real() < 0.0) {
        // Kummer symmetry: e^{-xi t} 1F1(b,a+b;(xi-eta)t) is invariant under
        // swapping (alpha,xi) <-> (beta,eta).
        std::swap(alpha, beta);
        std::swap(xi, eta);
        z = -z;
    }
    const double c = alpha + beta;
    if (std::abs(z) <= 40.0)
        return std::exp(-xi * t) * kummer_taylor_dd(beta, c, z, acc);

    const auto parts = kummer_asymptotic_parts(beta, c, z, acc);
    const Complex t1 = std::exp(-eta * t - alpha * std::log(z) + std::lgamma(c)) *
                       rgamma(beta) * parts.s1;
    const Complex t2 = std::exp(-xi * t - beta * std::log(-z) + std::lgamma(c)) *
                       rgamma(alpha) * parts.s2;
    const Complex value = t1 + t2;
    const double err = std::abs(t1) * parts.e1 / std::max(std::abs(parts.s1), 1e-300) +
                       std::abs(t2) * parts.e2 / std::max(std::abs(parts.s2), 1e-300);
    if (parts.ok || err <= acc.rel_tol * 1e3 * std::abs(value) ||
        std::abs(value) < 1e-300)
        return value;
    if (std::abs(z) <= 60.0)
        return std::exp(-xi * t) * kummer_taylor_dd(beta, c, z, acc);
    throw std::runtime_error("kummer_bridge: no convergent expansion for this argument");
}

// ---------------------------------------------------------------------------
// Modified Bessel K
// ---------------------------------------------------------------------------

BesselKOrder::BesselKOrder(double nu, const Accuracy& acc) : acc_(acc)
{
    nu_ = std::abs(nu);  // K_{-nu} = K_nu
    steps_ = int(std::lround(nu_));
    mu_ = nu_ - steps_;
    lgamma_parts(mu_, even_lg_, odd_over_mu_);
    odd_lg_ = mu_ * odd_over_mu_;
}

Complex BesselKOrder::operator()(Complex z) const
{
    if (!(z.real() > 0.0))
        throw std::domain_error("bessel_k: requires Re(z) > 0");
    if (z.real() > 750.0) return {0.0, 0.0};  // silent underflow

    const double tol = acc_.rel_tol * 1e-1;
    Complex kmu, kmu1;

    if (std::abs(z) <= 2.0) {
        const Complex d = -std::log(0.5 * z);
        const Complex w = mu_ * d + odd_lg_;
        const double ee = std::exp(even_lg_);
        Complex f = ee * (d + odd_over_mu_) * sinhc(w);
        Complex p = 0.5 * std::exp(mu_ * d + even_lg_ + odd_lg_);
        Complex q = 0.5 * std::exp(-mu_ * d + even_lg_ - odd_lg_);
        Complex c(1.0, 0.0);
        const Complex z24 = 0.25 * z * z;
        Complex sum_k = f;
        Complex sum_k1 = p;
        const double mu2 = mu_ * mu_;
        bool converged = false;
        for (int k = 1; k <= acc_.series_max_terms; ++k) {
            f = (double(k) * f + p + q) / (double(k) * k - mu2);
            p /= (double(k) - mu_);
            q /= (double(k) + mu_);
            c *= z24 / double(k);
            const Complex del = c * f;
            sum_k += del;
            const Complex del1 = c * (p - double(k) * f);
            sum_k1 += del1;
            if (std::abs(del) < tol * std::abs(sum_k) &&
                std::abs(del1) < tol * std::abs(sum_k1)) {
                converged = true;
                break;
            }
        }
        if (!converged) throw std::runtime_error("bessel_k: series did not converge");
        kmu = sum_k;
        kmu1 = 2.0 / z * sum_k1;
    } else {
        // Steed/Thompson-Barnett continued fraction, valid for Re(z) > 0.
        const double mu2 = mu_ * mu_;
        const double a1 = 0.25 - mu2;
        Complex b = 2.0 * (1.0 + z);
        Complex d = 1.0 / b;
        Complex delh = d;
        Complex h = d;
        Complex q1(0.0, 0.0), q2(1.0, 0.0);
        Complex q(a1, 0.0);
        double cc = a1;
        double a = -a1;
        Complex s = 1.0 + q * delh;
        bool converged = false;
        const int it_max = std::max(acc_.series_max_terms, 10000);
        for (int i = 2; i <= it_max; ++i) {
            a -= 2.0 * (i - 1);
            cc = -a * cc / i;
            const Complex qnew = (q1 - b * q2) / a;
            q1 = q2;
            q2 = qnew;
            q += cc * qnew;
            b += 2.0;
            d = 1.0 / (b + a * d);
            delh = (b * d - 1.0) * delh;
            h += delh;
            const Complex dels = q * delh;
            s += dels;
            if (std::abs(dels) < tol * std::abs(s)) {
                converged = true;
                break;
            }
        }
        if (!converged)
            throw std::runtime_error("bessel_k: continued fraction did not converge");
        h = a1 * h;
        kmu = std::sqrt(kPi / (2.0 * z)) * std::exp(-z) / s;
        kmu1 = kmu * (mu_ + z + 0.5 - h) / z;
    }

    if (steps_ == 0) return kmu;
    for (int j = 1; j < steps_; ++j) {
        const Complex knext = kmu + (2.0 * (mu_ + j) / z) * kmu1;
        kmu = kmu1;
        kmu1 = knext;
    }
    return kmu1;
}

Complex bessel_k(double nu, Complex z, const Accuracy& acc)
{
    return BesselKOrder(nu, acc)(z);
}

} // namespace expdens::specfun
