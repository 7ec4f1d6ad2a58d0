#include <doctest.h>

#include <cmath>
#include <complex>

#include "expdens/specfun.hpp"
#include "support/oracles.hpp"

using namespace expdens;
using specfun::Complex;

namespace {
double rel_err(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }
}

TEST_CASE("gamma_fn known values")
{
    CHECK(specfun::gamma_fn(5.0) == doctest::Approx(24.0).epsilon(1e-15));
    CHECK(specfun::gamma_fn(0.5) ==
          doctest::Approx(std::sqrt(M_PI)).epsilon(1e-15));
    CHECK(specfun::gamma_fn(1.0) == doctest::Approx(1.0));
}

TEST_CASE("gamma_fn cross-checked against the integral oracle")
{
    for (double x : {0.7, 1.9, 7.3, 23.5}) {
        const double mine = specfun::gamma_fn(x);
        const double ref = oracles::gamma_integral(x);
        CHECK(std::abs(mine - ref) / ref < 1e-13);
    }
}

TEST_CASE("gamma_fn domain and overflow errors")
{
    CHECK_THROWS_AS(specfun::gamma_fn(0.0), std::domain_error);
    CHECK_THROWS_AS(specfun::gamma_fn(-1.5), std::domain_error);
    CHECK_THROWS_AS(specfun::gamma_fn(200.0), std::overflow_error);
}

TEST_CASE("kummer_1f1 closed forms")
{
    CHECK(specfun::kummer_1f1(3, 5, {0, 0}).real() == 1.0);
    CHECK(rel_err(specfun::kummer_1f1(1, 2, {1, 0}), {std::exp(1.0) - 1.0, 0.0}) <
          1e-14);
    // (e^z - 1)/z for complex z
    const Complex z(3.0, -4.0);
    CHECK(rel_err(specfun::kummer_1f1(1, 2, z), (std::exp(z) - 1.0) / z) < 1e-13);
}

TEST_CASE("kummer_1f1 against the extended-precision series oracle")
{
    for (Complex z : {Complex(-2, 0), Complex(5, 3), Complex(-8, 11), Complex(0, 17)}) {
        const Complex mine = specfun::kummer_1f1(3.0, 5.0, z);
        const Complex ref = oracles::kummer_series_ld(3.0, 5.0, z);
        CHECK(rel_err(mine, ref) < 1e-12);
    }
}

TEST_CASE("kummer transformation consistency across both half-planes")
{
    for (double a : {0.5, 1.5, 3.0, 5.0}) {
        for (double b : {0.9, 2.5, 5.0}) {
            for (Complex z : {Complex(6, 2), Complex(-6, 2), Complex(1, -19),
                              Complex(-14, -9), Complex(20, 0), Complex(-20, 0)}) {
                const Complex lhs = specfun::kummer_1f1(a, b, z);
                const Complex rhs = std::exp(z) * specfun::kummer_1f1(b - a, b, -z);
                CHECK(rel_err(lhs, rhs) < 1e-12);
            }
        }
    }
}

TEST_CASE("kummer_1f1 invalid parameter")
{
    CHECK_THROWS_AS(specfun::kummer_1f1(1.0, 0.0, {1, 0}), std::invalid_argument);
    CHECK_THROWS_AS(specfun::kummer_1f1(1.0, -3.0, {1, 0}), std::invalid_argument);
}

TEST_CASE("kummer_bridge equals the scaled direct product")
{
    const Complex xi(2.0, 1.0), eta(0.5, -0.3);
    for (double t : {0.0, 0.1, 1.0, 5.0, 20.0}) {
        const Complex direct =
            std::exp(-xi * t) * specfun::kummer_1f1(3.0, 5.0, (xi - eta) * t);
        const Complex bridged = specfun::kummer_bridge(2.0, 3.0, xi, eta, t);
        CHECK(std::abs(bridged - direct) <= 1e-13 * std::max(1.0, std::abs(direct)));
    }
}

TEST_CASE("bessel_k half-integer closed form")
{
    const Complex k = specfun::bessel_k(0.5, {2.0, 0.0});
    CHECK(rel_err(k, {std::sqrt(M_PI / 4.0) * std::exp(-2.0), 0.0}) < 1e-14);
}

TEST_CASE("bessel_k against the cosh-integral oracle")
{
    CHECK(rel_err(specfun::bessel_k(0.0, {2, 0}), oracles::bessel_k_integral(0.0, {2, 0})) <
          1e-13);
    CHECK(rel_err(specfun::bessel_k(1.0, {4, 0}), oracles::bessel_k_integral(1.0, {4, 0})) <
          1e-13);
    for (double nu : {0.0, 0.5, 1.0, 2.5}) {
        for (Complex z : {Complex(0.4, 0.2), Complex(1.5, -1.0), Complex(3, 4),
                          Complex(12, 5), Complex(0.8, 2.0)}) {
            CHECK(rel_err(specfun::bessel_k(nu, z), oracles::bessel_k_integral(nu, z)) <
                  1e-12);
        }
    }
}

TEST_CASE("bessel_k recurrence K_{nu+1} = K_{nu-1} + (2nu/z) K_nu")
{
    for (double zr = 0.5; zr <= 20.0; zr += 0.75) {
        const Complex z(zr, 0.0);
        const Complex k0 = specfun::bessel_k(0.0, z);
        const Complex k1 = specfun::bessel_k(1.0, z);
        const Complex k2 = specfun::bessel_k(2.0, z);
        CHECK(rel_err(k2, k0 + 2.0 / z * k1) < 1e-12);
    }
}

TEST_CASE("bessel_k small-argument limit of the product kernel factor")
{
    // t^{nu/2} K_nu(2 sqrt(t)) -> Gamma(nu)/2 as t -> 0; the correction term
    // is O(t^min(nu,1)) up to logs, so ~2e-5 relative at t = 1e-10, nu = 1/2
    const double t = 1e-10;
    for (double nu : {0.5, 1.0, 2.5}) {
        const double v =
            std::pow(t, 0.5 * nu) *
            specfun::bessel_k(nu, {2.0 * std::sqrt(t), 0.0}).real();
        CHECK(std::abs(v - 0.5 * std::tgamma(nu)) < 1e-4 * std::tgamma(nu));
    }
}

TEST_CASE("bessel_k domain and underflow behavior")
{
    CHECK_THROWS_AS(specfun::bessel_k(0.0, {-1.0, 0.0}), std::domain_error);
    CHECK_THROWS_AS(specfun::bessel_k(0.0, {0.0, 2.0}), std::domain_error);
    CHECK(specfun::bessel_k(0.0, {800.0, 0.0}) == Complex(0.0, 0.0));
    // symmetric in the order sign
    CHECK(specfun::bessel_k(-1.0, {2, 0}) == specfun::bessel_k(1.0, {2, 0}));
}
