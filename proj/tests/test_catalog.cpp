#include <doctest.h>

#include <cmath>

#include "expdens/catalog.hpp"
#include "support/oracles.hpp"

using namespace expdens;
using catalog::DistributionSpec;
using catalog::Family;

TEST_CASE("parse_spec grammar")
{
    CHECK(catalog::parse_spec("gamma:2,2").family == Family::gamma);
    CHECK(catalog::parse_spec("exp:1").family == Family::gamma);
    CHECK(catalog::parse_spec("exp:1").p1 == 1.0);
    CHECK(catalog::parse_spec("nakagami:1,1").family == Family::nakagami);
    CHECK(catalog::parse_spec("weibull:1,1.5").p2 == 1.5);
    CHECK(catalog::parse_spec("lomax:5,2").p1 == 5.0);
    CHECK(catalog::parse_spec("cauchy_abs_tail").family == Family::cauchy_abs_tail);

    CHECK_THROWS_AS(catalog::parse_spec("gamma:2"), std::invalid_argument);
    CHECK_THROWS_AS(catalog::parse_spec("gamma:-1,2"), std::invalid_argument);
    CHECK_THROWS_AS(catalog::parse_spec("nakagami:0.2,1"), std::invalid_argument);
    CHECK_THROWS_AS(catalog::parse_spec("cosine:1"), std::invalid_argument);
    CHECK_THROWS_AS(catalog::parse_spec("gamma:2,two"), std::invalid_argument);
}

TEST_CASE("gamma conversion is exact")
{
    const ExpSumDensity d = catalog::to_expsum(catalog::parse_spec("gamma:2,2"));
    REQUIRE(d.size() == 1);
    CHECK(d.alpha() == 2.0);
    CHECK(d.terms()[0].coef.real() == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(d.terms()[0].expo.real() == 2.0);
    CHECK(d.provenance == "gamma:2,2");
    CHECK(total_mass(d) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("nakagami(1,1) fit quality and node geometry")
{
    const DistributionSpec spec = catalog::parse_spec("nakagami:1,1");
    const ExpSumDensity d = catalog::to_expsum(spec);
    CHECK(d.alpha() == doctest::Approx(2.0));
    CHECK(d.report()->max_residual <= 1e-9);

    // fitted Gaussian factor against 2 e^{-x^2} down to 1e-12
    double worst = 0.0;
    for (double x = 1e-12; x <= 6.0; x *= 2.7) {
        worst = std::max(worst, std::abs(d.kernel(x).real() - 2.0 * std::exp(-x * x)));
    }
    for (double x = 0.05; x <= 6.0; x += 0.173) {
        worst = std::max(worst, std::abs(d.kernel(x).real() - 2.0 * std::exp(-x * x)));
    }
    CHECK(worst <= 1e-9);

    // nodes strictly in the right half-plane
    for (const Term& t : d.terms()) CHECK(t.expo.real() > 0.0);

    CHECK(std::abs(total_mass(d) - 1.0) <= 1e-9);
}

TEST_CASE("weibull(1,1.5) fit validity")
{
    const ExpSumDensity d = catalog::to_expsum(catalog::parse_spec("weibull:1,1.5"));
    CHECK(d.alpha() == doctest::Approx(1.5));
    const DistributionSpec spec = catalog::parse_spec("weibull:1,1.5");
    double worst = 0.0;
    for (double x = 0.02; x <= 6.0; x += 0.097)
        worst = std::max(worst,
                         std::abs(d.evaluate(x) - catalog::reference_pdf(spec, x)));
    CHECK(worst <= 1e-8);
    CHECK(std::abs(total_mass(d) - 1.0) <= 1e-8);
}

TEST_CASE("lomax(5,2) fit validity on its certified range")
{
    const DistributionSpec spec = catalog::parse_spec("lomax:5,2");
    const ExpSumDensity d = catalog::to_expsum(spec);
    CHECK(d.alpha() == doctest::Approx(1.0));
    double worst = 0.0;
    for (double x = 0.05; x <= 50.0; x *= 1.31)
        worst = std::max(worst,
                         std::abs(d.evaluate(x) - catalog::reference_pdf(spec, x)));
    CHECK(worst <= 1e-8);
    const double tail = d.report()->truncated_tail_mass;
    CHECK(std::abs(total_mass(d) + tail - 1.0) <= 1e-6);
}

TEST_CASE("cauchy tail discretization hits the analytic density far out")
{
    const DistributionSpec spec = catalog::parse_spec("cauchy_abs_tail");
    const ExpSumDensity tail = catalog::cauchy_tail_terms(spec);
    CHECK(tail.size() == 76);  // j in [-70, 5]

    const double t = 10.0;
    const double expected = 1.0 / (M_PI * 101.0);
    CHECK(std::abs(tail.kernel(t).real() - expected) < 1e-14);

    for (double x : {7.4748, 20.0, 1e3, 1e5}) {
        const double ref = 1.0 / (M_PI * (1.0 + x * x));
        CHECK(std::abs(tail.kernel(x).real() - ref) < 1e-14);
    }
}

TEST_CASE("cauchy full approximation: pruning and accuracy")
{
    const DistributionSpec spec = catalog::parse_spec("cauchy_abs_tail");
    const ExpSumDensity full = catalog::cauchy_full_approx(spec);
    CHECK(full.size() <= 91);
    CHECK(full.size() >= 60);

    double worst = 0.0;
    for (double x = 1e-4; x <= 1e5; x *= 3.1) {
        const double ref = 1.0 / (M_PI * (1.0 + x * x));
        worst = std::max(worst, std::abs(full.kernel(x).real() - ref));
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("cauchy |X| density carries unit mass before pruning")
{
    DistributionSpec spec = catalog::parse_spec("cauchy_abs_tail");
    spec.cauchy_prune = 0.0;  // pruning removes far-tail mass; see ledger
    const ExpSumDensity unpruned = catalog::cauchy_full_approx(spec);
    CHECK(std::abs(2.0 * total_mass(unpruned) - 1.0) <= 1e-10);

    const ExpSumDensity d = catalog::to_expsum(catalog::parse_spec("cauchy_abs_tail"));
    CHECK(std::abs(total_mass(d) - 1.0) <= 5e-6);  // default prune drops ~2.4e-6
    CHECK(d.alpha() == 1.0);
    const DistributionSpec ref_spec = catalog::parse_spec("cauchy_abs_tail");
    for (double x : {0.5, 2.0, 40.0}) {
        CHECK(std::abs(d.evaluate(x) - catalog::reference_pdf(ref_spec, x)) < 1e-11);
    }
}
