#include "radial_lab/errors.hpp"
#include "radial_lab/verify.hpp"

#include <doctest.h>

#include <cmath>

using namespace radial;

namespace {

// Power series of J_nu, adequate for x below 10.
double bessel_series(double nu, double x)
{
    double term = std::pow(0.5 * x, nu) / std::tgamma(nu + 1.0);
    double sum = term;
    for (int k = 1; k < 80; ++k) {
        term *= -(0.25 * x * x) / (k * (k + nu));
        sum += term;
    }
    return sum;
}

double first_zero_by_bisection(double nu)
{
    double lo = nu + 0.5;
    double hi = lo;
    while (bessel_series(nu, hi) > 0.0)
        hi += 0.01;
    lo = hi - 0.01;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (bessel_series(nu, mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("first Bessel zeros")
{
    for (double nu : {1.0, 1.5, 2.0, 2.5})
        CHECK(bessel_first_zero(nu) == doctest::Approx(first_zero_by_bisection(nu)).epsilon(1e-12));
    // x = tan x for nu = 3/2.
    const double j = bessel_first_zero(1.5);
    CHECK(std::tan(j) == doctest::Approx(j).epsilon(1e-9));
    CHECK(radial_lambda2_exact(2) == doctest::Approx(1.0 + std::pow(first_zero_by_bisection(1.0), 2)));
}

TEST_CASE("every suite passes with reduced sample counts")
{
    SuiteConfig cfg;
    cfg.intervals = 256;
    cfg.samples = 100;
    cfg.drifts = 2;
    cfg.multistart = 8;
    cfg.seed = 11;
    for (const auto& name : suite_names()) {
        CAPTURE(name);
        const auto rep = run_suite(name, cfg);
        CHECK(rep.name == name);
        CHECK_FALSE(rep.checks.empty());
        for (const auto& c : rep.checks) {
            CAPTURE(c.description);
            CAPTURE(c.measured);
            CHECK(c.passed);
        }
    }
}

TEST_CASE("suites are reproducible for a fixed seed")
{
    SuiteConfig cfg;
    cfg.intervals = 64;
    cfg.samples = 50;
    cfg.drifts = 2;
    cfg.seed = 5;
    const auto a = run_suite("cone_map", cfg);
    const auto b = run_suite("cone_map", cfg);
    REQUIRE(a.checks.size() == b.checks.size());
    for (std::size_t i = 0; i < a.checks.size(); ++i)
        CHECK(a.checks[i].measured == b.checks[i].measured);
}

TEST_CASE("bad suite arguments")
{
    CHECK_THROWS_AS(run_suite("nope", {}), ParameterError);
    SuiteConfig cfg;
    cfg.samples = 0;
    CHECK_THROWS_AS(run_suite("embedding", cfg), ParameterError);
}
