#include "radial_lab/cone.hpp"
#include "radial_lab/errors.hpp"
#include "radial_lab/linear_operator.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace radial;

namespace {

// j_{1,1} by Newton on J_1 with J_1' = J_0 - J_1 / x.
double j11()
{
    double x = 3.8;
    for (int i = 0; i < 50; ++i)
        x -= std::cyl_bessel_j(1.0, x) / (std::cyl_bessel_j(0.0, x) - std::cyl_bessel_j(1.0, x) / x);
    return x;
}

// First positive root of tan k = k.
double kappa()
{
    double k = 4.49;
    for (int i = 0; i < 50; ++i) {
        const double t = std::tan(k);
        k -= (t - k) / (t * t);
    }
    return k;
}

}  // namespace

TEST_CASE("second radial eigenvalue against Bessel oracles")
{
    const double j = j11();
    const double k = kappa();
    CHECK(j == doctest::Approx(3.8317059702075125).epsilon(1e-14));
    CHECK(k == doctest::Approx(4.4934094579090642).epsilon(1e-14));

    const auto e2 = radial_eigs(build_grid(2, 2048), 3);
    const auto e3 = radial_eigs(build_grid(3, 2048), 2);
    CHECK(std::abs(e2[0].eigenvalue - 1.0) < 1e-8);
    CHECK(std::abs(e2[1].eigenvalue - (1.0 + j * j)) < 1e-3);
    CHECK(std::abs(e3[1].eigenvalue - (1.0 + k * k)) < 1e-3);
    CHECK(e2[2].eigenvalue > e2[1].eigenvalue);
}

TEST_CASE("eigenvalue error decreases at second order")
{
    const double exact = 1.0 + j11() * j11();
    const double e1 = std::abs(radial_eigs(build_grid(2, 128), 2)[1].eigenvalue - exact);
    const double e2 = std::abs(radial_eigs(build_grid(2, 256), 2)[1].eigenvalue - exact);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("second eigenfunction: zero mean, increasing, unit norm")
{
    for (int N : {2, 3, 4}) {
        const auto eigs = radial_eigs(build_grid(N, 1024), 2);
        const auto& v = eigs[1].v;
        CHECK(std::abs(integrate(v)) < 1e-8);
        CHECK(check_cone(v, std::nullopt, 0.0).max_monotonicity_violation == 0.0);
        CHECK(v.back() > 0.0);
        CHECK(l2_inner(v, v) == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("T against closed forms")
{
    // N = 2, w = r^2: v = r^2 + 4 - 2 I_0(r) / I_1(1).
    {
        const auto g = build_grid(2, 1024);
        const auto op = assemble(g, DriftSpec::zero());
        const auto v = solve_T(op, RadialFunction::sample(g, [](double r) { return r * r; }));
        const double i1 = std::cyl_bessel_i(1.0, 1.0);
        double worst = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double r = g->node(i);
            worst = std::max(worst, std::abs(v[i] - (r * r + 4.0 - 2.0 * std::cyl_bessel_i(0.0, r) / i1)));
        }
        CHECK(worst < 1e-5);
        CHECK(v.front() == doctest::Approx(0.46118).epsilon(1e-4));
    }
    // N = 3, w = r^2: v = r^2 + 6 - 2 e sinh(r) / r.
    {
        const auto g = build_grid(3, 1024);
        const auto op = assemble(g, DriftSpec::zero());
        const auto v = solve_T(op, RadialFunction::sample(g, [](double r) { return r * r; }));
        double worst = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double r = g->node(i);
            const double s = r > 0.0 ? std::sinh(r) / r : 1.0;
            worst = std::max(worst, std::abs(v[i] - (r * r + 6.0 - 2.0 * std::exp(1.0) * s)));
        }
        CHECK(worst < 1e-5);
    }
}

TEST_CASE("T maps the cone into itself for valid drifts")
{
    const auto g = build_grid(3, 256);
    std::mt19937_64 rng(21);
    const std::vector<DriftSpec> drifts{DriftSpec::zero(), DriftSpec([](double r) { return -0.9 * r * r; }, "-0.9r^2"),
                                        DriftSpec([](double) { return -2.9; }, "-2.9")};
    for (const auto& b : drifts) {
        const auto op = assemble(g, b);
        for (int k = 0; k < 100; ++k) {
            const auto w = random_cone_function(g, rng);
            const auto v = solve_T(op, w);
            CHECK(check_cone(v).in_cone);
            CHECK(residual_inf(op, v, w) < 1e-8);
        }
    }
}

TEST_CASE("drift hypotheses")
{
    const auto g = build_grid(2, 128);
    CHECK_THROWS_AS(assemble(g, DriftSpec([](double) { return 0.1; }, "0.1")), HypothesisError);
    CHECK_THROWS_AS(assemble(g, DriftSpec([](double) { return -3.0; }, "-3")), HypothesisError);
    // d/dr(b r) = -1 > -1 - 1/r^2 everywhere: accepted.
    CHECK_NOTHROW(assemble(g, DriftSpec([](double) { return -1.0; }, "-1")));
    CHECK(assemble(g, DriftSpec::zero()).symmetric());
    CHECK_FALSE(assemble(g, DriftSpec([](double r) { return -r; }, "-r")).symmetric());
}

TEST_CASE("condition estimate is finite and at least one")
{
    const auto op = assemble(build_grid(2, 256), DriftSpec::zero());
    const double c = condition_estimate(op);
    CHECK(std::isfinite(c));
    CHECK(c >= 1.0);
}
