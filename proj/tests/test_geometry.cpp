#include "radial_lab/errors.hpp"
#include "radial_lab/geometry.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace radial;

TEST_CASE("sphere areas")
{
    CHECK(unit_sphere_area(2) == doctest::Approx(2.0 * std::numbers::pi));
    CHECK(unit_sphere_area(3) == doctest::Approx(4.0 * std::numbers::pi));
    CHECK(unit_sphere_area(4) == doctest::Approx(2.0 * std::numbers::pi * std::numbers::pi));
}

TEST_CASE("control volume weights are nonnegative and sum to the ball volume")
{
    for (int N : {2, 3, 5}) {
        for (int n : {8, 33, 512}) {
            const auto g = build_grid(N, n);
            double sum = 0.0;
            for (double q : g->weights()) {
                CHECK(q >= 0.0);
                sum += q;
            }
            CHECK(sum == doctest::Approx(g->ball_volume()).epsilon(1e-14));
        }
    }
}

TEST_CASE("quadrature converges at second order")
{
    // integral over B of r^2 = omega_N / (N + 2)
    for (int N : {2, 3}) {
        const double exact = unit_sphere_area(N) / (N + 2);
        double prev = 0.0;
        for (int n : {64, 128, 256}) {
            const auto u = RadialFunction::sample(build_grid(N, n), [](double r) { return r * r; });
            const double err = std::abs(integrate(u) - exact);
            if (prev > 0.0)
                CHECK(prev / err == doctest::Approx(4.0).epsilon(0.1));
            prev = err;
        }
    }
}

TEST_CASE("norms of simple functions")
{
    const auto g = build_grid(3, 2048);
    const auto one = RadialFunction::constant(g, 1.0);
    const double vol = 4.0 * std::numbers::pi / 3.0;
    CHECK(norm(one, NormKind::L1) == doctest::Approx(vol).epsilon(1e-13));
    CHECK(norm(one, NormKind::L2) == doctest::Approx(std::sqrt(vol)).epsilon(1e-13));
    CHECK(norm(one, NormKind::Linf) == 1.0);
    CHECK(norm(one, NormKind::H1) == doctest::Approx(std::sqrt(vol)).epsilon(1e-13));

    // u = r: |grad u| = 1, so ||u||_W11 = omega/4 + omega/3 in N = 3.
    const auto r = RadialFunction::sample(g, [](double x) { return x; });
    const double omega = 4.0 * std::numbers::pi;
    CHECK(norm(r, NormKind::W11) == doctest::Approx(omega / 4.0 + omega / 3.0).epsilon(1e-5));
}

TEST_CASE("radial derivative is exact on quadratics")
{
    const auto u = RadialFunction::sample(build_grid(2, 16), [](double r) { return 3.0 * r * r - r + 2.0; });
    const auto du = radial_derivative(u);
    const auto nodes = u.grid().nodes();
    for (std::size_t i = 0; i < u.size(); ++i)
        CHECK(du[i] == doctest::Approx(6.0 * nodes[i] - 1.0).epsilon(1e-12));
}

TEST_CASE("invalid grids and mixed grids are rejected")
{
    CHECK_THROWS_AS(build_grid(1, 64), ParameterError);
    CHECK_THROWS_AS(build_grid(2, 4), ParameterError);
    const auto a = RadialFunction::constant(build_grid(2, 16), 1.0);
    const auto same = RadialFunction::constant(build_grid(2, 16), 2.0);
    const auto other = RadialFunction::constant(build_grid(2, 32), 1.0);
    const auto other_dim = RadialFunction::constant(build_grid(3, 16), 1.0);
    CHECK((a + same)[3] == 3.0);
    CHECK_THROWS_AS(a + other, ParameterError);
    CHECK_THROWS_AS(a + other_dim, ParameterError);
}
