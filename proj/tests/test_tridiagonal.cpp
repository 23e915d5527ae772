#include "radial_lab/errors.hpp"
#include "radial_lab/tridiagonal.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

using namespace radial;

namespace {

// Dense Gaussian elimination with partial pivoting, the reference solver.
std::vector<double> dense_solve(const Tridiagonal& t, std::vector<double> b)
{
    const std::size_t n = t.size();
    std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        m[i][i] = t.diag[i];
        if (i > 0)
            m[i][i - 1] = t.lower[i];
        if (i + 1 < n)
            m[i][i + 1] = t.upper[i];
    }
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(m[i][k]) > std::abs(m[p][k]))
                p = i;
        std::swap(m[k], m[p]);
        std::swap(b[k], b[p]);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = m[i][k] / m[k][k];
            for (std::size_t j = k; j < n; ++j)
                m[i][j] -= f * m[k][j];
            b[i] -= f * b[k];
        }
    }
    std::vector<double> x(n);
    for (std::size_t k = n; k-- > 0;) {
        double acc = b[k];
        for (std::size_t j = k + 1; j < n; ++j)
            acc -= m[k][j] * x[j];
        x[k] = acc / m[k][k];
    }
    return x;
}

Tridiagonal random_matrix(std::mt19937_64& rng, std::size_t n, bool dominant)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Tridiagonal t(n);
    for (std::size_t i = 0; i < n; ++i) {
        t.lower[i] = i > 0 ? u(rng) : 0.0;
        t.upper[i] = i + 1 < n ? u(rng) : 0.0;
        t.diag[i] = dominant ? 2.5 + u(rng) : u(rng);
    }
    return t;
}

}  // namespace

TEST_CASE("Thomas and pivoted solves agree with dense elimination")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 5 + static_cast<std::size_t>(trial) * 3;
        std::vector<double> b(n);
        for (auto& x : b)
            x = u(rng);
        const auto dom = random_matrix(rng, n, true);
        const auto ref = dense_solve(dom, b);
        const auto x1 = solve_thomas(dom, b);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(x1[i] == doctest::Approx(ref[i]).epsilon(1e-10));

        const auto gen = random_matrix(rng, n, false);
        const auto ref2 = dense_solve(gen, b);
        const auto x2 = solve_pivoted(gen, b);
        const auto back = gen.apply(x2);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(back[i] == doctest::Approx(b[i]).epsilon(1e-8));
        for (std::size_t i = 0; i < n; ++i)
            CHECK(x2[i] == doctest::Approx(ref2[i]).epsilon(1e-6));
    }
}

TEST_CASE("pivoting handles a zero leading pivot")
{
    Tridiagonal t(3);
    t.diag = {0.0, 0.0, 1.0};
    t.upper = {1.0, 1.0, 0.0};
    t.lower = {0.0, 1.0, 1.0};
    const std::vector<double> b{1.0, 2.0, 3.0};
    CHECK_THROWS_AS(solve_thomas(t, b), NumericError);
    const auto x = solve_pivoted(t, b);
    const auto back = t.apply(x);
    for (int i = 0; i < 3; ++i)
        CHECK(back[i] == doctest::Approx(b[i]));
}

TEST_CASE("Sturm bisection finds the eigenvalues of the discrete Laplacian")
{
    // diag 2, off-diagonal -1: eigenvalues 2 - 2 cos(k pi / (n + 1)).
    const std::size_t n = 40;
    std::vector<double> d(n, 2.0), e(n - 1, -1.0);
    const auto ev = smallest_eigenvalues(d, e, 4);
    REQUIRE(ev.size() == 4);
    for (int k = 1; k <= 4; ++k)
        CHECK(ev[k - 1] == doctest::Approx(2.0 - 2.0 * std::cos(k * M_PI / (n + 1))).epsilon(1e-12));
    CHECK(sturm_count(d, e, 0.0) == 0);
    CHECK(sturm_count(d, e, 4.0) == static_cast<int>(n));

    const auto v = inverse_iteration(d, e, ev[0]);
    for (std::size_t i = 0; i < n; ++i) {
        const double exact = std::sin((i + 1) * M_PI / (n + 1)) * std::sqrt(2.0 / (n + 1));
        CHECK(std::abs(v[i]) == doctest::Approx(exact).epsilon(1e-8));
    }
}
