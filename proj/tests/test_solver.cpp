#include "radial_lab/errors.hpp"
#include "radial_lab/solver.hpp"

#include "shooting_oracle.hpp"

#include <doctest.h>

#include <cmath>

using namespace radial;

namespace {

struct Case {
    int N;
    std::function<double(double)> a;
    std::string a_label;
    double p;
};

Problem make_problem(const GridPtr& grid, const Case& c, AprioriBounds* bounds = nullptr)
{
    const WeightSpec a(c.a, c.a_label);
    const auto f = power_nonlinearity(c.p);
    const auto tr = truncate(f, *validate(f, a.a0()).witness, *grid, a, DriftSpec::zero());
    if (bounds)
        *bounds = tr.bounds;
    return Problem(grid, a, DriftSpec::zero(), tr.truncated);
}

}  // namespace

TEST_CASE("nonconstant weight: solver matches the shooting oracle")
{
    const std::vector<Case> cases{{2, [](double r) { return 1.0 + r * r; }, "1+r^2", 3.0},
                                  {3, [](double r) { return 1.0 + r; }, "1+r", 7.0}};
    for (const auto& c : cases) {
        const int n = 512;
        const auto grid = build_grid(c.N, n);
        const auto problem = make_problem(grid, c);
        const auto rep = solve(problem, RadialFunction::constant(grid, 0.5));
        REQUIRE(rep.converged);
        CHECK(rep.residual_inf <= 1e-9);
        CHECK(rep.certificates.all_passed());
        CHECK(rep.max_iterate_cone_violation == 0.0);

        const double p = c.p;
        const auto ref = oracle::shoot(
            c.N, c.a, [p](double s) { return s > 0.0 ? std::pow(s, p) : 0.0; }, rep.solution.front() - 0.05,
            rep.solution.front() + 0.05, n);
        CHECK(std::abs(ref.end_slope) < 1e-6);
        double worst = 0.0;
        for (std::size_t i = 0; i < rep.solution.size(); ++i)
            worst = std::max(worst, std::abs(rep.solution[i] - ref.u[i]));
        CHECK(worst < 1e-4);

        for (std::size_t i = 1; i < rep.solution.size(); ++i)
            CHECK(rep.solution[i] > rep.solution[i - 1]);
    }
}

TEST_CASE("constant weight: constant seeds converge to the constant fixed point")
{
    const auto grid = build_grid(2, 128);
    const Case c{2, [](double) { return 1.0; }, "1", 3.0};
    const auto problem = make_problem(grid, c);
    for (double seed : {0.3, 0.8, 2.5}) {
        const auto rep = solve(problem, RadialFunction::constant(grid, seed));
        REQUIRE(rep.converged);
        for (double v : rep.solution.values())
            CHECK(v == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("mu-family follows the power scaling law")
{
    // L u = a u^p  implies  L (mu^{-1/(p-1)} u) = mu a (mu^{-1/(p-1)} u)^p.
    const auto grid = build_grid(2, 256);
    const Case c{2, [](double r) { return 1.0 + r * r; }, "1+r^2", 3.0};
    AprioriBounds bounds;
    const auto problem = make_problem(grid, c, &bounds);
    const auto base = solve(problem, RadialFunction::constant(grid, 0.5));
    REQUIRE(base.converged);
    const auto runs = homotopy(problem, {HomotopyFamily::Kind::Mu, {0.8, 0.5, 0.2}}, base.solution, bounds);
    for (const auto& r : runs) {
        REQUIRE(r.converged);
        const double scale = std::pow(r.mu, -1.0 / (c.p - 1.0));
        for (std::size_t i = 0; i < r.solution.size(); ++i)
            CHECK(r.solution[i] == doctest::Approx(scale * base.solution[i]).epsilon(1e-8));
        CHECK(r.certificates.all_passed());
    }
}

TEST_CASE("lambda past the fold: no solution is reported, nothing thrown")
{
    const auto grid = build_grid(2, 128);
    const Case c{2, [](double) { return 1.0; }, "1", 3.0};
    AprioriBounds bounds;
    const auto problem = make_problem(grid, c, &bounds);
    const auto one = RadialFunction::constant(grid, 1.0);
    // u - u^3 = lambda has no positive root once lambda > 2 / (3 sqrt 3).
    SolveOptions opts;
    opts.lambda_shift = 0.5;
    const auto rep = solve(problem, one, opts);
    CHECK_FALSE(rep.converged);
    CHECK_FALSE(rep.message.empty());
    // Below the fold the constant root is found.
    opts.lambda_shift = 0.2;
    const auto ok = solve(problem, one, opts);
    REQUIRE(ok.converged);
    const double u = ok.solution.front();
    CHECK(u - u * u * u == doctest::Approx(0.2).epsilon(1e-8));
}

TEST_CASE("argument checks")
{
    const auto grid = build_grid(2, 64);
    const Case c{2, [](double) { return 1.0; }, "1", 3.0};
    AprioriBounds bounds;
    const auto problem = make_problem(grid, c, &bounds);
    const auto dec = RadialFunction::sample(grid, [](double r) { return 1.0 - 0.5 * r; });
    CHECK_THROWS_AS(solve(problem, dec), ParameterError);
    const auto seed = RadialFunction::constant(grid, 0.5);
    CHECK_THROWS_AS(homotopy(problem, {HomotopyFamily::Kind::LambdaShift, {2.0 * bounds.lambda_bar}}, seed, bounds),
                    ParameterError);
    CHECK_THROWS_AS(homotopy(problem, {HomotopyFamily::Kind::Mu, {1.5}}, seed, bounds), ParameterError);
    CHECK_THROWS_AS(homotopy(problem, {HomotopyFamily::Kind::Mu, {0.0}}, seed, bounds), ParameterError);
}

TEST_CASE("Krasnoselskii-type certificates on the power problem")
{
    const auto grid = build_grid(2, 256);
    const Case c{2, [](double r) { return 1.0 + r * r; }, "1+r^2", 3.0};
    AprioriBounds bounds;
    const auto problem = make_problem(grid, c, &bounds);
    const auto base = solve(problem, RadialFunction::constant(grid, 0.5));
    REQUIRE(base.converged);
    KrasnoselskiiInput in;
    in.lambda_reports = homotopy(problem, {HomotopyFamily::Kind::LambdaShift, {0.0, 0.1}}, base.solution, bounds);
    in.mu_reports = homotopy(problem, {HomotopyFamily::Kind::Mu, {0.5}}, base.solution, bounds);
    const auto set = krasnoselskii_certificates(problem, in, bounds);
    CHECK(set.all_passed());
    const auto* ex = set.find("krasnoselskii.ii.complete_continuity");
    REQUIRE(ex != nullptr);
    CHECK(ex->relation == Certificate::Relation::Excluded);
}
