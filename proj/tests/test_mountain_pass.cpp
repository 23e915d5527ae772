#include "radial_lab/errors.hpp"
#include "radial_lab/mountain_pass.hpp"

#include <doctest.h>

#include <cmath>
#include <memory>

using namespace radial;

namespace {

struct Pipeline {
    GridPtr grid;
    std::unique_ptr<Problem> problem;
    std::unique_ptr<EnergyFunctional> I;
    std::vector<EigenPair> eig;
    ConeWindow window;
};

Pipeline build(const std::string& family, int n)
{
    Pipeline p;
    p.grid = build_grid(2, n);
    const auto a = WeightSpec::constant(1.0);
    const auto f = parse_nonlinearity(family);
    const auto tr = truncate(f, *validate(f, 1.0).witness, *p.grid, a, DriftSpec::zero());
    p.problem = std::make_unique<Problem>(p.grid, a, DriftSpec::zero(), tr.truncated);
    p.I = std::make_unique<EnergyFunctional>(*p.problem);
    p.eig = radial_eigs(p.grid, 2);
    const auto fp = fixed_points(tr.truncated.modified(), 10.0, p.eig[1].eigenvalue);
    REQUIRE_FALSE(fp.windows.empty());
    p.window = fp.windows.front().window;
    return p;
}

}  // namespace

TEST_CASE("sign changes")
{
    const auto grid = build_grid(2, 8);
    CHECK(sign_changes(RadialFunction::sample(grid, [](double r) { return r; }), 0.5) == 1);
    CHECK(sign_changes(RadialFunction::constant(grid, 1.0), 1.0) == 0);
    CHECK(sign_changes(RadialFunction::sample(grid, [](double r) { return std::cos(6.0 * r); }), 0.0) == 2);
    // A node exactly at the level is skipped.
    CHECK(sign_changes(RadialFunction::sample(grid, [](double r) { return r - 0.5; }), 0.0) == 1);
}

TEST_CASE("admissible sets and initial path for s^20")
{
    auto p = build("power:20", 64);
    CHECK(p.window.u_minus == 0.0);
    CHECK(p.window.u_zero == doctest::Approx(1.0));
    CHECK_FALSE(p.window.u_plus.is_finite());
    const auto sets = admissible_sets(p.window, *p.I);
    CHECK(sets.branch == AdmissibleSets::Branch::Unbounded);
    CHECK(sets.alpha > 0.0);
    CHECK(sets.tau == doctest::Approx(0.5));
    CHECK(sets.barrier() > sets.I_minus);

    const auto path = make_path(p.window, p.eig[1].v, 0.2, 1.5, 0.05, 17);
    REQUIRE(path.points.size() == 17);
    for (const auto& u : path.points)
        CHECK(window_violation(u, p.window) == 0.0);
    CHECK_THROWS_AS(make_path(p.window, p.eig[1].v, 0.2, 1.5, 0.05, 16), ParameterError);

    const auto ip = initial_path(p.window, p.eig[1], sets, *p.I, 17);
    REQUIRE(ip.found);
    CHECK(sets.in_lower(ip.path.points.front(), *p.I));
    CHECK(sets.in_upper(ip.path.points.back(), *p.I));
    CHECK(ip.max_energy < p.I->constant_energy(1.0));
}

TEST_CASE("degenerate window is rejected")
{
    auto p = build("power:20", 32);
    const ConeWindow bad{1.0, 1.0, UpperBound::unbounded()};
    CHECK_THROWS_AS(admissible_sets(bad, *p.I), ParameterError);
}

TEST_CASE("mountain pass finds a nonconstant solution: s^20")
{
    auto p = build("power:20", 128);
    const auto sets = admissible_sets(p.window, *p.I);
    const auto ip = initial_path(p.window, p.eig[1], sets, *p.I, 17);
    REQUIRE(ip.found);
    const auto rep = minimax(ip.path, *p.I, sets);
    REQUIRE(rep.polished);
    CHECK(rep.polish.residual_inf <= 1e-8);
    CHECK(rep.certificates.all_passed());
    CHECK(rep.c >= sets.barrier());
    CHECK(rep.I_star < rep.I_zero);
    CHECK(rep.u_star.front() < 1.0);
    CHECK(rep.u_star.back() > 1.0);
    CHECK(certify_nonconstant(rep.u_star, p.window, *p.I).all_passed());
    // The constant solution itself fails the nonconstancy test.
    CHECK_FALSE(certify_nonconstant(RadialFunction::constant(p.grid, 1.0), p.window, *p.I).all_passed());
}

TEST_CASE("mountain pass on a bounded window: three-crossing")
{
    auto p = build("three-crossing", 128);
    CHECK(p.window.u_minus == doctest::Approx(1.0));
    CHECK(p.window.u_zero == doctest::Approx(2.0));
    REQUIRE(p.window.u_plus.is_finite());
    CHECK(p.window.u_plus.value() == doctest::Approx(3.0));
    const auto sets = admissible_sets(p.window, *p.I);
    CHECK(sets.branch == AdmissibleSets::Branch::Bounded);
    const auto ip = initial_path(p.window, p.eig[1], sets, *p.I, 17);
    REQUIRE(ip.found);
    const auto rep = minimax(ip.path, *p.I, sets);
    REQUIRE(rep.polished);
    CHECK(rep.certificates.all_passed());
    for (double v : rep.u_star.values()) {
        CHECK(v >= 1.0 - 1e-10);
        CHECK(v <= 3.0 + 1e-10);
    }
    const double I1 = p.I->constant_energy(1.0);
    const double I3 = p.I->constant_energy(3.0);
    CHECK(rep.c >= std::max(I1, I3) + sets.alpha - 1e-12);
}
