#include "radial_lab/errors.hpp"
#include "radial_lab/linear_operator.hpp"
#include "radial_lab/nonlinearity.hpp"

#include <doctest.h>

#include <cmath>

using namespace radial;

TEST_CASE("closed-form antiderivatives")
{
    const auto p = power_nonlinearity(20.0);
    CHECK(p.F(1.0) == doctest::Approx(1.0 / 21.0).epsilon(1e-14));
    CHECK(p.F(1.3) == doctest::Approx(std::pow(1.3, 21) / 21.0).epsilon(1e-13));
    CHECK(p.f(-2.0) == 0.0);
    CHECK(p.F(-2.0) == 0.0);

    const auto sat = saturating_nonlinearity(2.0);
    CHECK(sat.f(1.0) == doctest::Approx(1.0));
    CHECK(sat.fprime(1.0) == doctest::Approx(2.0));
    // Trapezoid sum of f as an independent check of F.
    const int m = 200000;
    double acc = 0.0;
    for (int i = 0; i < m; ++i)
        acc += 0.5 * (sat.f(3.0 * i / m) + sat.f(3.0 * (i + 1) / m)) * 3.0 / m;
    CHECK(sat.F(3.0) == doctest::Approx(acc).epsilon(1e-9));
}

TEST_CASE("spline antiderivative and derivative are consistent")
{
    const auto f = three_crossing_nonlinearity();
    for (double s : {0.3, 1.1, 1.95, 2.05, 2.6, 3.5, 7.0}) {
        const double h = 1e-6;
        CHECK((f.F(s + h) - f.F(s - h)) / (2 * h) == doctest::Approx(f.f(s)).epsilon(1e-7));
        CHECK((f.f(s + h) - f.f(s - h)) / (2 * h) == doctest::Approx(f.fprime(s)).epsilon(1e-6));
    }
    CHECK(f.fprime(2.0) == doctest::Approx(20.0));
    for (double s : {0.0, 1.0, 2.0, 3.0})
        CHECK(f.f(s) == doctest::Approx(s).epsilon(1e-14));
}

TEST_CASE("growth witness")
{
    // s^2: a0 f(s)/s = s >= 1 + delta with delta = 1/2 gives M = 3/2.
    const auto r2 = validate(power_nonlinearity(2.0), 1.0);
    REQUIRE(r2.witness);
    CHECK(r2.all_passed());
    CHECK(r2.witness->delta == doctest::Approx(0.5));
    CHECK(r2.witness->M == doctest::Approx(1.5).epsilon(1e-8));

    // lambda* s^2 / (1 + s^2) >= 3/2 with lambda* = 2 gives M = sqrt(3).
    const auto rs = validate(saturating_nonlinearity(2.0), 1.0);
    REQUIRE(rs.witness);
    CHECK(rs.witness->M == doctest::Approx(std::sqrt(3.0)).epsilon(1e-8));

    // Linear and sublinear growth fail.
    CHECK_FALSE(validate(power_nonlinearity(1.0), 1.0).witness.has_value());
    CHECK_FALSE(validate(power_nonlinearity(0.5), 1.0).all_passed());
}

TEST_CASE("a wrong derivative is caught")
{
    const Nonlinearity bad("bad", NonlinearityFamily::Custom, [](double s) { return s * s * s; },
                           [](double s) { return 2.0 * s * s; });
    const auto rep = validate(bad, 1.0);
    const auto* e = rep.find("derivative_accuracy");
    REQUIRE(e != nullptr);
    CHECK_FALSE(e->passed);
}

TEST_CASE("fixed points and windows of the three-crossing spline")
{
    const auto rep = fixed_points(three_crossing_nonlinearity(), 10.0, 15.68);
    REQUIRE(rep.roots.size() == 4);
    CHECK(rep.roots[0].s == doctest::Approx(0.0));
    CHECK(rep.roots[1].s == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(rep.roots[2].s == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(rep.roots[3].s == doctest::Approx(3.0).epsilon(1e-6));
    CHECK(rep.roots[1].kind == RootKind::Tangency);
    CHECK(rep.roots[2].kind == RootKind::Crossing);
    REQUIRE(rep.windows.size() == 1);
    const auto& w = rep.windows[0].window;
    CHECK(w.u_minus == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(w.u_zero == doctest::Approx(2.0));
    REQUIRE(w.u_plus.is_finite());
    CHECK(w.u_plus.value() == doctest::Approx(3.0).epsilon(1e-6));
    CHECK(validate_window(w, three_crossing_nonlinearity()).valid);
}

TEST_CASE("power window is unbounded above")
{
    const auto rep = fixed_points(power_nonlinearity(20.0), 10.0, 15.68);
    REQUIRE(rep.windows.size() == 1);
    CHECK(rep.windows[0].window.u_zero == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_FALSE(rep.windows[0].window.u_plus.is_finite());
    CHECK_FALSE(fixed_points(power_nonlinearity(3.0), 10.0, 15.68).has_window);
}

TEST_CASE("parser")
{
    CHECK(parse_nonlinearity("power:7").f(2.0) == doctest::Approx(128.0));
    CHECK(parse_nonlinearity("saturating:2").f(1.0) == doctest::Approx(1.0));
    const auto sp = parse_nonlinearity("shifted-power:3,0.5");
    CHECK(sp.f(0.0) == 0.0);
    CHECK(sp.fprime(0.0) == doctest::Approx(0.0).epsilon(1e-12));
    const auto spl = parse_nonlinearity("spline:0,0,0;1,1,2|1");
    CHECK(spl.f(1.0) == doctest::Approx(1.0));
    CHECK(spl.f(2.0) == doctest::Approx(1.0 + 2.0 + 1.0));
    CHECK_THROWS_AS(parse_nonlinearity("cubic"), ParameterError);
    CHECK_THROWS_AS(parse_nonlinearity("power:x"), ParameterError);
    CHECK_THROWS_AS(parse_nonlinearity("power:-1"), ParameterError);
}

TEST_CASE("truncation agrees with f up to s0, is C1 and grows like s^p")
{
    const auto grid = build_grid(2, 128);
    const auto f = power_nonlinearity(20.0);
    const auto w = validate(f, 1.0).witness;
    REQUIRE(w);
    const auto tr = truncate(f, *w, *grid, WeightSpec::constant(1.0), DriftSpec::zero());
    const auto& t = tr.truncated;
    CHECK(t.s0() > tr.bounds.K_inf);
    CHECK(t.patch_feasible());
    for (double s : {0.5, 1.0, 0.9 * t.s0(), t.s0()})
        CHECK(t.f(s) == f.f(s));
    // One-sided limits at the joints; the patch is far too steep for finite differences.
    for (double s : {t.s0(), t.s1()}) {
        const double below = std::nextafter(s, 0.0);
        const double above = std::nextafter(s, 2.0 * s);
        CHECK(t.f(above) == doctest::Approx(t.f(below)).epsilon(1e-12));
    }
    CHECK(t.fprime(t.s1()) == doctest::Approx(t.line_slope()));

    // Derivative continuity on a milder family, where one ulp below the joint is still resolvable.
    const auto cubic = power_nonlinearity(3.0);
    const auto t3 = truncate(cubic, *validate(cubic, 1.0).witness, *grid, WeightSpec::constant(1.0), DriftSpec::zero());
    REQUIRE(t3.truncated.truncation_case() == TruncationCase::Patch);
    for (double s : {t3.truncated.s0(), t3.truncated.s1()}) {
        const double below = std::nextafter(s, 0.0);
        const double above = std::nextafter(s, 2.0 * s);
        CHECK(t3.truncated.fprime(above) == doctest::Approx(t3.truncated.fprime(below)).epsilon(1e-9));
    }
    double prev = t.f(t.s0());
    for (int k = 1; k <= 400; ++k) {
        const double s = t.s0() * (1.0 + 0.05 * k);
        CHECK(t.f(s) >= prev);
        CHECK(t.f(s) >= t.line_slope() * s);
        prev = t.f(s);
    }
    const double big = t.s1() + 1e3 * std::pow(t.f(t.s1()), 1.0 / t.p());
    CHECK(t.f(2.0 * big) / t.f(big) == doctest::Approx(std::pow(2.0, t.p())).epsilon(1e-2));
    const double s = 1.3 * t.s1();
    CHECK((t.F(s * (1 + 1e-7)) - t.F(s * (1 - 1e-7))) / (2e-7 * s) == doctest::Approx(t.f(s)).epsilon(1e-6));
}

TEST_CASE("subcritical exponent rule")
{
    CHECK(subcritical_exponent(2, 3.0) == 3.0);
    CHECK(subcritical_exponent(3, 7.0) == doctest::Approx(4.9));
    CHECK(subcritical_exponent(3, 3.0) == 3.0);
    CHECK(subcritical_exponent(5, 3.0) == doctest::Approx(7.0 / 3.0 - 0.1));
}
