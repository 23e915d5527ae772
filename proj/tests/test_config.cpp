#include "radial_lab/errors.hpp"
#include "radial_lab/report_io.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace radial;

TEST_CASE("config round trip")
{
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int k = 0; k < 50; ++k) {
        RunConfig c;
        c.dimension = 2 + static_cast<int>(rng() % 4);
        c.intervals = 8 + static_cast<int>(rng() % 4000);
        c.f = k % 2 ? "three-crossing" : "power:" + std::to_string(2 + k);
        c.a = "1+" + std::to_string(k) + "r^2";
        c.b = "-0.5*r";
        c.tol = std::pow(10.0, -12.0 * U(rng));
        c.seed_value = U(rng);
        c.lambda_values = {U(rng), U(rng) / 3.0};
        c.mu_values = k % 3 ? std::vector<double>{U(rng)} : std::vector<double>{};
        c.truncation_p = 1.0 + 5.0 * U(rng);
        c.s0_factor = 1.0 + U(rng);
        c.seed = rng();
        c.output = "out/run" + std::to_string(k);
        const auto back = parse_config(format_config(c));
        CHECK(back == c);
    }
}

TEST_CASE("config parsing")
{
    const auto c = parse_config("# comment\n[grid]\n  dimension = 3\n\n[homotopy]\nlambda = 0.1, 0.2\n");
    CHECK(c.dimension == 3);
    CHECK(c.intervals == RunConfig{}.intervals);
    CHECK(c.lambda_values == std::vector<double>{0.1, 0.2});
    CHECK_THROWS_AS(parse_config("[grid]\nsize = 3\n"), ParameterError);
    CHECK_THROWS_AS(parse_config("[nope]\n"), ParameterError);
    CHECK_THROWS_AS(parse_config("dimension = 3\n"), ParameterError);
    CHECK_THROWS_AS(parse_config("[grid]\ndimension = three\n"), ParameterError);
    CHECK_THROWS_AS(parse_config("[grid\n"), ParameterError);
    CHECK_THROWS_AS(parse_config("[grid]\ndimension 3\n"), ParameterError);

    RunConfig bad;
    bad.path_points = 32;
    CHECK_THROWS_AS(check_config(bad), ParameterError);
    CHECK_NOTHROW(check_config(RunConfig{}));
}

TEST_CASE("polynomial coefficients")
{
    CHECK(parse_polynomial("1") == std::vector<double>{1.0});
    CHECK(parse_polynomial("1+r^2") == std::vector<double>{1.0, 0.0, 1.0});
    CHECK(parse_polynomial("-0.5*r") == std::vector<double>{0.0, -0.5});
    CHECK(parse_polynomial("2 - 0.25 r^3") == std::vector<double>{2.0, 0.0, 0.0, -0.25});
    CHECK(parse_polynomial("r + r") == std::vector<double>{0.0, 2.0});
    for (const char* bad : {"", "1+", "r^", "2*", "1 r r", "x"})
        CHECK_THROWS_AS(parse_polynomial(bad), ParameterError);
    CHECK(evaluate_polynomial({1.0, 0.0, 1.0}, 0.5) == 1.25);
    CHECK(make_weight("2").is_constant());
    CHECK(make_drift("0").is_zero());
    CHECK(make_weight("1+r").a0() == 1.0);
}

TEST_CASE("profile CSV round trip")
{
    const auto grid = build_grid(3, 100);
    const auto u = RadialFunction::sample(grid, [](double r) { return std::exp(r) / 3.0; });
    std::stringstream ss;
    write_profile_csv(ss, u);
    const auto p = read_profile_csv(ss);
    REQUIRE(p.r.size() == 101);
    const auto back = to_function(p, 3);
    for (std::size_t i = 0; i < u.size(); ++i)
        CHECK(back[i] == u[i]);
    CHECK(norm(back - u, NormKind::Linf) <= 1e-14);
    CHECK(std::abs(norm(back, NormKind::H1) - norm(u, NormKind::H1)) <= 1e-14);

    std::stringstream bad("r,u\n0,1\n");
    CHECK_THROWS_AS(read_profile_csv(bad), ParameterError);
    std::stringstream row("r,u,du_dr\n0,1\n");
    CHECK_THROWS_AS(read_profile_csv(row), ParameterError);
}

TEST_CASE("JSON shapes")
{
    const auto cj = config_json(RunConfig{});
    for (const char* key : {"dimension", "intervals", "f", "a", "b", "tol", "seed", "output", "mu"})
        CHECK(cj.contains(key));

    CertificateSet set;
    set.add(Certificate::at_most("x", 1.0, 2.0));
    const auto j = certificates_json(set);
    REQUIRE(j.size() == 1);
    CHECK(j[0]["name"] == "x");
    CHECK(j[0]["passed"] == true);
    CHECK(j[0]["relation"] == to_string(Certificate::Relation::AtMost));

    SuiteReport rep;
    rep.name = "demo";
    rep.checks.push_back({"ok", 0.0, 1.0, true});
    const auto sj = suite_json(rep);
    CHECK(sj["passed"] == true);
    CHECK_FALSE(sj.contains("seconds"));
}
