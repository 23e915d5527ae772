// radial-lab: command-line driver for the radial Neumann laboratory.
//
// Subcommands: eigen, solve, homotopy, mountain-pass, verify, probe.
// Each writes <output>.json (config echo, certificates, energies, residuals,
// timings) and, where a profile exists, <output>.csv with columns r,u,du_dr.
// Exit status: 0 all certificates pass, 1 some certificate failed,
// 2 usage or configuration error.

#include "radial_lab/config.hpp"
#include "radial_lab/errors.hpp"
#include "radial_lab/mountain_pass.hpp"
#include "radial_lab/nonlinearity.hpp"
#include "radial_lab/parallel.hpp"
#include "radial_lab/report_io.hpp"
#include "radial_lab/solver.hpp"
#include "radial_lab/variational.hpp"
#include "radial_lab/verify.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>

namespace {

using namespace radial;
using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

class Timings {
public:
    void record(const std::string& stage, Clock::time_point start)
    {
        data_[stage] = std::chrono::duration<double>(Clock::now() - start).count();
    }
    void set(const std::string& stage, double seconds) { data_[stage] = seconds; }
    const json& data() const { return data_; }

private:
    json data_ = json::object();
};

/// Flags that override values read from --config.
class Overrides {
public:
    template <typename T>
    CLI::Option* add(CLI::App* app, const std::string& flag, T RunConfig::*member, const std::string& help)
    {
        auto holder = std::make_shared<T>();
        auto* opt = app->add_option(flag, *holder, help);
        items_.push_back({opt, [holder, member](RunConfig& c) { c.*member = *holder; }});
        return opt;
    }
    void apply(RunConfig& c) const
    {
        for (const auto& [opt, set] : items_)
            if (opt->count() > 0)
                set(c);
    }

private:
    std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> items_;
};

struct Setup {
    GridPtr grid;
    AssumptionReport assumptions;
    std::optional<TruncationResult> truncation;
    std::unique_ptr<Problem> problem;
};

Setup build_setup(const RunConfig& cfg, CertificateSet& certs)
{
    Setup s;
    s.grid = build_grid(cfg.dimension, cfg.intervals);
    const auto a = make_weight(cfg.a);
    const auto b = make_drift(cfg.b);
    const auto f = parse_nonlinearity(cfg.f);
    s.assumptions = validate(f, a.a0());
    for (const auto& e : s.assumptions.entries)
        certs.add(Certificate::flag("assume." + e.hypothesis, e.passed, e.detail));
    if (!s.assumptions.witness)
        throw HypothesisError("no growth witness for " + cfg.f + "; see the assume.* entries");
    TruncationOptions topts;
    topts.p_user = cfg.truncation_p;
    topts.s0_factor = cfg.s0_factor;
    s.truncation.emplace(truncate(f, *s.assumptions.witness, *s.grid, a, b, topts));
    certs.add(Certificate::flag("truncation.patch_feasible", s.truncation->truncated.patch_feasible()));
    s.problem = std::make_unique<Problem>(s.grid, a, b, s.truncation->truncated);
    return s;
}

json bounds_json(const AprioriBounds& b)
{
    return {{"lambda_bar", b.lambda_bar}, {"K1", b.K1},       {"K_inf", b.K_inf}, {"K2", b.K2},
            {"k2", b.k2},                 {"sigma", b.sigma}, {"M", b.M},         {"delta", b.delta}};
}

json window_json(const ConeWindow& w)
{
    json out{{"u_minus", w.u_minus}, {"u_zero", w.u_zero}};
    out["u_plus"] = w.u_plus.is_finite() ? json(w.u_plus.value()) : json(nullptr);
    return out;
}

json run_json(const SolveReport& r)
{
    return {{"lambda", r.lambda_shift},
            {"mu", r.mu},
            {"converged", r.converged},
            {"residual_inf", r.residual_inf},
            {"iterations", r.iterations},
            {"L1", norm(r.solution, NormKind::L1)},
            {"Linf", norm(r.solution, NormKind::Linf)},
            {"H1", norm(r.solution, NormKind::H1)},
            {"message", r.message}};
}

void add_prefixed(CertificateSet& into, const CertificateSet& from, const std::string& prefix)
{
    for (auto c : from.items()) {
        c.name = prefix + c.name;
        into.add(std::move(c));
    }
}

struct Outcome {
    json report = json::object();
    CertificateSet certificates;
    std::optional<RadialFunction> profile;
};

double lambda2_of(const GridPtr& grid)
{
    return radial_eigs(grid, 2)[1].eigenvalue;
}

Outcome run_eigen(const RunConfig& cfg, Timings& timings)
{
    Outcome out;
    const auto grid = build_grid(cfg.dimension, cfg.intervals);
    const auto start = Clock::now();
    const auto eigs = radial_eigs(grid, cfg.eigen_count);
    timings.record("eigen", start);
    json lambdas = json::array();
    for (const auto& e : eigs)
        lambdas.push_back(e.eigenvalue);
    out.report["lambda"] = lambdas;
    out.certificates.add(Certificate::at_most("eigen.lambda1", std::abs(eigs[0].eigenvalue - 1.0), 1e-8, "|lambda_1 - 1|"));
    if (eigs.size() >= 2) {
        const auto& v = eigs[1].v;
        const double exact = radial_lambda2_exact(cfg.dimension);
        out.report["lambda2_rad"] = eigs[1].eigenvalue;
        out.report["lambda2_bessel"] = exact;
        out.certificates.add(Certificate::at_most("eigen.lambda2_bessel", std::abs(eigs[1].eigenvalue - exact), 1e-3,
                                                  "|lambda_2 - (1 + j^2)|"));
        out.certificates.add(Certificate::at_most("eigen.zero_mean", std::abs(integrate(v)), 1e-8));
        out.certificates.add(Certificate::at_most(
            "eigen.monotone", check_cone(v, std::nullopt, 0.0).max_monotonicity_violation, 0.0));
        out.profile = v;
    } else {
        out.profile = eigs[0].v;
    }
    return out;
}

Outcome run_solve(const RunConfig& cfg, Timings& timings)
{
    Outcome out;
    auto start = Clock::now();
    const auto s = build_setup(cfg, out.certificates);
    timings.record("setup", start);
    const auto& bounds = s.truncation->bounds;

    SolveOptions opts;
    opts.tol = cfg.tol;
    opts.max_picard = cfg.max_picard;
    opts.max_newton = cfg.max_newton;
    const auto seed = cfg.seed_value > 0.0 ? RadialFunction::constant(s.grid, cfg.seed_value)
                                           : default_seed(s.grid, bounds);
    start = Clock::now();
    const auto rep = solve(*s.problem, seed, opts);
    timings.record("solve", start);

    out.certificates.append(rep.certificates);
    if (rep.converged)
        out.certificates.append(apriori(bounds, rep));
    out.report["residual_inf"] = rep.residual_inf;
    out.report["iterations"] = rep.iterations;
    out.report["method"] = to_string(rep.method);
    out.report["message"] = rep.message;
    out.report["u_at_0"] = rep.solution.front();
    out.report["u_at_1"] = rep.solution.back();
    out.report["bounds"] = bounds_json(bounds);
    if (s.problem->op().symmetric())
        out.report["energy"] = EnergyFunctional(*s.problem).energy(rep.solution);
    out.report["lambda2_rad"] = lambda2_of(s.grid);
    out.profile = rep.solution;
    return out;
}

Outcome run_homotopy(const RunConfig& cfg, Timings& timings)
{
    Outcome out;
    auto start = Clock::now();
    const auto s = build_setup(cfg, out.certificates);
    timings.record("setup", start);
    const auto& bounds = s.truncation->bounds;

    SolveOptions opts;
    opts.tol = cfg.tol;
    opts.max_picard = cfg.max_picard;
    opts.max_newton = cfg.max_newton;
    const auto seed = cfg.seed_value > 0.0 ? RadialFunction::constant(s.grid, cfg.seed_value)
                                           : default_seed(s.grid, bounds);
    start = Clock::now();
    const auto base = solve(*s.problem, seed, opts);
    add_prefixed(out.certificates, base.certificates, "base.");
    if (!base.converged) {
        out.report["message"] = "base solve failed: " + base.message;
        out.profile = base.solution;
        return out;
    }

    const double lb = bounds.lambda_bar;
    const auto lambdas = cfg.lambda_values.empty() ? std::vector<double>{0.0, lb / 16, lb / 8, lb / 4}
                                                   : cfg.lambda_values;
    const auto lambda_runs = homotopy(*s.problem, {HomotopyFamily::Kind::LambdaShift, lambdas}, base.solution, bounds, opts);
    const auto mu_runs = homotopy(*s.problem, {HomotopyFamily::Kind::Mu, cfg.mu_values}, base.solution, bounds, opts);
    timings.record("homotopy", start);

    json lj = json::array();
    json mj = json::array();
    double worst_residual = base.residual_inf;
    int iterations = base.iterations;
    for (const auto& r : lambda_runs) {
        lj.push_back(run_json(r));
        std::ostringstream p;
        p << "lambda=" << r.lambda_shift << ".";
        if (!r.converged) {
            // A missing solution here is not a failure: the family need not have one.
            out.certificates.add(Certificate::excluded(p.str() + "solve", "no solution found; nonexistence not certified"));
            continue;
        }
        add_prefixed(out.certificates, r.certificates, p.str());
        worst_residual = std::max(worst_residual, r.residual_inf);
        iterations += r.iterations;
    }
    for (const auto& r : mu_runs) {
        mj.push_back(run_json(r));
        std::ostringstream p;
        p << "mu=" << r.mu << ".";
        add_prefixed(out.certificates, r.certificates, p.str());
        if (r.converged) {
            worst_residual = std::max(worst_residual, r.residual_inf);
            iterations += r.iterations;
        }
    }
    KrasnoselskiiInput input{lambda_runs, mu_runs, 50, cfg.seed};
    out.certificates.append(krasnoselskii_certificates(*s.problem, input, bounds));

    out.report["lambda_runs"] = lj;
    out.report["mu_runs"] = mj;
    out.report["bounds"] = bounds_json(bounds);
    out.report["residual_inf"] = worst_residual;
    out.report["iterations"] = iterations;
    out.report["lambda2_rad"] = lambda2_of(s.grid);
    out.profile = base.solution;
    return out;
}

struct VariationalStage {
    Setup setup;
    std::unique_ptr<EnergyFunctional> functional;
    std::vector<EigenPair> eigs;
    ConeWindow window;
};

/// The probe also runs as a negative control: without a qualifying fixed
/// point it falls back to the first positive one.
VariationalStage variational_stage(const RunConfig& cfg, Outcome& out, Timings& timings, bool require_slope)
{
    VariationalStage v;
    const auto start = Clock::now();
    v.setup = build_setup(cfg, out.certificates);
    v.functional = std::make_unique<EnergyFunctional>(*v.setup.problem);
    v.eigs = radial_eigs(v.setup.grid, std::max(2, cfg.explore_k));
    const auto& ft = v.setup.truncation->truncated;
    const double s_max = std::min(ft.s0(), 1e3);
    auto fp = fixed_points(ft.modified(), s_max, v.eigs[1].eigenvalue);
    out.certificates.add(Certificate::flag("window.slope_above_lambda2", fp.has_window, fp.message));
    if (!fp.has_window && !require_slope)
        fp = fixed_points(ft.modified(), s_max, -std::numeric_limits<double>::infinity());
    timings.record("setup", start);
    if (fp.windows.empty())
        throw HypothesisError("no fixed point with f'(u0) > lambda_2 = " + std::to_string(v.eigs[1].eigenvalue) +
                              " on [0, " + std::to_string(s_max) + "]: " + fp.message);
    v.window = fp.windows.front().window;
    const auto wc = validate_window(v.window, ft.modified());
    out.certificates.add(Certificate::flag("window.valid", wc.valid, wc.message));
    out.report["window"] = window_json(v.window);
    out.report["lambda2_rad"] = v.eigs[1].eigenvalue;
    out.report["I_u0"] = v.functional->energy(RadialFunction::constant(v.setup.grid, v.window.u_zero));
    return v;
}

json probe_json(const TangentProbe& p)
{
    json samples = json::array();
    for (const auto& [s, g] : p.g_samples)
        samples.push_back({s, g});
    return {{"eps1", p.eps1},
            {"eps2", p.eps2},
            {"g_samples", samples},
            {"gaps", p.gaps},
            {"g_at_zero", p.g_at_zero},
            {"g_slope_at_zero", p.g_slope_at_zero},
            {"curvature", p.curvature},
            {"mechanism_present", p.mechanism_present},
            {"message", p.message}};
}

Outcome run_probe(const RunConfig& cfg, Timings& timings)
{
    Outcome out;
    const auto v = variational_stage(cfg, out, timings, false);
    const auto start = Clock::now();
    const auto probe = tangent_probe(*v.functional, v.window, v.eigs[1]);
    timings.record("probe", start);
    out.certificates.add(Certificate::flag("probe.newton", probe.newton_ok, probe.message));
    out.certificates.add(Certificate::at_most("probe.curvature", probe.curvature, 0.0, "I''(u0)(v, v) < 0"));
    out.certificates.add(Certificate::flag("probe.gaps_negative", probe.all_gaps_negative));
    out.report["probe"] = probe_json(probe);
    out.report["energy"] = out.report["I_u0"];
    out.profile = v.eigs[1].v;
    return out;
}

Outcome run_mountain_pass(const RunConfig& cfg, Timings& timings)
{
    Outcome out;
    const auto v = variational_stage(cfg, out, timings, true);
    const auto& I = *v.functional;

    auto start = Clock::now();
    const auto probe = tangent_probe(I, v.window, v.eigs[1]);
    out.report["probe"] = probe_json(probe);
    out.certificates.add(Certificate::flag("probe.mechanism", probe.mechanism_present, probe.message));

    const auto sets = admissible_sets(v.window, I);
    out.report["tau"] = sets.tau;
    out.report["alpha"] = sets.alpha;
    out.report["branch"] = to_string(sets.branch);
    out.report["barrier"] = sets.barrier();

    const auto& direction = v.eigs[static_cast<std::size_t>(cfg.explore_k - 1)];
    if (cfg.explore_k > 2)
        out.report["exploratory"] = "path seeded with eigen-direction " + std::to_string(cfg.explore_k);
    const auto init = initial_path(v.window, direction, sets, I, cfg.path_points);
    timings.record("initial_path", start);
    out.certificates.add(Certificate::flag("mp.initial_path", init.found, init.message));
    out.report["initial_path"] = {{"s", init.path.s},
                                  {"t_minus", init.t_minus},
                                  {"t_plus", init.t_plus},
                                  {"max_energy", init.max_energy}};
    if (!init.found)
        return out;

    MinimaxOptions mopts;
    mopts.max_rounds = cfg.max_rounds;
    mopts.polish_options.tol = cfg.tol;
    mopts.polish_options.max_newton = cfg.max_newton;
    start = Clock::now();
    const auto mm = minimax(init.path, I, sets, mopts);
    timings.record("minimax", start);
    out.certificates.append(mm.certificates);

    out.report["c"] = mm.c;
    out.report["I_star"] = mm.I_star;
    out.report["energy"] = mm.I_star;
    out.report["residual_inf"] = mm.polish.residual_inf;
    out.report["iterations"] = mm.rounds;
    out.report["gradient_norm"] = mm.gradient_norm;
    out.report["intersections"] = mm.intersections;
    out.report["c_history"] = mm.c_history;
    out.report["message"] = mm.message;
    out.profile = mm.u_star;
    return out;
}

std::vector<std::string> selected_suites(const std::string& spec)
{
    if (spec == "all")
        return suite_names();
    std::vector<std::string> out;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(item);
    for (const auto& name : out)
        if (std::find(suite_names().begin(), suite_names().end(), name) == suite_names().end())
            throw ParameterError("unknown suite '" + name + "'");
    return out;
}

Outcome run_verify(const RunConfig& cfg, Timings& timings)
{
    Outcome out;
    const auto names = selected_suites(cfg.suite);
    SuiteConfig sc;
    sc.dimension = cfg.dimension;
    sc.intervals = cfg.intervals;
    sc.samples = cfg.samples;
    sc.drifts = cfg.drifts;
    sc.multistart = cfg.multistart;
    sc.seed = cfg.seed;

    std::vector<SuiteReport> reports(names.size());
    const auto start = Clock::now();
    parallel_for(names.size(), [&](std::size_t i) { reports[i] = run_suite(names[i], sc); });
    timings.record("verify", start);

    json suites = json::array();
    for (const auto& r : reports) {
        suites.push_back(suite_json(r));
        for (const auto& c : r.checks) {
            Certificate cert;
            cert.name = r.name + ": " + c.description;
            cert.measured = c.measured;
            cert.bound = c.bound;
            cert.relation = Certificate::Relation::Flag;
            cert.passed = c.passed;
            out.certificates.add(std::move(cert));
        }
        timings.set("suite." + r.name, r.seconds);
    }
    out.report["suites"] = suites;
    return out;
}

void add_common(CLI::App* sub, Overrides& ov, std::string& config_path)
{
    sub->add_option("--config", config_path, "config file ([section] key = value)")->check(CLI::ExistingFile);
    ov.add(sub, "--dim", &RunConfig::dimension, "space dimension N >= 2");
    ov.add(sub, "--n", &RunConfig::intervals, "grid intervals");
    ov.add(sub, "--f", &RunConfig::f, "nonlinearity, e.g. power:20, saturating:2, three-crossing, spline:@file");
    ov.add(sub, "--a", &RunConfig::a, "weight a(r), polynomial in r");
    ov.add(sub, "--b", &RunConfig::b, "drift b(r), polynomial in r");
    ov.add(sub, "--seed", &RunConfig::seed, "RNG seed");
    ov.add(sub, "--output", &RunConfig::output, "output prefix for .json and .csv");
}

void print_summary(const CertificateSet& certs, const RunConfig& cfg, bool wrote_csv)
{
    for (const auto& c : certs.items()) {
        const char* tag = c.relation == Certificate::Relation::Excluded ? "SKIP" : (c.passed ? "PASS" : "FAIL");
        std::printf("%s %s", tag, c.name.c_str());
        if (c.relation == Certificate::Relation::AtMost || c.relation == Certificate::Relation::AtLeast)
            std::printf("  %.6g %s %.6g", c.measured, c.relation == Certificate::Relation::AtMost ? "<=" : ">=", c.bound);
        std::printf("\n");
    }
    std::printf("report: %s.json%s\n", cfg.output.c_str(), wrote_csv ? (", profile: " + cfg.output + ".csv").c_str() : "");
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"radial-lab: positive nondecreasing radial solutions of Neumann problems on the unit ball"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "radial-lab 1.0");

    std::string config_path;
    Overrides ov;
    auto* eigen = app.add_subcommand("eigen", "radial Neumann eigenpairs of -Lap + 1");
    auto* solve_cmd = app.add_subcommand("solve", "cone solution of -Lap u + b x.grad u + u = a f(u)");
    auto* homotopy_cmd = app.add_subcommand("homotopy", "lambda- and mu-families with the a priori bound chain");
    auto* mp = app.add_subcommand("mountain-pass", "nonconstant solution by the cone-constrained minimax");
    auto* verify = app.add_subcommand("verify", "numerical verification suites");
    auto* probe = app.add_subcommand("probe", "tangent probe of the energy at the constant solution u0");
    for (auto* sub : {eigen, solve_cmd, homotopy_cmd, mp, verify, probe})
        add_common(sub, ov, config_path);

    ov.add(eigen, "--k", &RunConfig::eigen_count, "number of eigenpairs (1..6)");
    for (auto* sub : {solve_cmd, homotopy_cmd, mp}) {
        ov.add(sub, "--tol", &RunConfig::tol, "residual tolerance");
        ov.add(sub, "--max-newton", &RunConfig::max_newton, "Newton iteration limit");
    }
    for (auto* sub : {solve_cmd, homotopy_cmd}) {
        ov.add(sub, "--max-picard", &RunConfig::max_picard, "Picard iteration limit");
        ov.add(sub, "--seed-value", &RunConfig::seed_value, "constant seed (0: default rule)");
    }
    ov.add(homotopy_cmd, "--lambda", &RunConfig::lambda_values, "lambda values")->delimiter(',');
    ov.add(homotopy_cmd, "--mu", &RunConfig::mu_values, "mu values in (0, 1]")->delimiter(',');
    for (auto* sub : {solve_cmd, homotopy_cmd, mp, probe}) {
        ov.add(sub, "--p", &RunConfig::truncation_p, "truncation exponent requested");
        ov.add(sub, "--s0-factor", &RunConfig::s0_factor, "s0 = factor * max(K_inf, M)");
    }
    ov.add(mp, "--points", &RunConfig::path_points, "path points P (odd, >= 17)");
    ov.add(mp, "--max-rounds", &RunConfig::max_rounds, "minimax round limit");
    ov.add(mp, "--explore-k", &RunConfig::explore_k, "eigen-direction for the path (exploratory above 2)");
    ov.add(verify, "--suite", &RunConfig::suite, "suite name, comma list, or all");
    ov.add(verify, "--samples", &RunConfig::samples, "random samples per suite");
    ov.add(verify, "--drifts", &RunConfig::drifts, "drifts for cone_map");
    ov.add(verify, "--multistart", &RunConfig::multistart, "runs for constant_only");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
        ov.apply(cfg);
        check_config(cfg);

        Timings timings;
        const auto total = Clock::now();
        Outcome out;
        std::string command;
        if (eigen->parsed()) {
            command = "eigen";
            out = run_eigen(cfg, timings);
        } else if (solve_cmd->parsed()) {
            command = "solve";
            out = run_solve(cfg, timings);
        } else if (homotopy_cmd->parsed()) {
            command = "homotopy";
            out = run_homotopy(cfg, timings);
        } else if (mp->parsed()) {
            command = "mountain-pass";
            out = run_mountain_pass(cfg, timings);
        } else if (verify->parsed()) {
            command = "verify";
            out = run_verify(cfg, timings);
        } else {
            command = "probe";
            out = run_probe(cfg, timings);
        }
        timings.record("total", total);

        json report = out.report;
        report["command"] = command;
        report["config"] = config_json(cfg);
        report["certificates"] = certificates_json(out.certificates);
        report["all_passed"] = out.certificates.all_passed();
        for (const char* key : {"energy", "residual_inf", "lambda2_rad"})
            if (!report.contains(key))
                report[key] = nullptr;
        if (!report.contains("iterations"))
            report["iterations"] = 0;
        report["timings"] = timings.data();
        write_json(cfg.output + ".json", report);
        if (out.profile)
            write_profile_csv(cfg.output + ".csv", *out.profile);
        print_summary(out.certificates, cfg, out.profile.has_value());
        return out.certificates.all_passed() ? 0 : 1;
    } catch (const ParameterError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const HypothesisError& e) {
        std::fprintf(stderr, "hypothesis not met: %s\n", e.what());
        return 2;
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "invalid derived constant: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "failure: %s\n", e.what());
        return 1;
    }
}
