#include "radial_lab/solver.hpp"

#include "radial_lab/cone.hpp"
#include "radial_lab/errors.hpp"
#include "radial_lab/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace radial {

namespace {

double sup(const RadialFunction& u)
{
    return norm(u, NormKind::Linf);
}

bool small_enough(double residual, const RadialFunction& u, double tol)
{
    return residual <= tol * (1.0 + sup(u));
}

/// Largest t > 0 where t <A u, u> - <q (mu a f(t u) + lambda), u> changes sign
/// from + to -; u unchanged when there is none.
RadialFunction ray_rescale(const Problem& problem, const RadialFunction& u, double mu, double lambda)
{
    const auto& grid = problem.grid();
    const auto q = grid.weights();
    const auto a = problem.a_nodes();
    const auto& f = problem.nonlinearity();
    const auto vals = u.values();
    const double energy = problem.op().energy_inner(vals, vals);
    if (!(energy > 0.0))
        return u;
    auto h = [&](double t) {
        double acc = 0.0;
        for (std::size_t i = 0; i < vals.size(); ++i)
            acc += q[i] * (mu * a[i] * f.f(t * vals[i]) + lambda) * vals[i];
        return t * energy - acc;
    };
    constexpr int kSteps = 240;
    double best = -1.0;
    double prev_t = 1e-3;
    double prev_h = h(prev_t);
    for (int k = 1; k <= kSteps; ++k) {
        const double t = 1e-3 * std::pow(10.0, 6.0 * k / kSteps);
        const double ht = h(t);
        if (prev_h > 0.0 && !(ht > 0.0)) {
            double lo = prev_t, hi = t;
            for (int it = 0; it < 100; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (h(mid) > 0.0)
                    lo = mid;
                else
                    hi = mid;
            }
            best = 0.5 * (lo + hi);
        }
        prev_t = t;
        prev_h = ht;
    }
    if (best <= 0.0)
        return u;
    return best * u;
}

/// Residual with overflow reported as +inf.
double safe_residual(const Problem& problem, const RadialFunction& u, double mu, double lambda)
{
    const auto& f = problem.nonlinearity();
    for (double v : u.values())
        if (!std::isfinite(f.f(v)))
            return std::numeric_limits<double>::infinity();
    const double r = problem.residual_inf(u, mu, lambda);
    return std::isfinite(r) ? r : std::numeric_limits<double>::infinity();
}

/// One damped, rescaled Picard step; false when the iterate overflows.
bool picard_candidate(const Problem& problem, const RadialFunction& u, double theta, const SolveOptions& options,
                      RadialFunction& cand, double& cand_res)
{
    const auto& f = problem.nonlinearity();
    for (double v : u.values())
        if (!std::isfinite(f.f(v)))
            return false;
    const RadialFunction Tu = problem.apply_T(u, options.mu, options.lambda_shift);
    cand = lerp(u, Tu, theta);
    if (options.ray_rescale)
        cand = ray_rescale(problem, cand, options.mu, options.lambda_shift);
    cand_res = safe_residual(problem, cand, options.mu, options.lambda_shift);
    return std::isfinite(cand_res);
}

void newton_phase(const Problem& problem, SolveReport& report, const SolveOptions& options)
{
    const auto& grid = problem.grid();
    const auto q = grid.weights();
    const auto a = problem.a_nodes();
    const auto& f = problem.nonlinearity();
    const auto& A = problem.op().weighted_matrix();
    const double mu = options.mu;
    const double lambda = options.lambda_shift;

    RadialFunction& u = report.solution;
    double res = problem.residual_inf(u, mu, lambda);
    report.residual_inf = res;
    for (int k = 0; k < options.max_newton; ++k) {
        if (small_enough(res, u, options.tol)) {
            report.converged = true;
            return;
        }
        const auto vals = u.values();
        std::vector<double> rhs = A.apply(vals);
        Tridiagonal J = A;
        for (std::size_t i = 0; i < rhs.size(); ++i) {
            rhs[i] = -(rhs[i] - q[i] * (mu * a[i] * f.f(vals[i]) + lambda));
            J.diag[i] -= q[i] * mu * a[i] * f.fprime(vals[i]);
        }
        std::vector<double> step;
        try {
            step = solve_pivoted(J, rhs);
        } catch (const NumericError& e) {
            report.message = std::string("singular Newton Jacobian: ") + e.what();
            return;
        }
        if (!std::all_of(step.begin(), step.end(), [](double x) { return std::isfinite(x); })) {
            report.message = "Newton step overflowed";
            return;
        }
        const RadialFunction du(problem.grid_ptr(), std::move(step));
        double alpha = 1.0;
        RadialFunction cand = u + du;
        double cand_res = safe_residual(problem, cand, mu, lambda);
        while (!(cand_res < res) && alpha > 1e-4) {
            alpha *= 0.5;
            cand = u + alpha * du;
            cand_res = safe_residual(problem, cand, mu, lambda);
        }
        ++report.newton_iterations;
        ++report.iterations;
        if (!(cand_res < res)) {
            report.message = "Newton line search stalled";
            break;
        }
        u = std::move(cand);
        res = cand_res;
        report.residual_inf = res;
    }
    report.converged = small_enough(res, u, options.tol);
    if (!report.converged && report.message.empty())
        report.message = "Newton iteration limit reached";
}

}  // namespace

const char* to_string(SolveMethod method)
{
    switch (method) {
    case SolveMethod::Picard:
        return "picard";
    case SolveMethod::Newton:
        return "newton";
    case SolveMethod::PicardThenNewton:
        return "picard-then-newton";
    }
    return "?";
}

RadialFunction default_seed(const GridPtr& grid, const AprioriBounds& bounds)
{
    return RadialFunction::constant(grid, std::max(bounds.lambda_bar, 1.0));
}

CertificateSet solution_certificates(const Problem& problem, const SolveReport& report)
{
    CertificateSet set;
    const auto& u = report.solution;
    set.add(Certificate::flag("solve.converged", report.converged, report.message));
    set.add(Certificate::at_most("solve.residual", report.residual_inf, 1e-9 * (1.0 + sup(u)),
                                 "||L u - mu a f(u) - lambda||_inf"));
    const auto cone = check_cone(u);
    set.add(Certificate::at_most("solve.cone", std::max(-cone.min_value, cone.max_monotonicity_violation),
                                 kCertificateConeTolerance));
    const auto vals = u.values();
    const double min_u = *std::min_element(vals.begin(), vals.end());
    const bool trivial = sup(u) <= 1e-12;
    if (trivial) {
        set.add(Certificate::excluded("solve.positive", "trivial"));
    } else {
        set.add(Certificate::at_least("solve.positive", min_u, 1e-300, "min u > 0"));
    }
    if (problem.weight_certificate().nonconstant && !trivial) {
        const double h = problem.grid().spacing();
        double min_slope = std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i + 1 < vals.size(); ++i)
            min_slope = std::min(min_slope, (vals[i + 1] - vals[i - 1]) / (2.0 * h));
        set.add(Certificate::at_least("solve.strictly_increasing", min_slope, 1e-300, "min interior u' > 0"));
    } else {
        set.add(Certificate::excluded("solve.strictly_increasing", trivial ? "trivial" : "constant weight"));
    }
    return set;
}

SolveReport solve(const Problem& problem, const RadialFunction& seed, const SolveOptions& options)
{
    if (seed.grid_ptr() != problem.grid_ptr() && seed.size() != problem.grid().size())
        throw ParameterError("seed lives on a different grid");
    if (!check_cone(seed).in_cone)
        throw ParameterError("seed is not in the cone");
    if (!(options.mu > 0.0) || options.lambda_shift < 0.0)
        throw ParameterError("need mu > 0 and lambda >= 0");

    const double mu = options.mu;
    const double lambda = options.lambda_shift;
    SolveReport report;
    report.lambda_shift = lambda;
    report.mu = mu;
    report.solution = RadialFunction(problem.grid_ptr(), {seed.values().begin(), seed.values().end()});
    RadialFunction& u = report.solution;

    double res = problem.residual_inf(u, mu, lambda);
    report.residual_inf = res;
    if (small_enough(res, u, options.tol)) {
        report.converged = true;
        report.method = SolveMethod::Picard;
        report.message = "seed already satisfies the tolerance";
        report.certificates = solution_certificates(problem, report);
        return report;
    }

    double theta = 1.0;
    for (int it = 0; it < options.max_picard && !(res < options.newton_switch); ++it) {
        RadialFunction cand;
        double cand_res = 0.0;
        if (!picard_candidate(problem, u, theta, options, cand, cand_res)) {
            report.message = "Picard iterates overflowed";
            break;
        }
        ++report.picard_iterations;
        ++report.iterations;
        const bool accept = cand_res < res || theta <= options.theta_min;
        if (cand_res < res)
            theta = std::min(1.0, 1.2 * theta);
        else
            theta = std::max(options.theta_min, 0.5 * theta);
        if (!accept)
            continue;
        const auto cone = check_cone(cand);
        report.max_iterate_cone_violation =
            std::max({report.max_iterate_cone_violation, -cone.min_value, cone.max_monotonicity_violation});
        u = std::move(cand);
        res = cand_res;
        report.residual_inf = res;
        if (small_enough(res, u, options.tol))
            break;
    }

    if (small_enough(res, u, options.tol)) {
        report.converged = true;
        report.method = SolveMethod::Picard;
    } else if (res < options.newton_switch) {
        report.method = report.picard_iterations > 0 ? SolveMethod::PicardThenNewton : SolveMethod::Newton;
        newton_phase(problem, report, options);
    } else if (report.message.empty()) {
        report.message = "Picard iteration limit reached above the Newton switch";
    }
    if (report.converged && report.message.empty())
        report.message = "converged";
    report.certificates = solution_certificates(problem, report);
    return report;
}

SolveReport newton_polish(const Problem& problem, const RadialFunction& u, const SolveOptions& options)
{
    SolveReport report;
    report.lambda_shift = options.lambda_shift;
    report.mu = options.mu;
    report.method = SolveMethod::Newton;
    report.solution = u;
    newton_phase(problem, report, options);
    if (report.converged && report.message.empty())
        report.message = "converged";
    report.certificates = solution_certificates(problem, report);
    return report;
}

std::vector<SolveReport> homotopy(const Problem& problem, const HomotopyFamily& family, const RadialFunction& seed,
                                  const AprioriBounds& bounds, const SolveOptions& options)
{
    for (double v : family.values) {
        if (family.kind == HomotopyFamily::Kind::LambdaShift && (v < 0.0 || v > bounds.lambda_bar))
            throw ParameterError("lambda outside [0, lambda_bar]");
        if (family.kind == HomotopyFamily::Kind::Mu && !(v > 0.0 && v <= 1.0))
            throw ParameterError("mu outside (0, 1]");
    }
    std::vector<SolveReport> reports;
    RadialFunction current = seed;
    for (double v : family.values) {
        SolveOptions opts = options;
        if (family.kind == HomotopyFamily::Kind::LambdaShift)
            opts.lambda_shift = v;
        else
            opts.mu = v;
        SolveReport rep = solve(problem, current, opts);
        if (rep.converged) {
            rep.certificates.append(apriori(bounds, rep));
            if (check_cone(rep.solution, std::nullopt, 0.0).in_cone)
                current = rep.solution;
        }
        reports.push_back(std::move(rep));
    }
    return reports;
}

CertificateSet krasnoselskii_certificates(const Problem& problem, const KrasnoselskiiInput& input,
                                          const AprioriBounds& bounds)
{
    CertificateSet set;
    std::mt19937_64 rng(input.seed);
    double worst = 0.0;
    for (int k = 0; k < input.cone_samples; ++k) {
        const auto u = random_cone_function(problem.grid_ptr(), rng, bounds.K_inf);
        const auto cone = check_cone(problem.apply_T(u));
        worst = std::max({worst, -cone.min_value, cone.max_monotonicity_violation});
    }
    set.add(Certificate::at_most("krasnoselskii.i.cone_map", worst, kCertificateConeTolerance,
                                 std::to_string(input.cone_samples) + " random cone samples"));
    set.add(Certificate::excluded("krasnoselskii.ii.complete_continuity", "analytic property, out of numerical scope"));

    for (std::size_t k = 0; k < input.lambda_reports.size(); ++k) {
        const auto& rep = input.lambda_reports[k];
        std::ostringstream name;
        name << "krasnoselskii.iii.lambda=" << rep.lambda_shift;
        if (!rep.converged) {
            set.add(Certificate::excluded(name.str(), "not converged"));
            continue;
        }
        set.add(Certificate::at_most(name.str(), norm(rep.solution, NormKind::H1), bounds.K2,
                                     "H1 norm stays inside the sphere of radius 2 K2"));
    }
    for (const auto& rep : input.mu_reports) {
        std::ostringstream name;
        name << "krasnoselskii.iv.mu=" << rep.mu;
        if (!rep.converged) {
            set.add(Certificate::excluded(name.str(), "not converged"));
            continue;
        }
        if (norm(rep.solution, NormKind::Linf) <= 1e-12) {
            set.add(Certificate::excluded(name.str(), "trivial"));
            continue;
        }
        set.add(Certificate::at_least(name.str(), norm(rep.solution, NormKind::H1), bounds.k2,
                                      "H1 norm stays outside the sphere of radius k2 / 2"));
    }
    return set;
}

}  // namespace radial
