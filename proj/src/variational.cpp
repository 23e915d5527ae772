#include "radial_lab/variational.hpp"

#include "radial_lab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace radial {

EnergyFunctional::EnergyFunctional(const Problem& problem) : problem_(&problem)
{
    if (!problem.op().symmetric())
        throw ParameterError("the energy functional needs b == 0");
    const auto q = problem.grid().weights();
    const auto a = problem.a_nodes();
    for (std::size_t i = 0; i < q.size(); ++i)
        weighted_mass_ += q[i] * a[i];
}

double EnergyFunctional::energy(const RadialFunction& u) const
{
    const auto q = problem_->grid().weights();
    const auto a = problem_->a_nodes();
    const auto& f = problem_->nonlinearity();
    const auto v = u.values();
    double potential = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        potential += q[i] * a[i] * f.F(v[i]);
    return 0.5 * problem_->op().energy_inner(v, v) - potential;
}

RadialFunction EnergyFunctional::gradient(const RadialFunction& u) const
{
    return u - problem_->apply_T(u);
}

double EnergyFunctional::inner(const RadialFunction& x, const RadialFunction& y) const
{
    return problem_->op().energy_inner(x.values(), y.values());
}

double EnergyFunctional::h1_norm(const RadialFunction& x) const
{
    return std::sqrt(std::max(0.0, inner(x, x)));
}

double EnergyFunctional::constant_energy(double t) const
{
    return 0.5 * t * t * problem_->grid().ball_volume() - problem_->nonlinearity().F(t) * weighted_mass_;
}

double cutoff(double s, double level, double epsilon)
{
    const double d = std::abs(s - level);
    if (d <= epsilon)
        return 1.0;
    if (d >= 2.0 * epsilon)
        return 0.0;
    const double x = (2.0 * epsilon - d) / epsilon;
    return x * x * x * (x * (6.0 * x - 15.0) + 10.0);
}

double window_violation(const RadialFunction& u, const ConeWindow& window)
{
    const auto rep = check_cone(u, window, 0.0);
    return std::max(rep.max_monotonicity_violation, rep.max_window_violation);
}

FlowResult flow(const EnergyFunctional& functional, const RadialFunction& u, const FlowParams& params,
                const ConeWindow& window)
{
    if (!(params.epsilon > 0.0) || !(params.delta_grad > 0.0) || !(params.step > 0.0))
        throw ParameterError("flow needs epsilon, delta and step positive");
    const double duration = params.max_duration ? *params.max_duration : 2.0 * params.epsilon / params.delta_grad;

    FlowResult result;
    result.u = u;
    double energy = functional.energy(u);
    result.energies.push_back(energy);
    if (cutoff(energy, params.level, params.epsilon) == 0.0) {
        result.untouched = true;
        result.message = "energy outside the cutoff band";
        return result;
    }

    double h = params.step;
    RadialFunction current = u;
    while (result.time < duration && result.steps < params.max_steps) {
        const double chi = cutoff(energy, params.level, params.epsilon);
        if (chi == 0.0) {
            result.message = "left the cutoff band";
            break;
        }
        const RadialFunction grad = functional.gradient(current);
        const double gnorm = functional.h1_norm(grad);
        if (gnorm < params.gradient_stop) {
            result.stopped_on_gradient = true;
            result.message = "gradient below threshold";
            break;
        }
        const double speed = params.normalized ? chi / gnorm : chi;
        const double dt = std::min(h, duration - result.time);
        bool accepted = false;
        double trial_dt = dt;
        while (!accepted) {
            RadialFunction next = current - (trial_dt * speed) * grad;
            result.max_window_drift = std::max(result.max_window_drift, window_violation(next, window));
            if (params.projection == ProjectionMode::On)
                next = project_to_window(next, window);
            const double e_next = functional.energy(next);
            if (e_next <= energy + 1e-12) {
                current = std::move(next);
                energy = e_next;
                result.time += trial_dt;
                accepted = true;
            } else {
                trial_dt *= 0.5;
                h = trial_dt;
                if (trial_dt < 1e-12) {
                    result.stalled = true;
                    break;
                }
            }
        }
        if (result.stalled) {
            result.message = "step underflow";
            break;
        }
        ++result.steps;
        result.energies.push_back(energy);
    }
    if (result.message.empty())
        result.message = result.time >= duration ? "reached duration" : "step limit";
    result.u = std::move(current);
    return result;
}

namespace {

struct RayEval {
    double psi = 0.0;
    double dpsi = 0.0;
};

RayEval ray(const EnergyFunctional& functional, const RadialFunction& w, double t)
{
    const auto& problem = functional.problem();
    const auto q = problem.grid().weights();
    const auto a = problem.a_nodes();
    const auto& f = problem.nonlinearity();
    const auto v = w.values();
    const double quad = problem.op().energy_inner(v, v);
    double acc = 0.0;
    double dacc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        acc += q[i] * a[i] * f.f(t * v[i]) * v[i];
        dacc += q[i] * a[i] * f.fprime(t * v[i]) * v[i] * v[i];
    }
    return {t * quad - acc, quad - dacc};
}

std::optional<double> solve_ray(const EnergyFunctional& functional, const RadialFunction& w, double start)
{
    double t = start;
    for (int it = 0; it < 100; ++it) {
        const auto e = ray(functional, w, t);
        if (!(e.dpsi != 0.0) || !std::isfinite(e.psi))
            return std::nullopt;
        const double step = e.psi / e.dpsi;
        double next = t - step;
        if (next <= 0.0)
            next = 0.5 * t;
        if (std::abs(next - t) <= 1e-15 * std::max(1.0, t))
            return next;
        t = next;
    }
    const auto e = ray(functional, w, t);
    if (std::abs(e.psi) <= 1e-10 * std::max(1.0, std::abs(e.dpsi)))
        return t;
    return std::nullopt;
}

}  // namespace

TangentProbe tangent_probe(const EnergyFunctional& functional, const ConeWindow& window, const EigenPair& v2,
                           int samples, std::optional<double> eps1)
{
    if (samples < 3 || samples % 2 == 0)
        throw ParameterError("tangent probe needs an odd sample count >= 3");
    const auto& problem = functional.problem();
    const auto& grid_ptr = problem.grid_ptr();
    const double u0 = window.u_zero;
    const RadialFunction base = RadialFunction::constant(grid_ptr, u0);
    const RadialFunction& v = v2.v;
    const double I0 = functional.energy(base);

    TangentProbe probe;
    {
        const auto q = problem.grid().weights();
        const auto a = problem.a_nodes();
        const double fp = problem.nonlinearity().fprime(u0);
        double potential = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i)
            potential += q[i] * a[i] * fp * v[i] * v[i];
        probe.curvature = functional.inner(v, v) - potential;
    }

    double e1 = eps1 ? *eps1 : 0.1 * u0;
    for (int attempt = 0; attempt <= 12; ++attempt, e1 *= 0.5) {
        probe.eps1 = e1;
        probe.g_samples.clear();
        probe.gaps.clear();
        probe.newton_ok = true;
        probe.eps2 = 0.0;
        bool negative = true;
        std::ostringstream failures;
        const int half = samples / 2;
        for (int k = -half; k <= half; ++k) {
            const double s = e1 * k / half;
            const RadialFunction w = base + s * v;
            const auto t = solve_ray(functional, w, 1.0);
            if (!t) {
                probe.newton_ok = false;
                failures << "no root of psi at s = " << s << "; ";
                continue;
            }
            const double gap = functional.energy(*t * w) - I0;
            probe.g_samples.emplace_back(s, *t);
            probe.gaps.push_back(gap);
            probe.eps2 = std::max(probe.eps2, std::abs(*t - 1.0));
            if (k != 0 && !(gap < 0.0))
                negative = false;
            if (k == 0)
                probe.g_at_zero = *t;
        }
        probe.all_gaps_negative = negative && probe.newton_ok;
        probe.message = failures.str();
        if (probe.all_gaps_negative || !(probe.curvature < 0.0))
            break;
    }

    const double ds = 1e-4 * std::max(1e-3, probe.eps1);
    const auto tp = solve_ray(functional, base + ds * v, 1.0);
    const auto tm = solve_ray(functional, base - ds * v, 1.0);
    if (tp && tm)
        probe.g_slope_at_zero = (*tp - *tm) / (2.0 * ds);

    probe.mechanism_present = probe.curvature < 0.0 && probe.all_gaps_negative;
    if (probe.message.empty())
        probe.message = probe.mechanism_present ? "mechanism present" : "mechanism absent";
    return probe;
}

}  // namespace radial
