#pragma once

#include "radial_lab/cone.hpp"
#include "radial_lab/linear_operator.hpp"
#include "radial_lab/problem.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace radial {

/// I(u) = 1/2 u^T A u - sum_i q_i a_i F~(u_i) with the H1 inner product
/// <x, y> = x^T A y of the discrete operator. Requires b == 0.
/// Holds a reference: the problem must outlive the functional.
class EnergyFunctional {
public:
    explicit EnergyFunctional(const Problem& problem);

    const Problem& problem() const noexcept { return *problem_; }

    double energy(const RadialFunction& u) const;
    /// u - T(a f~(u)), the H1 gradient.
    RadialFunction gradient(const RadialFunction& u) const;
    double inner(const RadialFunction& x, const RadialFunction& y) const;
    double h1_norm(const RadialFunction& x) const;
    /// I(t 1) = t^2 |B| / 2 - F~(t) sum_i q_i a_i.
    double constant_energy(double t) const;

private:
    const Problem* problem_;
    double weighted_mass_ = 0.0;
};

/// Smooth cutoff: 1 on |s - c| <= eps, 0 on |s - c| >= 2 eps, quintic smoothstep between.
double cutoff(double s, double level, double epsilon);

enum class ProjectionMode { On, Off };

struct FlowParams {
    double level = 0.0;
    double epsilon = 1e-2;
    double delta_grad = 1e-2;
    double step = 1e-3;
    /// Defaults to 2 epsilon / delta_grad.
    std::optional<double> max_duration;
    ProjectionMode projection = ProjectionMode::On;
    /// Unit-speed (normalized gradient) flow; the raw gradient otherwise.
    bool normalized = true;
    double gradient_stop = 1e-8;
    /// Upper bound on accepted Euler steps.
    int max_steps = 100000;
};

struct FlowResult {
    RadialFunction u;
    double time = 0.0;
    int steps = 0;
    /// |I(u) - c| > 2 eps at the start: returned unchanged.
    bool untouched = false;
    bool stopped_on_gradient = false;
    bool stalled = false;
    /// Energy after each accepted step, starting with I(u).
    std::vector<double> energies;
    /// Largest violation of the window set before projection, over all steps.
    double max_window_drift = 0.0;
    std::string message;
};

/// Explicit Euler for  d/dt u = -chi(I(u)) grad I(u) / ||grad I(u)||.
FlowResult flow(const EnergyFunctional& functional, const RadialFunction& u, const FlowParams& params,
                const ConeWindow& window);

/// Distance of u from the window set: max of monotonicity violation and
/// distance outside [u_minus, u_plus].
double window_violation(const RadialFunction& u, const ConeWindow& window);

struct TangentProbe {
    double eps1 = 0.0;
    double eps2 = 0.0;
    /// (s, g(s)).
    std::vector<std::pair<double, double>> g_samples;
    /// I(g(s)(u0 + s v)) - I(u0), aligned with g_samples.
    std::vector<double> gaps;
    double g_at_zero = 0.0;
    double g_slope_at_zero = 0.0;
    /// I''(u0)(v, v).
    double curvature = 0.0;
    bool newton_ok = true;
    bool all_gaps_negative = false;
    bool mechanism_present = false;
    std::string message;
};

/// Samples the curve s -> g(s)(u0 + s v) where g solves
/// psi(s, t) = I'(t(u0 + s v))(u0 + s v) = 0 near t = 1. eps1 starts at
/// 0.1 u0 (or the given value) and halves up to 12 times until every gap is
/// negative.
TangentProbe tangent_probe(const EnergyFunctional& functional, const ConeWindow& window, const EigenPair& v2,
                           int samples = 21, std::optional<double> eps1 = std::nullopt);

}  // namespace radial
