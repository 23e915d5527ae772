#pragma once

#include "radial_lab/certificates.hpp"
#include "radial_lab/cone.hpp"
#include "radial_lab/linear_operator.hpp"
#include "radial_lab/solver.hpp"
#include "radial_lab/variational.hpp"

#include <string>
#include <vector>

namespace radial {

struct AdmissibleSets {
    enum class Branch { Bounded, Unbounded };

    ConeWindow window;
    double tau = 0.0;
    double alpha = 0.0;
    Branch branch = Branch::Unbounded;
    double I_minus = 0.0;
    /// I(u_plus 1); NaN on the unbounded branch.
    double I_plus = 0.0;
    double I_zero = 0.0;

    /// u in the window set, I(u) < I(u_minus) + alpha/2, ||u - u_minus||_inf < tau.
    bool in_lower(const RadialFunction& u, const EnergyFunctional& functional) const;
    /// Bounded: same with u_plus. Unbounded: u in the window set, u >= u_zero, I(u) <= I(u_minus).
    bool in_upper(const RadialFunction& u, const EnergyFunctional& functional) const;
    /// Lower bound that every minimax level must reach.
    double barrier() const;
};

const char* to_string(AdmissibleSets::Branch branch);

/// tau = half the smaller gap; alpha from constant shifts by tau at both ends,
/// floored at 1e-8. Throws ParameterError for a degenerate window and
/// ValidationError when the barrier estimate is not positive.
AdmissibleSets admissible_sets(const ConeWindow& window, const EnergyFunctional& functional);

struct Path {
    std::vector<RadialFunction> points;
    std::vector<double> t;
    /// Eigen-direction amplitude used to build the path.
    double s = 0.0;
};

struct InitialPathResult {
    Path path;
    bool found = false;
    double t_minus = 0.0;
    double t_plus = 0.0;
    /// Max of I over a 4x refined t-grid.
    double max_energy = 0.0;
    std::string message;
};

/// gamma_s(t) = t (u0 + s v) on [t_minus, t_plus], projected into the window set.
Path make_path(const ConeWindow& window, const RadialFunction& v, double t_minus, double t_plus, double s, int points);

/// Halves s from 0.1 until the endpoints lie in U- / U+ and the path maximum
/// is below I(u0); gives up below s = 1e-6. P must be odd and at least 17.
InitialPathResult initial_path(const ConeWindow& window, const EigenPair& direction, const AdmissibleSets& sets,
                               const EnergyFunctional& functional, int points);

struct MinimaxOptions {
    int max_rounds = 4000;
    int burst_steps = 2;
    double step = 0.05;
    double max_step = 0.1;
    /// Per-step displacement cap as a fraction of the mean H1 point spacing.
    double move_fraction = 0.1;
    double gradient_tol = 1e-6;
    /// Stop when c changes less than this (relative) over `stall_rounds` rounds.
    double stall_tol = 1e-13;
    int stall_rounds = 50;
    bool polish = true;
    SolveOptions polish_options{};
};

struct MinimaxReport {
    double c = 0.0;
    RadialFunction u_star;
    /// ||grad I||_H1 at the argmax before polishing.
    double gradient_norm = 0.0;
    std::vector<double> energy_profile;
    std::vector<double> c_history;
    int rounds = 0;
    bool degenerate = false;
    bool polished = false;
    SolveReport polish;
    double I_star = 0.0;
    double I_zero = 0.0;
    int intersections = 0;
    Path final_path;
    CertificateSet certificates;
    std::string message;
};

/// String method: short projected gradient bursts for the interior points,
/// equal H1-arclength reparametrization, Newton polish of the argmax.
/// Throws InvariantViolation if an endpoint leaves U- or U+.
MinimaxReport minimax(const Path& path, const EnergyFunctional& functional, const AdmissibleSets& sets,
                      const MinimaxOptions& options = {});

/// Sign changes of u - c along the grid (zeros skipped).
int sign_changes(const RadialFunction& u, double c);

/// (1) I(u*) < I(u0) - 1e-8, (2) ||u* - u0||_inf > 1e-4, (3) u*(1) - u*(0) > 1e-4,
/// (4) at least one crossing of u0, (5) nondecreasing.
CertificateSet certify_nonconstant(const RadialFunction& u_star, const ConeWindow& window,
                                   const EnergyFunctional& functional);

}  // namespace radial
