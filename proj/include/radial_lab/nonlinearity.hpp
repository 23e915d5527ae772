#pragma once

#include "radial_lab/certificates.hpp"
#include "radial_lab/cone.hpp"
#include "radial_lab/geometry.hpp"
#include "radial_lab/linear_operator.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace radial {

using ScalarFn = std::function<double(double)>;

enum class NonlinearityFamily { Power, ShiftedPower, Saturating, Spline, Custom, Truncated };

const char* to_string(NonlinearityFamily family);

/// Growth witness: f(s)/s >= (1 + delta)/a0 for every s >= M.
struct GrowthWitness {
    double M = 0.0;
    double delta = 0.0;
};

/// f, f' and F on [0, inf); all three vanish for s <= 0.
/// F is closed form when supplied, otherwise adaptive Simpson quadrature of f.
class Nonlinearity {
public:
    Nonlinearity(std::string name, NonlinearityFamily family, ScalarFn f, ScalarFn fprime, ScalarFn antiderivative = {});

    double f(double s) const { return s > 0.0 ? f_(s) : 0.0; }
    double fprime(double s) const { return s > 0.0 ? fprime_(s) : 0.0; }
    double F(double s) const;

    const std::string& name() const noexcept { return name_; }
    NonlinearityFamily family() const noexcept { return family_; }
    bool has_closed_antiderivative() const noexcept { return static_cast<bool>(antiderivative_); }

    const std::optional<GrowthWitness>& witness() const noexcept { return witness_; }
    Nonlinearity with_witness(GrowthWitness w) const;

private:
    std::string name_;
    NonlinearityFamily family_;
    ScalarFn f_;
    ScalarFn fprime_;
    ScalarFn antiderivative_;
    std::optional<GrowthWitness> witness_;
};

/// f(s) = s^p.
Nonlinearity power_nonlinearity(double p);
/// f(s) = (s + sigma)^p - sigma^p - p sigma^{p-1} s.
Nonlinearity shifted_power_nonlinearity(double p, double sigma);
/// f(s) = lambda* s^3 / (1 + s^2) = g(s) s with g increasing from 0 to lambda*.
Nonlinearity saturating_nonlinearity(double lambda_star);

struct HermiteKnot {
    double s = 0.0;
    double value = 0.0;
    double slope = 0.0;
};

/// Piecewise cubic Hermite through the knots (first knot at s = 0), continued
/// past the last knot by  y + m (s - s_m) + tail_curvature (s - s_m)^2.
Nonlinearity spline_nonlinearity(std::vector<HermiteKnot> knots, double tail_curvature, std::string name = "spline");

/// Monotone C1 spline with fixed points 0, 1 (tangent), 2 (crossing, f'(2) = 20)
/// and 3 (tangent), tail 3 + (s-3) + 2(s-3)^2.
Nonlinearity three_crossing_nonlinearity();

/// "power:20", "shifted-power:3,0.5", "saturating:2", "three-crossing",
/// "spline:s,value,slope;s,value,slope;...[|tail]". Throws ParameterError.
Nonlinearity parse_nonlinearity(const std::string& text);

/// Adaptive Simpson quadrature of fn on [a, b].
double adaptive_simpson(const ScalarFn& fn, double a, double b, double tol = 1e-12);

struct AssumptionEntry {
    std::string hypothesis;
    bool passed = false;
    double measured = 0.0;
    std::string detail;
};

struct AssumptionReport {
    std::vector<AssumptionEntry> entries;
    std::optional<GrowthWitness> witness;

    bool all_passed() const;
    const AssumptionEntry* find(const std::string& hypothesis) const;
};

/// Checks f(0) = 0 with f'(0) = 0, monotonicity, the growth witness search and
/// the accuracy of f' against centered differences.
AssumptionReport validate(const Nonlinearity& spec, double a0);

enum class RootKind { Crossing, Tangency };

struct FixedPoint {
    double s = 0.0;
    RootKind kind = RootKind::Crossing;
    double slope = 0.0;
};

struct WindowCandidate {
    ConeWindow window;
    double slope = 0.0;
};

struct FixedPointReport {
    std::vector<FixedPoint> roots;
    /// Windows around every positive root with f'(u0) above the threshold.
    std::vector<WindowCandidate> windows;
    bool has_window = false;
    std::string message;

    /// The window whose u_zero is closest to target; nullptr when none.
    const WindowCandidate* closest(double target) const;
};

/// Roots of s - f(s) on [0, s_max] from 10^4 samples, bisection on sign
/// changes and golden-section search on touching minima.
FixedPointReport fixed_points(const Nonlinearity& spec, double s_max, double slope_threshold, double tol = 1e-10);

struct WindowCheck {
    double max_fixed_point_residual = 0.0;
    bool below_ok = false;
    bool above_ok = false;
    bool ordered = false;
    bool valid = false;
    std::string message;
};

/// Sampled check of the window invariants.
WindowCheck validate_window(const ConeWindow& window, const Nonlinearity& spec, int samples = 2000);

struct AprioriBounds {
    double lambda_bar = 0.0;
    double K1 = 0.0;
    double W11_bound = 0.0;
    double embed_C = 0.0;
    double K_inf = 0.0;
    double K2 = 0.0;
    double k2 = 0.0;
    double sigma = 0.0;
    double M = 0.0;
    double delta = 0.0;
    double a1 = 0.0;
    double sup_abs_b = 0.0;
};

/// Explicit admissible constants for the a priori estimates.
/// Throws ValidationError if any is nonfinite or nonpositive.
AprioriBounds compute_bounds(const Nonlinearity& spec, GrowthWitness witness, int dimension, const WeightSpec& a,
                             const DriftSpec& b);

enum class TruncationCase { Tangency, Patch };

struct TruncationOptions {
    double p_user = 3.0;
    double s0_factor = 1.5;
    /// Overrides s0 = s0_factor * max(K_inf, M) when set.
    std::optional<double> s0;
};

/// f on [0, s0], a C1 patch on (s0, s1) in the strict case, then
/// y1 + m (s - s1) + (s - s1)^p.
class TruncatedNonlinearity {
public:
    TruncatedNonlinearity(Nonlinearity base, double a0, GrowthWitness witness, double s0, double p);
    /// No truncation: f itself, with s0 = s1 = +inf.
    explicit TruncatedNonlinearity(Nonlinearity base);

    const Nonlinearity& base() const noexcept { return base_; }
    const Nonlinearity& modified() const noexcept { return modified_; }

    double f(double s) const { return modified_.f(s); }
    double fprime(double s) const { return modified_.fprime(s); }
    double F(double s) const { return modified_.F(s); }

    double s0() const noexcept { return s0_; }
    double s1() const noexcept { return s1_; }
    double p() const noexcept { return p_; }
    TruncationCase truncation_case() const noexcept { return case_; }
    /// Slope of the line (1 + delta) s / a0.
    double line_slope() const noexcept { return line_slope_; }
    /// Sampled check that the patch stays nondecreasing and above the line.
    bool patch_feasible() const noexcept { return patch_feasible_; }

private:
    Nonlinearity base_;
    Nonlinearity modified_;
    double s0_ = 0.0;
    double s1_ = 0.0;
    double p_ = 0.0;
    double line_slope_ = 0.0;
    TruncationCase case_ = TruncationCase::Tangency;
    bool patch_feasible_ = true;
};

struct TruncationResult {
    TruncatedNonlinearity truncated;
    AprioriBounds bounds;
};

/// Constant chain, s0 and the subcritical exponent for the given grid dimension.
TruncationResult truncate(const Nonlinearity& spec, GrowthWitness witness, const RadialGrid& grid, const WeightSpec& a,
                          const DriftSpec& b, const TruncationOptions& options = {});

/// Exponent rule: min(p_user, (N+2)/(N-2) - 0.1) for N >= 3, p_user for N = 2.
double subcritical_exponent(int dimension, double p_user);

struct SolveReport;

/// Upper bounds on L1, Linf and H1 norms, and the H1 lower bound for
/// nontrivial mu-family solutions.
CertificateSet apriori(const AprioriBounds& bounds, const SolveReport& report);

}  // namespace radial
