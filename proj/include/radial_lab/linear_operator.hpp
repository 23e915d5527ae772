#pragma once

#include "radial_lab/geometry.hpp"
#include "radial_lab/tridiagonal.hpp"

#include <functional>
#include <string>
#include <vector>

namespace radial {

using RadialCoefficient = std::function<double(double)>;

/// Drift coefficient b(r) of  -Lap u + b(|x|) x.grad u + u.
class DriftSpec {
public:
    DriftSpec(RadialCoefficient b, std::string label);
    /// b == 0.
    static DriftSpec zero();

    double operator()(double r) const { return b_(r); }
    bool is_zero() const noexcept { return is_zero_; }
    const std::string& label() const noexcept { return label_; }

private:
    RadialCoefficient b_;
    std::string label_;
    bool is_zero_ = false;
};

/// Sampled validity of the drift: b <= 0 and d/dr(b r) > -1 - (N-1)/r^2.
struct DriftCertificate {
    double max_b = 0.0;
    /// min over samples of d/dr(b r) + 1 + (N-1)/r^2.
    double min_margin = 0.0;
    double worst_radius = 0.0;
    double sup_abs_b = 0.0;
    bool valid = false;
    std::string message;
};

/// Margins below this count as violations of the strict inequality.
inline constexpr double kDriftStrictness = 1e-8;

DriftCertificate validate_drift(const DriftSpec& drift, int dimension, int samples);

/// Weight a(r) on the nonlinearity: nondecreasing with a(0) > 0.
class WeightSpec {
public:
    WeightSpec(RadialCoefficient a, std::string label);
    static WeightSpec constant(double value);

    double operator()(double r) const { return a_(r); }
    double a0() const { return a_(0.0); }
    double a1() const { return a_(1.0); }
    const std::string& label() const noexcept { return label_; }
    bool is_constant() const noexcept { return is_constant_; }

private:
    RadialCoefficient a_;
    std::string label_;
    bool is_constant_ = false;
};

struct WeightCertificate {
    double a0 = 0.0;
    double a1 = 0.0;
    double max_decrease = 0.0;
    bool nonconstant = false;
    bool valid = false;
    std::string message;
};

WeightCertificate validate_weight(const WeightSpec& weight, int samples = 4096);

/// Flux-form discretization of  L = -Lap + b(r) r d/dr + Id  with zero flux at
/// r = 0 and r = 1, stored in the q-weighted form A = diag(q) L.
/// For b == 0, A is symmetric positive definite and the stiffness part is
/// sum_i face_i (v_{i+1} - v_i)^2 / h.
class DiscreteOperator {
public:
    DiscreteOperator(GridPtr grid, const DriftSpec& drift);

    const RadialGrid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const noexcept { return grid_; }
    const Tridiagonal& weighted_matrix() const noexcept { return matrix_; }
    bool symmetric() const noexcept { return symmetric_; }
    const DriftCertificate& drift_certificate() const noexcept { return drift_cert_; }

    /// A v (weighted form).
    std::vector<double> apply_weighted(std::span<const double> v) const { return matrix_.apply(v); }
    /// L v (strong form, nodal).
    RadialFunction apply(const RadialFunction& v) const;

    /// x^T A y, the discrete H1 inner product when b == 0.
    double energy_inner(std::span<const double> x, std::span<const double> y) const;

private:
    GridPtr grid_;
    Tridiagonal matrix_;
    bool symmetric_;
    DriftCertificate drift_cert_;
};

/// Validates the drift on 10 n samples; throws HypothesisError naming the
/// failing radius.
DiscreteOperator assemble(GridPtr grid, const DriftSpec& drift);

/// Solves L v = w.
RadialFunction solve_T(const DiscreteOperator& op, const RadialFunction& w);

/// ||L v - w||_inf in the strong form.
double residual_inf(const DiscreteOperator& op, const RadialFunction& v, const RadialFunction& w);

/// ||L||_inf * (Hager estimate of ||L^{-1}||_inf).
double condition_estimate(const DiscreteOperator& op);

struct EigenPair {
    int index = 0;
    double eigenvalue = 0.0;
    /// ||v||_{L2(B)} = 1, v(1) > 0.
    RadialFunction v;
};

/// Smallest k_max radial Neumann eigenpairs of -Lap + Id (generalized problem
/// A v = lambda diag(q) v), 1 <= k_max <= 6.
std::vector<EigenPair> radial_eigs(const GridPtr& grid, int k_max);

}  // namespace radial
