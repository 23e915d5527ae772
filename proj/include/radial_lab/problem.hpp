#pragma once

#include "radial_lab/geometry.hpp"
#include "radial_lab/linear_operator.hpp"
#include "radial_lab/nonlinearity.hpp"

#include <span>
#include <vector>

namespace radial {

/// Grid, coefficients and nonlinearity of
///   -Lap u + b(r) x.grad u + u = mu a(r) f(u) + lambda.
/// Validates the weight (throws HypothesisError) and assembles the operator.
class Problem {
public:
    Problem(GridPtr grid, WeightSpec a, DriftSpec b, TruncatedNonlinearity f);

    const GridPtr& grid_ptr() const noexcept { return grid_; }
    const RadialGrid& grid() const { return *grid_; }
    const DiscreteOperator& op() const noexcept { return op_; }
    const WeightSpec& weight() const noexcept { return a_; }
    const DriftSpec& drift() const noexcept { return b_; }
    const TruncatedNonlinearity& nonlinearity() const noexcept { return f_; }
    const WeightCertificate& weight_certificate() const noexcept { return weight_cert_; }
    /// a(r_i).
    std::span<const double> a_nodes() const noexcept { return a_nodes_; }

    /// mu a f(u) + lambda.
    RadialFunction source(const RadialFunction& u, double mu = 1.0, double lambda = 0.0) const;
    /// T applied to the source: the v with L v = mu a f(u) + lambda.
    RadialFunction apply_T(const RadialFunction& u, double mu = 1.0, double lambda = 0.0) const;
    /// L u - mu a f(u) - lambda, nodal.
    RadialFunction residual(const RadialFunction& u, double mu = 1.0, double lambda = 0.0) const;
    double residual_inf(const RadialFunction& u, double mu = 1.0, double lambda = 0.0) const;

private:
    GridPtr grid_;
    WeightSpec a_;
    DriftSpec b_;
    TruncatedNonlinearity f_;
    DiscreteOperator op_;
    WeightCertificate weight_cert_;
    std::vector<double> a_nodes_;
};

}  // namespace radial
