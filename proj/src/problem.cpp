#include "radial_lab/problem.hpp"

#include "radial_lab/errors.hpp"

#include <algorithm>
#include <cmath>

namespace radial {

Problem::Problem(GridPtr grid, WeightSpec a, DriftSpec b, TruncatedNonlinearity f)
    : grid_(grid), a_(std::move(a)), b_(std::move(b)), f_(std::move(f)), op_(assemble(grid, b_)),
      weight_cert_(validate_weight(a_))
{
    if (!weight_cert_.valid)
        throw HypothesisError("weight a: " + weight_cert_.message);
    a_nodes_.reserve(grid_->size());
    for (double r : grid_->nodes())
        a_nodes_.push_back(a_(r));
}

RadialFunction Problem::source(const RadialFunction& u, double mu, double lambda) const
{
    std::vector<double> w(u.size());
    for (std::size_t i = 0; i < w.size(); ++i)
        w[i] = mu * a_nodes_[i] * f_.f(u[i]) + lambda;
    return RadialFunction(grid_, std::move(w));
}

RadialFunction Problem::apply_T(const RadialFunction& u, double mu, double lambda) const
{
    return solve_T(op_, source(u, mu, lambda));
}

RadialFunction Problem::residual(const RadialFunction& u, double mu, double lambda) const
{
    return op_.apply(u) - source(u, mu, lambda);
}

double Problem::residual_inf(const RadialFunction& u, double mu, double lambda) const
{
    return radial::residual_inf(op_, u, source(u, mu, lambda));
}

}  // namespace radial
