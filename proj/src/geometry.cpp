#include "radial_lab/geometry.hpp"

#include "radial_lab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace radial {

double unit_sphere_area(int dimension)
{
    const double half = 0.5 * dimension;
    return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

RadialGrid::RadialGrid(int dimension, int intervals)
    : dimension_(dimension), intervals_(intervals), sphere_area_(unit_sphere_area(dimension))
{
    if (dimension < 2)
        throw ParameterError("grid dimension must be >= 2, got " + std::to_string(dimension));
    if (intervals < 8)
        throw ParameterError("grid needs at least 8 intervals, got " + std::to_string(intervals));

    const auto n = static_cast<std::size_t>(intervals);
    const double h = 1.0 / intervals;
    const double n_dim = dimension;

    nodes_.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i)
        nodes_[i] = static_cast<double>(i) / intervals;
    nodes_.back() = 1.0;

    // Ball volume inside radius rho, written as omega_N rho^N / N.
    auto inner_volume = [&](double rho) { return sphere_area_ * std::pow(rho, n_dim) / n_dim; };

    face_areas_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double rho = (static_cast<double>(i) + 0.5) * h;
        face_areas_[i] = sphere_area_ * std::pow(rho, n_dim - 1.0);
    }

    weights_.resize(n + 1);
    weights_[0] = inner_volume(0.5 * h);
    for (std::size_t i = 1; i < n; ++i) {
        const double lo = (static_cast<double>(i) - 0.5) * h;
        const double hi = (static_cast<double>(i) + 0.5) * h;
        weights_[i] = inner_volume(hi) - inner_volume(lo);
    }
    weights_[n] = inner_volume(1.0) - inner_volume(1.0 - 0.5 * h);
}

GridPtr build_grid(int dimension, int intervals)
{
    return std::make_shared<const RadialGrid>(dimension, intervals);
}

RadialFunction::RadialFunction(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values))
{
    if (!grid_)
        throw ParameterError("radial function needs a grid");
    if (values_.size() != grid_->size())
        throw ParameterError("radial function has " + std::to_string(values_.size()) +
                             " values, grid has " + std::to_string(grid_->size()) + " nodes");
    for (double v : values_)
        if (!std::isfinite(v))
            throw ParameterError("radial function values must be finite");
}

RadialFunction RadialFunction::constant(GridPtr grid, double c)
{
    const auto n = grid->size();
    return RadialFunction(std::move(grid), std::vector<double>(n, c));
}

RadialFunction RadialFunction::sample(GridPtr grid, const std::function<double(double)>& fn)
{
    std::vector<double> v(grid->size());
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = fn(grid->node(i));
    return RadialFunction(std::move(grid), std::move(v));
}

void RadialFunction::require_same_grid(const RadialFunction& other) const
{
    if (grid_ != other.grid_ && (grid_->dimension() != other.grid_->dimension() ||
                                 grid_->intervals() != other.grid_->intervals()))
        throw ParameterError("radial functions live on different grids");
}

RadialFunction& RadialFunction::operator+=(const RadialFunction& other)
{
    require_same_grid(other);
    for (std::size_t i = 0; i < values_.size(); ++i)
        values_[i] += other.values_[i];
    return *this;
}

RadialFunction& RadialFunction::operator-=(const RadialFunction& other)
{
    require_same_grid(other);
    for (std::size_t i = 0; i < values_.size(); ++i)
        values_[i] -= other.values_[i];
    return *this;
}

RadialFunction& RadialFunction::operator*=(double s)
{
    for (double& v : values_)
        v *= s;
    return *this;
}

RadialFunction RadialFunction::map(const std::function<double(double)>& fn) const
{
    std::vector<double> out(values_.size());
    std::transform(values_.begin(), values_.end(), out.begin(), fn);
    return RadialFunction(grid_, std::move(out));
}

RadialFunction lerp(const RadialFunction& a, const RadialFunction& b, double t)
{
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = (1.0 - t) * a[i] + t * b[i];
    return RadialFunction(a.grid_ptr(), std::move(out));
}

double integrate(const RadialFunction& u)
{
    const auto q = u.grid().weights();
    double sum = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
        sum += q[i] * u[i];
    return sum;
}

double l2_inner(const RadialFunction& u, const RadialFunction& v)
{
    const auto q = u.grid().weights();
    double sum = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
        sum += q[i] * u[i] * v[i];
    return sum;
}

RadialFunction radial_derivative(const RadialFunction& u)
{
    const std::size_t n = u.size() - 1;
    const double h = u.grid().spacing();
    std::vector<double> d(u.size());
    d[0] = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h);
    for (std::size_t i = 1; i < n; ++i)
        d[i] = (u[i + 1] - u[i - 1]) / (2.0 * h);
    d[n] = (3.0 * u[n] - 4.0 * u[n - 1] + u[n - 2]) / (2.0 * h);
    return RadialFunction(u.grid_ptr(), std::move(d));
}

double norm(const RadialFunction& u, NormKind kind)
{
    const auto q = u.grid().weights();
    auto weighted_abs = [&](const RadialFunction& g) {
        double s = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i)
            s += q[i] * std::abs(g[i]);
        return s;
    };
    auto weighted_sq = [&](const RadialFunction& g) {
        double s = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i)
            s += q[i] * g[i] * g[i];
        return s;
    };

    switch (kind) {
    case NormKind::L1:
        return weighted_abs(u);
    case NormKind::L2:
        return std::sqrt(weighted_sq(u));
    case NormKind::Linf: {
        double m = 0.0;
        for (double v : u.values())
            m = std::max(m, std::abs(v));
        return m;
    }
    case NormKind::H1:
        return std::sqrt(weighted_sq(u) + weighted_sq(radial_derivative(u)));
    case NormKind::W11:
        return weighted_abs(u) + weighted_abs(radial_derivative(u));
    }
    return 0.0;
}

}  // namespace radial
