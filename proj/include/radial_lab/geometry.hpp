#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace radial {

/// Uniform radial grid on [0,1] for radial functions on the unit ball of R^N.
///
/// Node i sits at r_i = i/n. Quadrature weight q_i is the measure of the
/// control volume around node i, i.e. the integral of omega_N r^{N-1} over
/// [r_{i-1/2}, r_{i+1/2}] clipped to [0,1]. The weights are nonnegative, sum
/// to |B| exactly (up to rounding) and integrate smooth radial functions with
/// O(n^-2) error. The center weight is omega_N (h/2)^N / N.
class RadialGrid {
public:
    RadialGrid(int dimension, int intervals);

    int dimension() const noexcept { return dimension_; }
    int intervals() const noexcept { return intervals_; }
    std::size_t size() const noexcept { return nodes_.size(); }
    double spacing() const noexcept { return 1.0 / intervals_; }

    /// Area of the unit sphere S^{N-1}.
    double sphere_area() const noexcept { return sphere_area_; }
    /// Volume of the unit ball, omega_N / N.
    double ball_volume() const noexcept { return sphere_area_ / dimension_; }

    std::span<const double> nodes() const noexcept { return nodes_; }
    std::span<const double> weights() const noexcept { return weights_; }
    double node(std::size_t i) const { return nodes_[i]; }
    double weight(std::size_t i) const { return weights_[i]; }

    /// Surface area of the sphere of radius r_{i+1/2} (faces between nodes).
    double face_area(std::size_t i) const { return face_areas_[i]; }

private:
    int dimension_;
    int intervals_;
    double sphere_area_;
    std::vector<double> nodes_;
    std::vector<double> weights_;
    std::vector<double> face_areas_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

/// Throws ParameterError for N < 2 or n < 8.
GridPtr build_grid(int dimension, int intervals);

/// Area of the unit sphere in R^N.
double unit_sphere_area(int dimension);

/// Nodal values of a radial function on a shared grid.
class RadialFunction {
public:
    RadialFunction() = default;
    RadialFunction(GridPtr grid, std::vector<double> values);

    static RadialFunction constant(GridPtr grid, double c);
    static RadialFunction sample(GridPtr grid, const std::function<double(double)>& fn);

    const GridPtr& grid_ptr() const noexcept { return grid_; }
    const RadialGrid& grid() const { return *grid_; }
    std::size_t size() const noexcept { return values_.size(); }

    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }

    double front() const { return values_.front(); }
    double back() const { return values_.back(); }

    RadialFunction& operator+=(const RadialFunction& other);
    RadialFunction& operator-=(const RadialFunction& other);
    RadialFunction& operator*=(double s);

    friend RadialFunction operator+(RadialFunction lhs, const RadialFunction& rhs) { return lhs += rhs; }
    friend RadialFunction operator-(RadialFunction lhs, const RadialFunction& rhs) { return lhs -= rhs; }
    friend RadialFunction operator*(double s, RadialFunction u) { return u *= s; }
    friend RadialFunction operator*(RadialFunction u, double s) { return u *= s; }

    /// Pointwise map, same grid.
    RadialFunction map(const std::function<double(double)>& fn) const;

private:
    void require_same_grid(const RadialFunction& other) const;

    GridPtr grid_;
    std::vector<double> values_;
};

/// (1-t) a + t b.
RadialFunction lerp(const RadialFunction& a, const RadialFunction& b, double t);

enum class NormKind { L1, L2, Linf, H1, W11 };

/// Quadrature sum  sum_i q_i u_i  approximating the integral over B.
double integrate(const RadialFunction& u);

/// Weighted inner product  sum_i q_i u_i v_i.
double l2_inner(const RadialFunction& u, const RadialFunction& v);

/// Norms on B; the gradient part of H1 and W11 uses radial_derivative.
double norm(const RadialFunction& u, NormKind kind);

/// Nodal derivative: centered in the interior, second-order one-sided at r=0 and r=1.
RadialFunction radial_derivative(const RadialFunction& u);

}  // namespace radial
