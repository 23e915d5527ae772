#pragma once

#include "radial_lab/geometry.hpp"

#include <optional>
#include <random>
#include <span>
#include <vector>

namespace radial {

/// Upper end of a window: either a finite fixed point or unbounded.
class UpperBound {
public:
    static UpperBound unbounded() { return UpperBound(); }
    static UpperBound at(double value) { return UpperBound(value); }

    bool is_finite() const noexcept { return value_.has_value(); }
    /// Only meaningful when is_finite().
    double value() const { return *value_; }
    /// value() or +inf.
    double value_or_infinity() const noexcept;

private:
    UpperBound() = default;
    explicit UpperBound(double v) : value_(v) {}
    std::optional<double> value_;
};

/// Consecutive fixed points u_minus < u_zero < u_plus of the (truncated)
/// nonlinearity; the window set is { u in cone : u_minus <= u <= u_plus }.
struct ConeWindow {
    double u_minus = 0.0;
    double u_zero = 0.0;
    UpperBound u_plus = UpperBound::unbounded();
};

struct ConeReport {
    bool in_cone = false;
    double min_value = 0.0;
    /// Largest u_i - u_{i+1}, clipped at 0.
    double max_monotonicity_violation = 0.0;
    /// Set only when a window was supplied.
    std::optional<bool> in_window;
    /// Largest distance outside [u_minus, u_plus], when a window was supplied.
    double max_window_violation = 0.0;
};

inline constexpr double kCertificateConeTolerance = 1e-10;

ConeReport check_cone(const RadialFunction& u, const std::optional<ConeWindow>& window = std::nullopt,
                      double tol = kCertificateConeTolerance);

/// Weighted least-squares nondecreasing fit (pool adjacent violators).
/// Returns the input unchanged, bit for bit, when it is already nondecreasing.
std::vector<double> isotonic_regression(std::span<const double> values, std::span<const double> weights);

/// Weighted-L2(B) projection onto nondecreasing functions, then clamp into
/// [u_minus, u_plus]. The result passes check_cone with tol = 0.
RadialFunction project_to_window(const RadialFunction& u, const ConeWindow& window);

/// Random element of the cone: cumulative sum of sparse nonnegative
/// increments, smoothed by a random-width moving average, scaled so the
/// maximum is at most max_value and shifted by a random nonnegative offset.
RadialFunction random_cone_function(const GridPtr& grid, std::mt19937_64& rng, double max_value = 1.0);

/// Random element of the window set: a random cone function mapped affinely
/// into [u_minus, min(u_plus, u_minus + span)].
RadialFunction random_window_function(const GridPtr& grid, const ConeWindow& window, std::mt19937_64& rng,
                                      double span = 2.0);

}  // namespace radial
