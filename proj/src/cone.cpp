#include "radial_lab/cone.hpp"

#include "radial_lab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace radial {

double UpperBound::value_or_infinity() const noexcept
{
    return value_ ? *value_ : std::numeric_limits<double>::infinity();
}

ConeReport check_cone(const RadialFunction& u, const std::optional<ConeWindow>& window, double tol)
{
    if (tol < 0.0)
        throw ParameterError("cone tolerance must be nonnegative");
    ConeReport rep;
    const auto v = u.values();
    rep.min_value = *std::min_element(v.begin(), v.end());
    for (std::size_t i = 0; i + 1 < v.size(); ++i)
        rep.max_monotonicity_violation = std::max(rep.max_monotonicity_violation, v[i] - v[i + 1]);
    rep.in_cone = rep.min_value >= -tol && rep.max_monotonicity_violation <= tol;

    if (window) {
        const double hi = window->u_plus.value_or_infinity();
        double worst = 0.0;
        for (double x : v) {
            worst = std::max(worst, window->u_minus - x);
            worst = std::max(worst, x - hi);
        }
        rep.max_window_violation = worst;
        rep.in_window = worst <= tol;
    }
    return rep;
}

std::vector<double> isotonic_regression(std::span<const double> values, std::span<const double> weights)
{
    if (values.size() != weights.size())
        throw ParameterError("isotonic regression: values and weights differ in length");
    if (std::is_sorted(values.begin(), values.end()))
        return {values.begin(), values.end()};

    // Blocks on a stack: weighted mean, total weight, first index.
    struct Block {
        double mean;
        double weight;
        std::size_t start;
    };
    std::vector<Block> blocks;
    blocks.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        Block b{values[i], weights[i], i};
        while (!blocks.empty() && blocks.back().mean > b.mean) {
            const Block& top = blocks.back();
            const double w = top.weight + b.weight;
            // Zero-weight pools take the plain average so the mean stays defined.
            const double mean = w > 0.0 ? (top.mean * top.weight + b.mean * b.weight) / w
                                        : 0.5 * (top.mean + b.mean);
            b = Block{mean, w, top.start};
            blocks.pop_back();
        }
        blocks.push_back(b);
    }

    std::vector<double> out(values.size());
    for (std::size_t k = 0; k < blocks.size(); ++k) {
        const std::size_t end = k + 1 < blocks.size() ? blocks[k + 1].start : values.size();
        std::fill(out.begin() + static_cast<std::ptrdiff_t>(blocks[k].start),
                  out.begin() + static_cast<std::ptrdiff_t>(end), blocks[k].mean);
    }
    // Rounding in the pooled means can leave a 1-ulp inversion between blocks.
    for (std::size_t i = 1; i < out.size(); ++i)
        out[i] = std::max(out[i], out[i - 1]);
    return out;
}

RadialFunction project_to_window(const RadialFunction& u, const ConeWindow& window)
{
    auto fitted = isotonic_regression(u.values(), u.grid().weights());
    const double hi = window.u_plus.value_or_infinity();
    for (double& x : fitted)
        x = std::clamp(x, window.u_minus, hi);
    return RadialFunction(u.grid_ptr(), std::move(fitted));
}

}  // namespace radial

namespace radial {

RadialFunction random_cone_function(const GridPtr& grid, std::mt19937_64& rng, double max_value)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::size_t m = grid->size();
    const double gamma = 0.5 + 7.5 * unit(rng);
    const double density = 0.02 + 0.98 * unit(rng);
    std::vector<double> inc(m, 0.0);
    for (std::size_t i = 1; i < m; ++i)
        if (unit(rng) < density)
            inc[i] = std::pow(unit(rng), gamma);

    const auto width = static_cast<std::size_t>(unit(rng) * static_cast<double>(m) / 8.0);
    std::vector<double> smooth(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t lo = i >= width ? i - width : 0;
        const std::size_t hi = std::min(m - 1, i + width);
        double acc = 0.0;
        for (std::size_t j = lo; j <= hi; ++j)
            acc += inc[j];
        smooth[i] = acc / static_cast<double>(hi - lo + 1);
    }

    std::vector<double> values(m, 0.0);
    for (std::size_t i = 1; i < m; ++i)
        values[i] = values[i - 1] + smooth[i];
    const double offset = unit(rng) < 0.2 ? 0.0 : unit(rng);
    const double top = values.back();
    const double rise = unit(rng);
    for (auto& v : values) {
        const double shape = top > 0.0 ? v / top : 0.0;
        v = max_value * (offset * (1.0 - rise) + rise * shape) / (1.0 + 1e-12);
        v = std::min(v, max_value);
    }
    return RadialFunction(grid, std::move(values));
}

RadialFunction random_window_function(const GridPtr& grid, const ConeWindow& window, std::mt19937_64& rng, double span)
{
    const double lo = window.u_minus;
    const double hi = std::min(window.u_plus.value_or_infinity(), lo + span);
    auto u = random_cone_function(grid, rng, 1.0);
    for (auto& v : u.values())
        v = std::clamp(lo + (hi - lo) * v, lo, hi);
    return u;
}

}  // namespace radial
