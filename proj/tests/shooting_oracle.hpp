#pragma once

// Fine-grid shooting for  u'' + (N-1)/r u' = u - a(r) f(u),  u'(0) = u'(1) = 0,
// used as an independent reference for the cone solver. RK4 from a series
// start at r = 1e-6, bisection on u(0) for u'(1) = 0.

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

namespace oracle {

struct ShootingResult {
    double u0 = 0.0;
    /// u at r = i / n, i = 0..n.
    std::vector<double> u;
    double end_slope = 0.0;
};

inline std::pair<std::vector<double>, double> integrate(int N, const std::function<double(double)>& a,
                                                        const std::function<double(double)>& f, double u0, int n,
                                                        int substeps)
{
    const double r0 = 1e-6;
    const double c = (u0 - a(0.0) * f(u0)) / N;
    double r = r0;
    double y = u0 + 0.5 * c * r0 * r0;
    double z = c * r0;
    auto rhs = [&](double rr, double yy, double zz) { return yy - a(rr) * f(yy) - (N - 1) / rr * zz; };
    std::vector<double> out(static_cast<std::size_t>(n) + 1);
    out[0] = u0;
    for (int i = 1; i <= n; ++i) {
        const double target = static_cast<double>(i) / n;
        const double h = (target - r) / substeps;
        for (int k = 0; k < substeps; ++k) {
            const double k1y = z, k1z = rhs(r, y, z);
            const double k2y = z + 0.5 * h * k1z, k2z = rhs(r + 0.5 * h, y + 0.5 * h * k1y, z + 0.5 * h * k1z);
            const double k3y = z + 0.5 * h * k2z, k3z = rhs(r + 0.5 * h, y + 0.5 * h * k2y, z + 0.5 * h * k2z);
            const double k4y = z + h * k3z, k4z = rhs(r + h, y + h * k3y, z + h * k3z);
            y += h / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y);
            z += h / 6.0 * (k1z + 2 * k2z + 2 * k3z + k4z);
            r += h;
            if (!std::isfinite(y))
                return {out, std::copysign(1e300, z)};
        }
        out[static_cast<std::size_t>(i)] = y;
    }
    return {out, z};
}

/// Searches u(0) in [lo, hi]; the end slope must change sign on the bracket.
inline ShootingResult shoot(int N, const std::function<double(double)>& a, const std::function<double(double)>& f,
                            double lo, double hi, int n, int substeps = 40)
{
    double slo = integrate(N, a, f, lo, n, substeps).second;
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double sm = integrate(N, a, f, mid, n, substeps).second;
        if ((sm > 0.0) == (slo > 0.0)) {
            lo = mid;
            slo = sm;
        } else {
            hi = mid;
        }
    }
    ShootingResult res;
    res.u0 = 0.5 * (lo + hi);
    auto [u, slope] = integrate(N, a, f, res.u0, n, substeps);
    res.u = std::move(u);
    res.end_slope = slope;
    return res;
}

}  // namespace oracle
