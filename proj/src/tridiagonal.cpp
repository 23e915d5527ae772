#include "radial_lab/tridiagonal.hpp"

#include "radial_lab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace radial {

std::vector<double> Tridiagonal::apply(std::span<const double> x) const
{
    const std::size_t n = size();
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = diag[i] * x[i];
        if (i > 0)
            s += lower[i] * x[i - 1];
        if (i + 1 < n)
            s += upper[i] * x[i + 1];
        y[i] = s;
    }
    return y;
}

std::vector<double> solve_thomas(const Tridiagonal& a, std::span<const double> rhs)
{
    const std::size_t n = a.size();
    if (rhs.size() != n)
        throw NumericError("tridiagonal solve: size mismatch");
    std::vector<double> c(n, 0.0);
    std::vector<double> x(n, 0.0);

    double pivot = a.diag[0];
    if (pivot == 0.0 || !std::isfinite(pivot))
        throw NumericError("tridiagonal solve: zero pivot at row 0");
    c[0] = n > 1 ? a.upper[0] / pivot : 0.0;
    x[0] = rhs[0] / pivot;
    for (std::size_t i = 1; i < n; ++i) {
        pivot = a.diag[i] - a.lower[i] * c[i - 1];
        if (pivot == 0.0 || !std::isfinite(pivot))
            throw NumericError("tridiagonal solve: zero pivot at row " + std::to_string(i));
        c[i] = i + 1 < n ? a.upper[i] / pivot : 0.0;
        x[i] = (rhs[i] - a.lower[i] * x[i - 1]) / pivot;
    }
    for (std::size_t i = n - 1; i-- > 0;)
        x[i] -= c[i] * x[i + 1];
    return x;
}

std::vector<double> solve_pivoted(const Tridiagonal& a, std::span<const double> rhs)
{
    const std::size_t n = a.size();
    if (rhs.size() != n)
        throw NumericError("tridiagonal solve: size mismatch");
    // Row i of U holds d[i], u1[i], u2[i] on columns i, i+1, i+2.
    std::vector<double> d(a.diag);
    std::vector<double> u1(n, 0.0);
    std::vector<double> u2(n, 0.0);
    std::vector<double> sub(n, 0.0);
    std::vector<double> b(rhs.begin(), rhs.end());
    for (std::size_t i = 0; i + 1 < n; ++i)
        u1[i] = a.upper[i];
    for (std::size_t i = 1; i < n; ++i)
        sub[i] = a.lower[i];

    for (std::size_t i = 0; i + 1 < n; ++i) {
        // Candidate rows: i (d[i], u1[i], u2[i]) and i+1 (sub[i+1], d[i+1], u1[i+1]).
        if (std::abs(sub[i + 1]) > std::abs(d[i])) {
            std::swap(d[i], sub[i + 1]);
            std::swap(u1[i], d[i + 1]);
            std::swap(u2[i], u1[i + 1]);
            std::swap(b[i], b[i + 1]);
        }
        if (d[i] == 0.0)
            throw NumericError("pivoted tridiagonal solve: singular at row " + std::to_string(i));
        const double m = sub[i + 1] / d[i];
        sub[i + 1] = 0.0;
        d[i + 1] -= m * u1[i];
        u1[i + 1] -= m * u2[i];
        b[i + 1] -= m * b[i];
    }
    if (d[n - 1] == 0.0)
        throw NumericError("pivoted tridiagonal solve: singular at last row");

    std::vector<double> x(n);
    for (std::size_t k = n; k-- > 0;) {
        double s = b[k];
        if (k + 1 < n)
            s -= u1[k] * x[k + 1];
        if (k + 2 < n)
            s -= u2[k] * x[k + 2];
        x[k] = s / d[k];
    }
    for (double v : x)
        if (!std::isfinite(v))
            throw NumericError("pivoted tridiagonal solve: non-finite solution");
    return x;
}

int sturm_count(std::span<const double> d, std::span<const double> e, double x)
{
    int count = 0;
    double q = 1.0;
    const double tiny = std::numeric_limits<double>::min();
    for (std::size_t i = 0; i < d.size(); ++i) {
        const double off = i > 0 ? e[i - 1] * e[i - 1] / q : 0.0;
        q = d[i] - x - off;
        if (q == 0.0)
            q = -tiny;
        if (q < 0.0)
            ++count;
    }
    return count;
}

std::vector<double> smallest_eigenvalues(std::span<const double> d, std::span<const double> e, int k)
{
    // Gershgorin enclosure.
    double lo = std::numeric_limits<double>::max();
    double hi = std::numeric_limits<double>::lowest();
    for (std::size_t i = 0; i < d.size(); ++i) {
        double r = 0.0;
        if (i > 0)
            r += std::abs(e[i - 1]);
        if (i + 1 < d.size())
            r += std::abs(e[i]);
        lo = std::min(lo, d[i] - r);
        hi = std::max(hi, d[i] + r);
    }

    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) {
        double a = lo;
        double b = hi;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (a + b);
            if (mid <= a || mid >= b)
                break;
            if (sturm_count(d, e, mid) > j)
                b = mid;
            else
                a = mid;
        }
        out.push_back(0.5 * (a + b));
    }
    return out;
}

std::vector<double> inverse_iteration(std::span<const double> d, std::span<const double> e, double eigenvalue)
{
    const std::size_t n = d.size();
    Tridiagonal shifted(n);
    const double scale = std::max(1.0, std::abs(eigenvalue));
    const double shift = eigenvalue + 64.0 * std::numeric_limits<double>::epsilon() * scale;
    for (std::size_t i = 0; i < n; ++i) {
        shifted.diag[i] = d[i] - shift;
        if (i + 1 < n) {
            shifted.upper[i] = e[i];
            shifted.lower[i + 1] = e[i];
        }
    }

    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = 1.0 + 0.01 * std::sin(1.0 + 3.0 * static_cast<double>(i));
    for (int it = 0; it < 6; ++it) {
        x = solve_pivoted(shifted, x);
        double nrm = 0.0;
        for (double v : x)
            nrm += v * v;
        nrm = std::sqrt(nrm);
        if (nrm == 0.0 || !std::isfinite(nrm))
            throw NumericError("inverse iteration collapsed");
        for (double& v : x)
            v /= nrm;
    }
    return x;
}

}  // namespace radial
