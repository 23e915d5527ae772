#include "radial_lab/linear_operator.hpp"

#include "radial_lab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace radial {

DriftSpec::DriftSpec(RadialCoefficient b, std::string label) : b_(std::move(b)), label_(std::move(label)) {}

DriftSpec DriftSpec::zero()
{
    DriftSpec d([](double) { return 0.0; }, "0");
    d.is_zero_ = true;
    return d;
}

DriftCertificate validate_drift(const DriftSpec& drift, int dimension, int samples)
{
    DriftCertificate cert;
    cert.max_b = -std::numeric_limits<double>::infinity();
    cert.min_margin = std::numeric_limits<double>::infinity();
    double worst_sign_r = 0.0;
    for (int k = 0; k <= samples; ++k) {
        const double r = static_cast<double>(k) / samples;
        const double b = drift(r);
        if (b > cert.max_b) {
            cert.max_b = b;
            worst_sign_r = r;
        }
        cert.sup_abs_b = std::max(cert.sup_abs_b, std::abs(b));
    }
    for (int k = 0; k < samples; ++k) {
        const double r = (k + 0.5) / samples;
        const double step = std::min({1e-5, 0.5 * r, 0.5 * (1.0 - r)});
        const double d_br = (drift(r + step) * (r + step) - drift(r - step) * (r - step)) / (2.0 * step);
        const double margin = d_br + 1.0 + (dimension - 1.0) / (r * r);
        if (margin < cert.min_margin) {
            cert.min_margin = margin;
            cert.worst_radius = r;
        }
    }

    std::ostringstream msg;
    if (cert.max_b > 0.0) {
        msg << "drift is positive at r = " << worst_sign_r << " (b = " << cert.max_b << ")";
        cert.worst_radius = worst_sign_r;
    } else if (!(cert.min_margin > kDriftStrictness)) {
        msg << "d/dr(b r) > -1 - (N-1)/r^2 fails at r = " << cert.worst_radius
            << " (margin " << cert.min_margin << ")";
    } else {
        cert.valid = true;
        msg << "ok";
    }
    cert.message = msg.str();
    return cert;
}

WeightSpec::WeightSpec(RadialCoefficient a, std::string label) : a_(std::move(a)), label_(std::move(label)) {}

WeightSpec WeightSpec::constant(double value)
{
    std::ostringstream os;
    os << value;
    WeightSpec w([value](double) { return value; }, os.str());
    w.is_constant_ = true;
    return w;
}

WeightCertificate validate_weight(const WeightSpec& weight, int samples)
{
    WeightCertificate cert;
    cert.a0 = weight.a0();
    cert.a1 = weight.a1();
    double prev = cert.a0;
    double lo = cert.a0;
    double hi = cert.a0;
    for (int k = 1; k <= samples; ++k) {
        const double a = weight(static_cast<double>(k) / samples);
        cert.max_decrease = std::max(cert.max_decrease, prev - a);
        lo = std::min(lo, a);
        hi = std::max(hi, a);
        prev = a;
    }
    cert.nonconstant = hi - lo > 1e-12 * std::max(1.0, std::abs(hi));
    if (!(cert.a0 > 0.0))
        cert.message = "a(0) must be positive";
    else if (cert.max_decrease > 0.0)
        cert.message = "a must be nondecreasing";
    else {
        cert.valid = true;
        cert.message = "ok";
    }
    return cert;
}

DiscreteOperator::DiscreteOperator(GridPtr grid, const DriftSpec& drift)
    : grid_(std::move(grid)), matrix_(grid_->size()), symmetric_(drift.is_zero())
{
    drift_cert_ = validate_drift(drift, grid_->dimension(), 10 * grid_->intervals());
    if (!drift_cert_.valid)
        throw HypothesisError("drift hypothesis violated: " + drift_cert_.message);

    const auto& g = *grid_;
    const std::size_t n = g.size() - 1;
    const double h = g.spacing();
    for (std::size_t i = 0; i <= n; ++i) {
        const double q = g.weight(i);
        const double left = i > 0 ? g.face_area(i - 1) / h : 0.0;
        const double right = i < n ? g.face_area(i) / h : 0.0;
        // r = 0 and r = 1 carry no drift: x.grad v vanishes at the center and
        // v'(1) = 0 on the boundary.
        const double advect = (i > 0 && i < n && !symmetric_) ? q * drift(g.node(i)) * g.node(i) / (2.0 * h) : 0.0;
        matrix_.diag[i] = left + right + q;
        if (i > 0)
            matrix_.lower[i] = -left - advect;
        if (i < n)
            matrix_.upper[i] = -right + advect;
    }
}

RadialFunction DiscreteOperator::apply(const RadialFunction& v) const
{
    auto av = matrix_.apply(v.values());
    for (std::size_t i = 0; i < av.size(); ++i)
        av[i] /= grid_->weight(i);
    return RadialFunction(grid_, std::move(av));
}

double DiscreteOperator::energy_inner(std::span<const double> x, std::span<const double> y) const
{
    const auto ay = matrix_.apply(y);
    double s = 0.0;
    for (std::size_t i = 0; i < ay.size(); ++i)
        s += x[i] * ay[i];
    return s;
}

DiscreteOperator assemble(GridPtr grid, const DriftSpec& drift)
{
    return DiscreteOperator(std::move(grid), drift);
}

RadialFunction solve_T(const DiscreteOperator& op, const RadialFunction& w)
{
    if (w.size() != op.grid().size())
        throw ParameterError("solve_T: right-hand side lives on a different grid");
    std::vector<double> rhs(w.size());
    for (std::size_t i = 0; i < rhs.size(); ++i)
        rhs[i] = op.grid().weight(i) * w[i];
    return RadialFunction(op.grid_ptr(), solve_thomas(op.weighted_matrix(), rhs));
}

double residual_inf(const DiscreteOperator& op, const RadialFunction& v, const RadialFunction& w)
{
    return norm(op.apply(v) - w, NormKind::Linf);
}

namespace {

Tridiagonal strong_form(const DiscreteOperator& op)
{
    Tridiagonal m = op.weighted_matrix();
    for (std::size_t i = 0; i < m.size(); ++i) {
        const double q = op.grid().weight(i);
        m.lower[i] /= q;
        m.diag[i] /= q;
        m.upper[i] /= q;
    }
    return m;
}

Tridiagonal transposed(const Tridiagonal& m)
{
    Tridiagonal t(m.size());
    t.diag = m.diag;
    for (std::size_t i = 0; i + 1 < m.size(); ++i) {
        t.upper[i] = m.lower[i + 1];
        t.lower[i + 1] = m.upper[i];
    }
    return t;
}

}  // namespace

double condition_estimate(const DiscreteOperator& op)
{
    const Tridiagonal l = strong_form(op);
    const std::size_t n = l.size();

    double l_norm = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        l_norm = std::max(l_norm, std::abs(l.lower[i]) + std::abs(l.diag[i]) + std::abs(l.upper[i]));

    // Hager: ||L^{-1}||_inf = ||L^{-T}||_1, estimated with solves against L^T and L.
    const Tridiagonal lt = transposed(l);
    std::vector<double> x(n, 1.0 / static_cast<double>(n));
    double est = 0.0;
    for (int it = 0; it < 5; ++it) {
        const auto y = solve_pivoted(lt, x);
        double y1 = 0.0;
        for (double v : y)
            y1 += std::abs(v);
        std::vector<double> sgn(n);
        for (std::size_t i = 0; i < n; ++i)
            sgn[i] = y[i] >= 0.0 ? 1.0 : -1.0;
        const auto z = solve_pivoted(l, sgn);
        std::size_t j = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (std::abs(z[i]) > std::abs(z[j]))
                j = i;
        double zx = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            zx += z[i] * x[i];
        if (y1 <= est || std::abs(z[j]) <= zx) {
            est = std::max(est, y1);
            break;
        }
        est = y1;
        std::fill(x.begin(), x.end(), 0.0);
        x[j] = 1.0;
    }
    return l_norm * est;
}

std::vector<EigenPair> radial_eigs(const GridPtr& grid, int k_max)
{
    if (k_max < 1 || k_max > 6)
        throw ParameterError("radial_eigs: k_max must be in [1, 6]");
    if (k_max > grid->intervals() / 4)
        throw ParameterError("radial_eigs: grid too coarse to resolve " + std::to_string(k_max) + " modes");

    const DiscreteOperator op(grid, DriftSpec::zero());
    const auto& a = op.weighted_matrix();
    const std::size_t n = a.size();
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i)
        sq[i] = std::sqrt(grid->weight(i));

    // Symmetric form diag(q)^{-1/2} A diag(q)^{-1/2}.
    std::vector<double> d(n);
    std::vector<double> e(n - 1);
    for (std::size_t i = 0; i < n; ++i)
        d[i] = a.diag[i] / grid->weight(i);
    for (std::size_t i = 0; i + 1 < n; ++i)
        e[i] = a.upper[i] / (sq[i] * sq[i + 1]);

    const auto lambdas = smallest_eigenvalues(d, e, k_max);
    std::vector<EigenPair> out;
    out.reserve(lambdas.size());
    for (std::size_t k = 0; k < lambdas.size(); ++k) {
        const auto y = inverse_iteration(d, e, lambdas[k]);
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i)
            v[i] = y[i] / sq[i];
        if (v.back() < 0.0)
            for (double& x : v)
                x = -x;
        RadialFunction vf(grid, std::move(v));
        vf *= 1.0 / norm(vf, NormKind::L2);
        out.push_back(EigenPair{static_cast<int>(k) + 1, lambdas[k], std::move(vf)});
    }
    return out;
}

}  // namespace radial
