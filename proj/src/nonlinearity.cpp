#include "radial_lab/nonlinearity.hpp"

#include "radial_lab/errors.hpp"
#include "radial_lab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>

namespace radial {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double simpson_step(const ScalarFn& fn, double a, double fa, double b, double fb, double m, double fm, double whole,
                    double tol, int depth)
{
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = fn(lm);
    const double frm = fn(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double diff = left + right - whole;
    if (depth <= 0 || std::abs(diff) <= 15.0 * tol)
        return left + right + diff / 15.0;
    return simpson_step(fn, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           simpson_step(fn, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

struct Hermite {
    double x0, x1, y0, y1, m0, m1;

    double value(double x) const
    {
        const double h = x1 - x0;
        const double t = (x - x0) / h;
        const double t2 = t * t;
        const double t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * h * m0 + (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * h * m1;
    }
    double slope(double x) const
    {
        const double h = x1 - x0;
        const double t = (x - x0) / h;
        const double t2 = t * t;
        return ((6 * t2 - 6 * t) * y0 + (-6 * t2 + 6 * t) * y1) / h + (3 * t2 - 4 * t + 1) * m0 + (3 * t2 - 2 * t) * m1;
    }
    /// Integral from x0 to x; Simpson is exact for cubics.
    double integral(double x) const
    {
        const double mid = 0.5 * (x0 + x);
        return (x - x0) / 6.0 * (value(x0) + 4.0 * value(mid) + value(x));
    }
};

double bisect(const ScalarFn& g, double lo, double hi, int iterations = 200)
{
    double glo = g(lo);
    for (int k = 0; k < iterations; ++k) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        const double gm = g(mid);
        if ((gm < 0.0) == (glo < 0.0)) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double golden_min(const ScalarFn& g, double lo, double hi)
{
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - invphi * (hi - lo);
    double d = lo + invphi * (hi - lo);
    double gc = g(c);
    double gd = g(d);
    for (int k = 0; k < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++k) {
        if (gc < gd) {
            hi = d;
            d = c;
            gd = gc;
            c = hi - invphi * (hi - lo);
            gc = g(c);
        } else {
            lo = c;
            c = d;
            gc = gd;
            d = lo + invphi * (hi - lo);
            gd = g(d);
        }
    }
    return gc < gd ? c : d;
}

std::vector<double> split(const std::string& text, char sep)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) {
        if (item.empty())
            continue;
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw ParameterError("not a number: '" + item + "'");
        }
        while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used])))
            ++used;
        if (used != item.size())
            throw ParameterError("not a number: '" + item + "'");
        out.push_back(v);
    }
    return out;
}

std::vector<HermiteKnot> parse_knots(const std::string& text)
{
    std::vector<HermiteKnot> knots;
    std::stringstream ss(text);
    std::string triple;
    while (std::getline(ss, triple, ';')) {
        if (triple.empty())
            continue;
        auto v = split(triple, ',');
        if (v.size() != 3)
            throw ParameterError("spline knot needs s,value,slope: '" + triple + "'");
        knots.push_back({v[0], v[1], v[2]});
    }
    return knots;
}

Nonlinearity spline_from_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ParameterError("cannot open spline file " + path);
    std::vector<HermiteKnot> knots;
    double tail = 0.0;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        if (line.rfind("tail,", 0) == 0) {
            tail = split(line.substr(5), ',').at(0);
            continue;
        }
        if (line.find_first_not_of("0123456789+-.eE, \t\r") != std::string::npos)
            continue;  // header
        auto v = split(line, ',');
        if (v.size() != 3)
            throw ParameterError("spline file row needs s,value,slope: '" + line + "'");
        knots.push_back({v[0], v[1], v[2]});
    }
    return spline_nonlinearity(std::move(knots), tail, "spline:@" + path);
}

}  // namespace

const char* to_string(NonlinearityFamily family)
{
    switch (family) {
    case NonlinearityFamily::Power:
        return "power";
    case NonlinearityFamily::ShiftedPower:
        return "shifted-power";
    case NonlinearityFamily::Saturating:
        return "saturating";
    case NonlinearityFamily::Spline:
        return "spline";
    case NonlinearityFamily::Custom:
        return "custom";
    case NonlinearityFamily::Truncated:
        return "truncated";
    }
    return "?";
}

double adaptive_simpson(const ScalarFn& fn, double a, double b, double tol)
{
    if (a == b)
        return 0.0;
    const double fa = fn(a);
    const double fb = fn(b);
    const double m = 0.5 * (a + b);
    const double fm = fn(m);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double scale = std::max({1.0, std::abs(whole)});
    return simpson_step(fn, a, fa, b, fb, m, fm, whole, tol * scale, 40);
}

Nonlinearity::Nonlinearity(std::string name, NonlinearityFamily family, ScalarFn f, ScalarFn fprime,
                           ScalarFn antiderivative)
    : name_(std::move(name)), family_(family), f_(std::move(f)), fprime_(std::move(fprime)),
      antiderivative_(std::move(antiderivative))
{
    if (!f_ || !fprime_)
        throw ParameterError("nonlinearity '" + name_ + "' needs f and f'");
}

double Nonlinearity::F(double s) const
{
    if (s <= 0.0)
        return 0.0;
    if (antiderivative_)
        return antiderivative_(s);
    return adaptive_simpson([this](double t) { return f(t); }, 0.0, s);
}

Nonlinearity Nonlinearity::with_witness(GrowthWitness w) const
{
    Nonlinearity copy = *this;
    copy.witness_ = w;
    return copy;
}

Nonlinearity power_nonlinearity(double p)
{
    if (!(p > 0.0))
        throw ParameterError("power exponent must be positive");
    std::ostringstream name;
    name << "power:" << p;
    return Nonlinearity(
        name.str(), NonlinearityFamily::Power, [p](double s) { return std::pow(s, p); },
        [p](double s) { return p * std::pow(s, p - 1.0); }, [p](double s) { return std::pow(s, p + 1.0) / (p + 1.0); });
}

Nonlinearity shifted_power_nonlinearity(double p, double sigma)
{
    if (!(p > 1.0) || !(sigma > 0.0))
        throw ParameterError("shifted power needs p > 1 and sigma > 0");
    std::ostringstream name;
    name << "shifted-power:" << p << ',' << sigma;
    const double sp = std::pow(sigma, p);
    const double sp1 = std::pow(sigma, p - 1.0);
    return Nonlinearity(
        name.str(), NonlinearityFamily::ShiftedPower,
        [=](double s) { return std::pow(s + sigma, p) - sp - p * sp1 * s; },
        [=](double s) { return p * (std::pow(s + sigma, p - 1.0) - sp1); },
        [=](double s) {
            return (std::pow(s + sigma, p + 1.0) - sp * sigma) / (p + 1.0) - sp * s - 0.5 * p * sp1 * s * s;
        });
}

Nonlinearity saturating_nonlinearity(double lambda_star)
{
    if (!(lambda_star > 0.0))
        throw ParameterError("saturating level must be positive");
    std::ostringstream name;
    name << "saturating:" << lambda_star;
    const double l = lambda_star;
    return Nonlinearity(
        name.str(), NonlinearityFamily::Saturating, [l](double s) { return l * s * s * s / (1.0 + s * s); },
        [l](double s) {
            const double d = 1.0 + s * s;
            return l * (s * s * s * s + 3.0 * s * s) / (d * d);
        },
        [l](double s) { return l * 0.5 * (s * s - std::log1p(s * s)); });
}

Nonlinearity spline_nonlinearity(std::vector<HermiteKnot> knots, double tail_curvature, std::string name)
{
    if (knots.size() < 2)
        throw ParameterError("spline needs at least two knots");
    if (knots.front().s != 0.0)
        throw ParameterError("spline must start at s = 0");
    for (std::size_t k = 1; k < knots.size(); ++k)
        if (!(knots[k].s > knots[k - 1].s))
            throw ParameterError("spline knots must be strictly increasing");
    if (tail_curvature < 0.0)
        throw ParameterError("spline tail curvature must be nonnegative");

    struct Data {
        std::vector<Hermite> pieces;
        std::vector<double> cumulative;  // integral up to the start of each piece
        double last_s, last_y, last_m, tail, total;
    };
    auto data = std::make_shared<Data>();
    for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
        const auto& a = knots[k];
        const auto& b = knots[k + 1];
        data->pieces.push_back({a.s, b.s, a.value, b.value, a.slope, b.slope});
    }
    double acc = 0.0;
    for (const auto& piece : data->pieces) {
        data->cumulative.push_back(acc);
        acc += piece.integral(piece.x1);
    }
    data->total = acc;
    data->last_s = knots.back().s;
    data->last_y = knots.back().value;
    data->last_m = knots.back().slope;
    data->tail = tail_curvature;

    auto locate = [data](double s) -> std::size_t {
        auto it = std::upper_bound(data->pieces.begin(), data->pieces.end(), s,
                                   [](double x, const Hermite& h) { return x < h.x1; });
        return static_cast<std::size_t>(it - data->pieces.begin());
    };
    auto f = [data, locate](double s) {
        if (s >= data->last_s) {
            const double t = s - data->last_s;
            return data->last_y + data->last_m * t + data->tail * t * t;
        }
        return data->pieces[locate(s)].value(s);
    };
    auto fp = [data, locate](double s) {
        if (s >= data->last_s)
            return data->last_m + 2.0 * data->tail * (s - data->last_s);
        return data->pieces[locate(s)].slope(s);
    };
    auto F = [data, locate](double s) {
        if (s >= data->last_s) {
            const double t = s - data->last_s;
            return data->total + data->last_y * t + 0.5 * data->last_m * t * t + data->tail * t * t * t / 3.0;
        }
        const std::size_t k = locate(s);
        return data->cumulative[k] + data->pieces[k].integral(s);
    };
    return Nonlinearity(std::move(name), NonlinearityFamily::Spline, f, fp, F);
}

Nonlinearity three_crossing_nonlinearity()
{
    // Extra knots keep every piece inside the Fritsch-Carlson monotone region.
    std::vector<HermiteKnot> knots{
        {0.0, 0.0, 0.0}, {1.0, 1.0, 1.0},  {1.2, 1.15, 0.5}, {1.9, 1.3, 0.3},
        {2.0, 2.0, 20.0}, {2.1, 2.7, 0.3}, {2.7, 2.85, 0.3}, {3.0, 3.0, 1.0},
    };
    return spline_nonlinearity(std::move(knots), 2.0, "three-crossing");
}

Nonlinearity parse_nonlinearity(const std::string& text)
{
    const auto colon = text.find(':');
    const std::string family = text.substr(0, colon);
    const std::string args = colon == std::string::npos ? std::string() : text.substr(colon + 1);
    auto numbers = [&](std::size_t expected) {
        auto v = split(args, ',');
        if (v.size() != expected)
            throw ParameterError("nonlinearity '" + text + "' expects " + std::to_string(expected) + " parameter(s)");
        return v;
    };
    if (family == "power")
        return power_nonlinearity(numbers(1)[0]);
    if (family == "shifted-power") {
        auto v = numbers(2);
        return shifted_power_nonlinearity(v[0], v[1]);
    }
    if (family == "saturating")
        return saturating_nonlinearity(numbers(1)[0]);
    if (family == "three-crossing") {
        if (!args.empty())
            throw ParameterError("three-crossing takes no parameters");
        return three_crossing_nonlinearity();
    }
    if (family == "spline") {
        if (!args.empty() && args[0] == '@')
            return spline_from_file(args.substr(1));
        const auto bar = args.find('|');
        const double tail = bar == std::string::npos ? 0.0 : split(args.substr(bar + 1), ',').at(0);
        return spline_nonlinearity(parse_knots(args.substr(0, bar)), tail, text);
    }
    throw ParameterError("unknown nonlinearity family '" + family + "'");
}

bool AssumptionReport::all_passed() const
{
    return std::all_of(entries.begin(), entries.end(), [](const AssumptionEntry& e) { return e.passed; });
}

const AssumptionEntry* AssumptionReport::find(const std::string& hypothesis) const
{
    auto it = std::find_if(entries.begin(), entries.end(),
                           [&](const AssumptionEntry& e) { return e.hypothesis == hypothesis; });
    return it == entries.end() ? nullptr : &*it;
}

AssumptionReport validate(const Nonlinearity& spec, double a0)
{
    if (!(a0 > 0.0))
        throw ParameterError("a0 must be positive");
    AssumptionReport report;

    {
        const double s = 1e-6;
        const double ratio = std::abs(spec.f(s) / s);
        const bool zero = spec.f(0.0) == 0.0;
        std::ostringstream detail;
        detail << "f(0) = " << spec.f(0.0) << ", |f(s)/s| at s = 1e-6 is " << ratio;
        report.entries.push_back({"vanishing_at_zero", zero && ratio <= 1e-3, ratio, detail.str()});
    }

    // Growth: a0 f(s)/s on a geometric grid; the top decade estimates the liminf.
    std::vector<double> grid;
    std::vector<double> ratio;
    for (int k = 0; k <= 900; ++k) {
        const double s = 1e-3 * std::pow(10.0, k / 100.0);
        const double v = a0 * spec.f(s) / s;
        if (!std::isfinite(v) || std::abs(spec.f(s)) > 1e300)
            break;
        grid.push_back(s);
        ratio.push_back(v);
    }
    double tail_ratio = kInf;
    for (std::size_t k = 0; k < grid.size(); ++k)
        if (grid[k] >= grid.back() / 10.0)
            tail_ratio = std::min(tail_ratio, ratio[k]);
    if (grid.size() < 2 || !(tail_ratio > 1.0 + 1e-9)) {
        std::ostringstream detail;
        detail << "a0 f(s)/s on the top sampled decade has minimum " << tail_ratio << ", not above 1";
        report.entries.push_back({"superlinear_growth", false, tail_ratio, detail.str()});
    } else {
        const double delta = std::min(0.5, 0.5 * (tail_ratio - 1.0));
        const double target = 1.0 + delta;
        std::ptrdiff_t last_bad = -1;
        for (std::size_t k = 0; k < grid.size(); ++k)
            if (ratio[k] < target)
                last_bad = static_cast<std::ptrdiff_t>(k);
        double M = grid.front();
        if (last_bad >= 0) {
            const auto k = static_cast<std::size_t>(last_bad);
            M = bisect([&](double s) { return a0 * spec.f(s) / s - target; }, grid[k], grid[k + 1]);
            // land on the admissible side of the bisection bracket
            while (a0 * spec.f(M) / M < target)
                M = std::nextafter(M, kInf);
        }
        const double top = 1e3 * std::max(1.0, M);
        double worst = kInf;
        for (int k = 0; k <= 20000; ++k) {
            const double s = M + (top - M) * k / 20000.0;
            const double v = a0 * spec.f(s) / s;
            if (!std::isfinite(v))
                break;
            worst = std::min(worst, v);
        }
        const bool ok = worst >= target * (1.0 - 1e-12);
        report.witness = GrowthWitness{M, delta};
        std::ostringstream detail;
        detail << "witness M = " << M << ", delta = " << delta << "; min a0 f(s)/s on [M, " << top << "] is " << worst;
        report.entries.push_back({"superlinear_growth", ok, worst, detail.str()});
    }

    const double s_hi = 1e3 * std::max(1.0, report.witness ? report.witness->M : 1.0);
    {
        double worst_drop = 0.0;
        double prev = spec.f(0.0);
        for (int k = 1; k <= 10000; ++k) {
            const double s = s_hi * k / 10000.0;
            const double v = spec.f(s);
            if (!std::isfinite(v))
                break;
            worst_drop = std::max(worst_drop, (prev - v) / std::max(1.0, std::abs(prev)));
            prev = v;
        }
        double prev_fine = spec.f(0.0);
        for (int k = 1; k <= 10000; ++k) {
            const double s = std::min(10.0, s_hi) * k / 10000.0;
            const double v = spec.f(s);
            worst_drop = std::max(worst_drop, (prev_fine - v) / std::max(1.0, std::abs(prev_fine)));
            prev_fine = v;
        }
        std::ostringstream detail;
        detail << "largest relative decrease between consecutive samples on [0, " << s_hi << "] is " << worst_drop;
        report.entries.push_back({"nondecreasing", worst_drop <= 1e-14, worst_drop, detail.str()});
    }

    {
        double worst = 0.0;
        double where = 0.0;
        for (int k = 0; k < 400; ++k) {
            const double s = 1e-2 * std::pow(10.0, (k + 0.37) / 400.0 * (std::log10(s_hi) + 2.0));
            if (s > s_hi)
                break;
            const double h = 1e-6 * s;
            const double fd = (spec.f(s + h) - spec.f(s - h)) / (2.0 * h);
            const double fp = spec.fprime(s);
            if (!std::isfinite(fd) || !std::isfinite(fp))
                break;
            const double rel = std::abs(fp - fd) / std::max({std::abs(fp), std::abs(fd), 1e-300});
            if (rel > worst) {
                worst = rel;
                where = s;
            }
        }
        std::ostringstream detail;
        detail << "max relative mismatch of f' against centered differences is " << worst << " at s = " << where;
        report.entries.push_back({"derivative_accuracy", worst <= 1e-6, worst, detail.str()});
    }
    return report;
}

const WindowCandidate* FixedPointReport::closest(double target) const
{
    const WindowCandidate* best = nullptr;
    for (const auto& w : windows)
        if (!best || std::abs(w.window.u_zero - target) < std::abs(best->window.u_zero - target))
            best = &w;
    return best;
}

FixedPointReport fixed_points(const Nonlinearity& spec, double s_max, double slope_threshold, double tol)
{
    if (!(s_max > 0.0))
        throw ParameterError("s_max must be positive");
    constexpr int kSamples = 10000;
    auto g = [&](double s) { return s - spec.f(s); };
    std::vector<double> s(kSamples + 1);
    std::vector<double> gv(kSamples + 1);
    for (int k = 0; k <= kSamples; ++k) {
        s[k] = s_max * k / kSamples;
        gv[k] = g(s[k]);
    }

    std::vector<double> roots;
    for (int k = 0; k <= kSamples; ++k)
        if (gv[k] == 0.0)
            roots.push_back(s[k]);
    for (int k = 0; k < kSamples; ++k)
        if (gv[k] != 0.0 && gv[k + 1] != 0.0 && (gv[k] < 0.0) != (gv[k + 1] < 0.0))
            roots.push_back(bisect(g, s[k], s[k + 1]));
    for (int k = 1; k < kSamples; ++k) {
        const double a = gv[k - 1], b = gv[k], c = gv[k + 1];
        if (a == 0.0 || b == 0.0 || c == 0.0)
            continue;
        if ((a < 0.0) != (b < 0.0) || (b < 0.0) != (c < 0.0))
            continue;
        if (std::abs(b) > std::abs(a) || std::abs(b) > std::abs(c))
            continue;
        const double x = golden_min([&](double t) { return std::abs(g(t)); }, s[k - 1], s[k + 1]);
        if (std::abs(g(x)) <= tol * std::max(1.0, x))
            roots.push_back(x);
    }
    std::sort(roots.begin(), roots.end());
    std::vector<double> unique;
    for (double r : roots)
        if (unique.empty() || r - unique.back() > 1e-6 * std::max(1.0, r))
            unique.push_back(r);

    FixedPointReport report;
    for (double r : unique) {
        const double slope = spec.fprime(r);
        const RootKind kind = std::abs(slope - 1.0) <= 1e-6 ? RootKind::Tangency : RootKind::Crossing;
        report.roots.push_back({r, kind, slope});
    }
    for (std::size_t k = 0; k < report.roots.size(); ++k) {
        const auto& root = report.roots[k];
        if (root.s <= 0.0 || k == 0 || !(root.slope > slope_threshold))
            continue;
        WindowCandidate cand;
        cand.slope = root.slope;
        cand.window.u_minus = report.roots[k - 1].s;
        cand.window.u_zero = root.s;
        if (k + 1 < report.roots.size()) {
            cand.window.u_plus = UpperBound::at(report.roots[k + 1].s);
        } else {
            bool above = true;
            for (int j = 0; j <= kSamples; ++j)
                if (s[j] > root.s && !(gv[j] < 0.0))
                    above = false;
            if (!above)
                continue;
            cand.window.u_plus = UpperBound::unbounded();
        }
        report.windows.push_back(cand);
    }
    report.has_window = !report.windows.empty();
    std::ostringstream msg;
    msg << report.roots.size() << " fixed point(s) on [0, " << s_max << "]; " << report.windows.size()
        << " with f' > " << slope_threshold;
    if (!report.has_window)
        msg << "; no fixed point satisfies the slope condition";
    report.message = msg.str();
    return report;
}

WindowCheck validate_window(const ConeWindow& window, const Nonlinearity& spec, int samples)
{
    WindowCheck check;
    const double lo = window.u_minus;
    const double mid = window.u_zero;
    const double hi = window.u_plus.value_or_infinity();
    check.ordered = lo >= 0.0 && lo < mid && mid < hi;
    auto residual = [&](double u) { return std::abs(spec.f(u) - u) / std::max(1.0, u); };
    check.max_fixed_point_residual = std::max(residual(lo), residual(mid));
    if (window.u_plus.is_finite())
        check.max_fixed_point_residual = std::max(check.max_fixed_point_residual, residual(hi));

    check.below_ok = check.ordered;
    check.above_ok = check.ordered;
    if (check.ordered) {
        for (int j = 1; j <= samples; ++j) {
            const double s = lo + (mid - lo) * j / (samples + 1.0);
            if (!(s - spec.f(s) > 0.0))
                check.below_ok = false;
        }
        const double top = std::min(hi, mid + 10.0);
        for (int j = 1; j <= samples; ++j) {
            const double s = mid + (top - mid) * j / (samples + 1.0);
            if (!(s - spec.f(s) < 0.0))
                check.above_ok = false;
        }
    }
    check.valid = check.ordered && check.below_ok && check.above_ok && check.max_fixed_point_residual <= 1e-8;
    std::ostringstream msg;
    if (!check.ordered)
        msg << "window not ordered; ";
    if (!check.below_ok)
        msg << "s - f(s) not positive on (u_minus, u_zero); ";
    if (!check.above_ok)
        msg << "s - f(s) not negative above u_zero; ";
    if (check.max_fixed_point_residual > 1e-8)
        msg << "fixed point residual " << check.max_fixed_point_residual << "; ";
    check.message = check.valid ? "ok" : msg.str();
    return check;
}

AprioriBounds compute_bounds(const Nonlinearity& spec, GrowthWitness witness, int dimension, const WeightSpec& a,
                             const DriftSpec& b)
{
    if (dimension < 2)
        throw ParameterError("dimension must be at least 2");
    if (!(witness.delta > 0.0) || !std::isfinite(witness.delta) || !(witness.M > 0.0) || !std::isfinite(witness.M))
        throw ValidationError("growth witness needs M > 0 and delta > 0");

    const double omega = unit_sphere_area(dimension);
    const double volume = omega / dimension;
    AprioriBounds bounds;
    bounds.M = witness.M;
    bounds.delta = witness.delta;
    bounds.a1 = a.a1();
    for (int k = 0; k <= 4096; ++k)
        bounds.sup_abs_b = std::max(bounds.sup_abs_b, std::abs(b(k / 4096.0)));

    // lambda_bar: last sampled t with f(t) < t, refined by bisection.
    const double top = 1e3 * std::max(1.0, witness.M);
    auto below = [&](double t) { return spec.f(t) - t; };
    if (below(top) < 0.0)
        throw ValidationError("f(t) < t at the top of the scan; lambda_bar is not finite");
    double lambda_bar = 0.0;
    auto scan = [&](double hi, int count) {
        double last = -1.0;
        for (int k = count; k >= 1; --k) {
            const double t = hi * k / count;
            if (below(t) < 0.0) {
                last = t;
                break;
            }
        }
        return last;
    };
    const double fine_top = std::min(top, 10.0 * std::max(1.0, witness.M));
    double last_neg = scan(top, 100000);
    if (last_neg < 0.0 || last_neg <= fine_top) {
        const double fine = scan(fine_top, 100000);
        last_neg = std::max(last_neg, fine);
    }
    if (last_neg > 0.0) {
        const double step = (last_neg > fine_top ? top : fine_top) / 100000.0;
        lambda_bar = bisect(below, last_neg, std::min(last_neg + step, top));
    }
    bounds.lambda_bar = lambda_bar;

    bounds.K1 = witness.M * volume * (1.0 + 1.0 / witness.delta);
    bounds.W11_bound = 2.0 * bounds.K1;
    bounds.embed_C = std::pow(2.0, dimension) / omega;
    bounds.K_inf = bounds.embed_C * bounds.W11_bound;
    bounds.K2 = std::sqrt(bounds.a1 * spec.f(bounds.K_inf) * bounds.K_inf * volume +
                          bounds.sup_abs_b * bounds.K1 * bounds.K_inf + bounds.lambda_bar * bounds.K1);

    // sigma: first t where f(t) exceeds t / (2 a(1)).
    auto over = [&](double t) { return spec.f(t) - t / (2.0 * bounds.a1); };
    double sigma = top;
    double prev = 1e-12;
    if (over(prev) > 0.0) {
        sigma = 0.0;
    } else {
        for (int k = 1; k <= 15000; ++k) {
            const double t = 1e-12 * std::pow(10.0, k / 1000.0);
            if (t > top)
                break;
            if (over(t) > 0.0) {
                sigma = bisect(over, prev, t);
                break;
            }
            prev = t;
        }
    }
    bounds.sigma = sigma;
    bounds.k2 = sigma / (bounds.embed_C * std::sqrt(2.0 * volume));

    const double all[] = {bounds.K1, bounds.K_inf, bounds.K2, bounds.k2, bounds.embed_C};
    for (double v : all)
        if (!std::isfinite(v) || !(v > 0.0))
            throw ValidationError("a priori constant is not finite and positive");
    if (!(bounds.K_inf >= witness.M))
        throw ValidationError("K_inf below the growth witness M");
    return bounds;
}

double subcritical_exponent(int dimension, double p_user)
{
    if (!(p_user > 1.0))
        throw ParameterError("truncation exponent must exceed 1");
    if (dimension <= 2)
        return p_user;
    const double critical = (dimension + 2.0) / (dimension - 2.0);
    return std::min(p_user, critical - 0.1);
}

TruncatedNonlinearity::TruncatedNonlinearity(Nonlinearity base)
    : base_(base), modified_(std::move(base)), s0_(kInf), s1_(kInf), p_(0.0)
{
}

TruncatedNonlinearity::TruncatedNonlinearity(Nonlinearity base, double a0, GrowthWitness witness, double s0, double p)
    : base_(base), modified_(base), s0_(s0), p_(p)
{
    if (!(a0 > 0.0) || !(s0 > 0.0) || !(p > 1.0) || !(witness.delta > 0.0))
        throw ParameterError("truncation needs a0 > 0, s0 > 0, p > 1 and delta > 0");
    line_slope_ = (1.0 + witness.delta) / a0;
    const double f0 = base.f(s0);
    const double d0 = base.fprime(s0);
    const double line0 = line_slope_ * s0;
    if (f0 < line0 * (1.0 - 1e-12))
        throw ValidationError("f(s0) lies below the growth line; s0 must exceed the witness M");

    Hermite patch{s0, s0, f0, f0, d0, d0};
    double y1 = f0;
    double m1 = d0;
    if (std::abs(f0 - line0) <= 1e-10 * std::max(1.0, f0)) {
        case_ = TruncationCase::Tangency;
        s1_ = s0;
    } else {
        case_ = TruncationCase::Patch;
        const double eps = 0.1 * s0;
        s1_ = s0 + eps;
        m1 = line_slope_;
        y1 = std::max({f0 + 0.5 * d0 * eps, line_slope_ * s1_, f0 + 0.5 * line_slope_ * eps});
        patch = Hermite{s0, s1_, f0, y1, d0, m1};
        for (int k = 0; k <= 1000; ++k) {
            const double s = s0 + eps * k / 1000.0;
            if (patch.slope(s) < -1e-12 * std::max(1.0, d0) || patch.value(s) < line_slope_ * s * (1.0 - 1e-12))
                patch_feasible_ = false;
        }
    }

    const double F0 = base.F(s0);
    const double F1 = F0 + (case_ == TruncationCase::Patch ? patch.integral(s1_) : 0.0);
    const double s1 = s1_;
    const bool has_patch = case_ == TruncationCase::Patch;
    Nonlinearity b = base;
    auto f = [=](double s) {
        if (s <= s0)
            return b.f(s);
        if (has_patch && s < s1)
            return patch.value(s);
        const double t = s - s1;
        return y1 + m1 * t + std::pow(t, p);
    };
    auto fp = [=](double s) {
        if (s <= s0)
            return b.fprime(s);
        if (has_patch && s < s1)
            return patch.slope(s);
        const double t = s - s1;
        return m1 + p * std::pow(t, p - 1.0);
    };
    auto F = [=](double s) {
        if (s <= s0)
            return b.F(s);
        if (has_patch && s < s1)
            return F0 + patch.integral(s);
        const double t = s - s1;
        return F1 + y1 * t + 0.5 * m1 * t * t + std::pow(t, p + 1.0) / (p + 1.0);
    };
    modified_ = Nonlinearity(base.name() + " (truncated)", NonlinearityFamily::Truncated, f, fp, F);
}

TruncationResult truncate(const Nonlinearity& spec, GrowthWitness witness, const RadialGrid& grid, const WeightSpec& a,
                          const DriftSpec& b, const TruncationOptions& options)
{
    const AprioriBounds bounds = compute_bounds(spec, witness, grid.dimension(), a, b);
    const double floor = std::max(bounds.K_inf, witness.M);
    const double s0 = options.s0 ? *options.s0 : options.s0_factor * floor;
    if (!(s0 > floor))
        throw ParameterError("s0 must exceed max(K_inf, M)");
    const double p = subcritical_exponent(grid.dimension(), options.p_user);
    return TruncationResult{TruncatedNonlinearity(spec, a.a0(), witness, s0, p), bounds};
}

CertificateSet apriori(const AprioriBounds& bounds, const SolveReport& report)
{
    CertificateSet set;
    if (!report.converged) {
        set.add(Certificate::flag("apriori.converged", false, "solution did not converge"));
        return set;
    }
    const auto& u = report.solution;
    const double l1 = norm(u, NormKind::L1);
    const double linf = norm(u, NormKind::Linf);
    const double h1 = norm(u, NormKind::H1);
    set.add(Certificate::at_most("apriori.L1<=K1", l1, bounds.K1));
    set.add(Certificate::at_most("apriori.Linf<=K_inf", linf, bounds.K_inf));
    set.add(Certificate::at_most("apriori.H1<=K2", h1, bounds.K2));
    if (report.mu < 1.0) {
        if (linf <= 1e-12)
            set.add(Certificate::excluded("apriori.H1>=k2", "trivial"));
        else
            set.add(Certificate::at_least("apriori.H1>=k2", h1, bounds.k2));
    }
    return set;
}

}  // namespace radial
