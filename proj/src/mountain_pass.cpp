#include "radial_lab/mountain_pass.hpp"

#include "radial_lab/errors.hpp"
#include "radial_lab/nonlinearity.hpp"
#include "radial_lab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace radial {

namespace {

double sup_distance(const RadialFunction& u, double c)
{
    double d = 0.0;
    for (double x : u.values())
        d = std::max(d, std::abs(x - c));
    return d;
}

bool in_window_set(const RadialFunction& u, const ConeWindow& window)
{
    const auto rep = check_cone(u, window, 0.0);
    return rep.in_cone && rep.in_window.value_or(false);
}

void require_unit_weight(const EnergyFunctional& functional)
{
    const auto& a = functional.problem().weight();
    if (!a.is_constant() || a.a0() != 1.0)
        throw ParameterError("the mountain-pass construction needs a == 1");
}

}  // namespace

const char* to_string(AdmissibleSets::Branch branch)
{
    return branch == AdmissibleSets::Branch::Bounded ? "bounded" : "unbounded";
}

bool AdmissibleSets::in_lower(const RadialFunction& u, const EnergyFunctional& functional) const
{
    return in_window_set(u, window) && sup_distance(u, window.u_minus) < tau &&
           functional.energy(u) < I_minus + 0.5 * alpha;
}

bool AdmissibleSets::in_upper(const RadialFunction& u, const EnergyFunctional& functional) const
{
    if (!in_window_set(u, window))
        return false;
    if (branch == Branch::Bounded)
        return sup_distance(u, window.u_plus.value()) < tau && functional.energy(u) < I_plus + 0.5 * alpha;
    const auto v = u.values();
    const bool above = std::all_of(v.begin(), v.end(), [&](double x) { return x >= window.u_zero; });
    return above && functional.energy(u) <= I_minus;
}

double AdmissibleSets::barrier() const
{
    if (branch == Branch::Bounded)
        return std::max(I_minus, I_plus) + alpha * (1.0 - 1e-6);
    return I_minus + alpha;
}

AdmissibleSets admissible_sets(const ConeWindow& window, const EnergyFunctional& functional)
{
    require_unit_weight(functional);
    const double lo = window.u_minus;
    const double mid = window.u_zero;
    if (!(mid > lo) || lo < 0.0 || (window.u_plus.is_finite() && !(window.u_plus.value() > mid)))
        throw ParameterError("degenerate window");

    AdmissibleSets sets;
    sets.window = window;
    sets.branch = window.u_plus.is_finite() ? AdmissibleSets::Branch::Bounded : AdmissibleSets::Branch::Unbounded;
    const double gap = sets.branch == AdmissibleSets::Branch::Bounded ? std::min(mid - lo, window.u_plus.value() - mid)
                                                                      : mid - lo;
    sets.tau = 0.5 * gap;

    const auto& f = functional.problem().nonlinearity();
    const double volume = functional.problem().grid().ball_volume();
    sets.I_minus = functional.constant_energy(lo);
    sets.I_zero = functional.constant_energy(mid);
    sets.I_plus = std::numeric_limits<double>::quiet_NaN();

    const double tau = sets.tau;
    const double shift_lo = functional.constant_energy(lo + tau) - sets.I_minus;
    const double formula_lo =
        volume * adaptive_simpson([&](double t) { return (lo + t * tau - f.f(lo + t * tau)) * tau; }, 0.0, 1.0);
    double alpha = std::min(shift_lo, formula_lo);
    if (sets.branch == AdmissibleSets::Branch::Bounded) {
        const double hi = window.u_plus.value();
        sets.I_plus = functional.constant_energy(hi);
        const double shift_hi = functional.constant_energy(hi - tau) - sets.I_plus;
        const double formula_hi =
            volume * adaptive_simpson([&](double t) { return (f.f(hi - t * tau) - (hi - t * tau)) * tau; }, 0.0, 1.0);
        alpha = std::min({alpha, shift_hi, formula_hi});
    }
    if (!(alpha > 0.0))
        throw ValidationError("energy barrier estimate is not positive; window invalid");
    sets.alpha = std::max(alpha, 1e-8);
    return sets;
}

Path make_path(const ConeWindow& window, const RadialFunction& v, double t_minus, double t_plus, double s, int points)
{
    if (points < 3 || points % 2 == 0)
        throw ParameterError("path needs an odd number of points");
    Path path;
    path.s = s;
    const GridPtr& grid = v.grid_ptr();
    const RadialFunction direction = RadialFunction::constant(grid, window.u_zero) + s * v;
    const int half = points / 2;
    for (int j = 0; j < points; ++j) {
        const double t = j <= half ? t_minus + (1.0 - t_minus) * j / half
                                   : 1.0 + (t_plus - 1.0) * (j - half) / static_cast<double>(half);
        path.t.push_back(t);
        path.points.push_back(project_to_window(t * direction, window));
    }
    return path;
}

InitialPathResult initial_path(const ConeWindow& window, const EigenPair& direction, const AdmissibleSets& sets,
                               const EnergyFunctional& functional, int points)
{
    if (points < 17 || points % 2 == 0)
        throw ParameterError("initial path needs an odd P >= 17");
    InitialPathResult result;
    const double u0 = window.u_zero;
    result.t_minus = window.u_minus / u0;
    if (sets.branch == AdmissibleSets::Branch::Bounded) {
        result.t_plus = window.u_plus.value() / u0;
    } else {
        const double s0 = functional.problem().nonlinearity().s0();
        const double cap = std::isfinite(s0) ? 10.0 * s0 / u0 : 1e3;
        double t = 1.0;
        while (t < cap && functional.constant_energy(t * u0) > sets.I_minus - 0.05 * sets.alpha)
            t *= 1.02;
        if (!(t < cap)) {
            result.message = "no t_plus with I(t u0) <= I(u_minus) below the search cap";
            return result;
        }
        result.t_plus = t;
    }

    const double I0 = sets.I_zero;
    const double margin = 1e-12 * std::max(1.0, std::abs(I0));
    std::ostringstream log;
    for (double s = 0.1; s >= 1e-6; s *= 0.5) {
        Path path = make_path(window, direction.v, result.t_minus, result.t_plus, s, points);
        if (!sets.in_lower(path.points.front(), functional)) {
            log << "s=" << s << ": lower endpoint outside U-; ";
            continue;
        }
        if (!sets.in_upper(path.points.back(), functional)) {
            log << "s=" << s << ": upper endpoint outside U+; ";
            continue;
        }
        const Path fine = make_path(window, direction.v, result.t_minus, result.t_plus, s, 4 * (points - 1) + 1);
        double top = -std::numeric_limits<double>::infinity();
        for (const auto& p : fine.points)
            top = std::max(top, functional.energy(p));
        if (!(top < I0 - margin)) {
            log << "s=" << s << ": path maximum " << top << " not below I(u0) = " << I0 << "; ";
            continue;
        }
        result.path = std::move(path);
        result.max_energy = top;
        result.found = true;
        std::ostringstream msg;
        msg << "s = " << s << ", t- = " << result.t_minus << ", t+ = " << result.t_plus << ", max I = " << top;
        result.message = msg.str();
        return result;
    }
    result.message = "mechanism too weak: no admissible s >= 1e-6; " + log.str();
    return result;
}

int sign_changes(const RadialFunction& u, double c)
{
    int count = 0;
    int last = 0;
    for (double x : u.values()) {
        const double d = x - c;
        const int sgn = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
        if (sgn == 0)
            continue;
        if (last != 0 && sgn != last)
            ++count;
        last = sgn;
    }
    return count;
}

CertificateSet certify_nonconstant(const RadialFunction& u_star, const ConeWindow& window,
                                   const EnergyFunctional& functional)
{
    CertificateSet set;
    const double u0 = window.u_zero;
    const double I0 = functional.constant_energy(u0);
    const double I_star = functional.energy(u_star);
    set.add(Certificate::at_most("nonconstant.energy_below_u0", I_star, I0 - 1e-8, "I(u*) < I(u0) - 1e-8"));
    set.add(Certificate::at_least("nonconstant.distance_from_u0", sup_distance(u_star, u0), 1e-4,
                                  "||u* - u0||_inf > 1e-4"));
    set.add(Certificate::at_least("nonconstant.oscillation", u_star.back() - u_star.front(), 1e-4,
                                  "u*(1) - u*(0) > 1e-4"));
    set.add(Certificate::at_least("nonconstant.crossings", sign_changes(u_star, u0), 1.0, "sign changes of u* - u0"));
    const auto v = u_star.values();
    const double h = functional.problem().grid().spacing();
    double min_slope = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < v.size(); ++i)
        min_slope = std::min(min_slope, (v[i + 1] - v[i - 1]) / (2.0 * h));
    set.add(Certificate::at_least("nonconstant.monotone", min_slope, -kCertificateConeTolerance,
                                  "min interior slope >= 0"));
    return set;
}

namespace {

struct PolylineMax {
    double value = 0.0;
    std::size_t segment = 0;
    double weight = 0.0;
};

/// Max of I over the piecewise-linear path: 8 samples per segment, then
/// golden-section refinement on every segment whose sampled maximum is
/// within 1e-2 of the best.
PolylineMax polyline_max(const std::vector<RadialFunction>& pts, const std::vector<double>& energy,
                         const EnergyFunctional& functional)
{
    const std::size_t P = pts.size();
    constexpr int kSub = 8;
    // samples[j][k] = I at weight k / kSub on segment j, k = 0..kSub
    std::vector<std::vector<double>> samples(P - 1, std::vector<double>(kSub + 1));
    parallel_for(P - 1, [&](std::size_t j) {
        samples[j][0] = energy[j];
        samples[j][kSub] = energy[j + 1];
        for (int k = 1; k < kSub; ++k)
            samples[j][k] = functional.energy(lerp(pts[j], pts[j + 1], k / double(kSub)));
    });
    double best_sampled = energy[0];
    for (const auto& seg : samples)
        best_sampled = std::max(best_sampled, *std::max_element(seg.begin(), seg.end()));
    const double threshold = best_sampled - 1e-2 * std::max(1.0, std::abs(best_sampled));

    std::vector<PolylineMax> local(P - 1);
    parallel_for(P - 1, [&](std::size_t j) {
        const auto& seg = samples[j];
        const auto kbest = static_cast<int>(std::max_element(seg.begin(), seg.end()) - seg.begin());
        PolylineMax m{seg[kbest], j, kbest / double(kSub)};
        if (seg[kbest] < threshold) {
            local[j] = m;
            return;
        }
        auto at = [&](double x) { return functional.energy(lerp(pts[j], pts[j + 1], x)); };
        const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
        double lo = std::max(0.0, m.weight - 1.0 / kSub);
        double hi = std::min(1.0, m.weight + 1.0 / kSub);
        double c = hi - invphi * (hi - lo);
        double d = lo + invphi * (hi - lo);
        double fc = at(c);
        double fd = at(d);
        for (int it = 0; it < 40; ++it) {
            if (fc > fd) {
                hi = d;
                d = c;
                fd = fc;
                c = hi - invphi * (hi - lo);
                fc = at(c);
            } else {
                lo = c;
                c = d;
                fc = fd;
                d = lo + invphi * (hi - lo);
                fd = at(d);
            }
        }
        if (std::max(fc, fd) > m.value) {
            m.value = std::max(fc, fd);
            m.weight = fc > fd ? c : d;
        }
        local[j] = m;
    });
    PolylineMax best = local[0];
    for (const auto& m : local)
        if (m.value > best.value)
            best = m;
    return best;
}

}  // namespace

MinimaxReport minimax(const Path& path, const EnergyFunctional& functional, const AdmissibleSets& sets,
                      const MinimaxOptions& options)
{
    const std::size_t P = path.points.size();
    if (P < 3)
        throw ParameterError("path needs at least three points");
    const ConeWindow& window = sets.window;
    for (const auto& p : path.points)
        if (!in_window_set(p, window))
            throw ParameterError("path point outside the window set");
    if (!sets.in_lower(path.points.front(), functional) || !sets.in_upper(path.points.back(), functional))
        throw ParameterError("path endpoints outside U- / U+");

    MinimaxReport report;
    report.I_zero = sets.I_zero;
    std::vector<RadialFunction> pts = path.points;
    std::vector<double> energy(P);
    parallel_for(P, [&](std::size_t j) { energy[j] = functional.energy(pts[j]); });
    std::vector<double> steps(P, options.step);

    PolylineMax top = polyline_max(pts, energy, functional);
    double c = top.value;
    report.c_history.push_back(c);
    auto top_point = [&](const std::vector<RadialFunction>& p, const PolylineMax& m) {
        return lerp(p[m.segment], p[m.segment + 1], m.weight);
    };
    report.gradient_norm = functional.h1_norm(functional.gradient(top_point(pts, top)));
    int stall = 0;
    double round_scale = 1.0;

    for (int round = 0; round < options.max_rounds && report.gradient_norm >= options.gradient_tol; ++round) {
        double spacing = 0.0;
        for (std::size_t j = 1; j < P; ++j)
            spacing += functional.h1_norm(pts[j] - pts[j - 1]);
        spacing /= static_cast<double>(P - 1);
        const double max_move = options.move_fraction * spacing * round_scale;

        std::vector<RadialFunction> trial = pts;
        std::vector<double> trial_energy = energy;
        std::vector<double> trial_steps = steps;
        parallel_for(P - 2, [&](std::size_t k) {
            const std::size_t j = k + 1;
            RadialFunction u = trial[j];
            double e = trial_energy[j];
            double h = trial_steps[j];
            for (int it = 0; it < options.burst_steps; ++it) {
                const RadialFunction g = functional.gradient(u);
                const double gnorm = functional.h1_norm(g);
                for (int tries = 0; tries < 40; ++tries) {
                    const double dt = gnorm > 0.0 ? std::min(h, max_move / gnorm) : h;
                    RadialFunction next = project_to_window(u - dt * g, window);
                    const double en = functional.energy(next);
                    if (en <= e) {
                        u = std::move(next);
                        e = en;
                        h = std::min(options.max_step, 1.1 * h);
                        break;
                    }
                    h *= 0.5;
                }
            }
            trial[j] = std::move(u);
            trial_energy[j] = e;
            trial_steps[j] = h;
        });

        // equal H1 arclength; the polyline stays in the window set by convexity
        std::vector<double> arc(P, 0.0);
        for (std::size_t j = 1; j < P; ++j)
            arc[j] = arc[j - 1] + functional.h1_norm(trial[j] - trial[j - 1]);
        if (arc.back() > 0.0) {
            std::vector<RadialFunction> moved = trial;
            std::size_t seg = 0;
            for (std::size_t j = 1; j + 1 < P; ++j) {
                const double target = arc.back() * static_cast<double>(j) / static_cast<double>(P - 1);
                while (seg + 2 < P && arc[seg + 1] < target)
                    ++seg;
                const double len = arc[seg + 1] - arc[seg];
                const double w = len > 0.0 ? std::clamp((target - arc[seg]) / len, 0.0, 1.0) : 0.0;
                moved[j] = project_to_window(lerp(trial[seg], trial[seg + 1], w), window);
            }
            trial = std::move(moved);
            parallel_for(P - 2, [&](std::size_t k) { trial_energy[k + 1] = functional.energy(trial[k + 1]); });
        }

        const PolylineMax trial_top = polyline_max(trial, trial_energy, functional);
        report.rounds = round + 1;
        if (trial_top.value <= c) {
            const bool small_change = c - trial_top.value <= options.stall_tol * std::max(1.0, std::abs(c));
            pts = std::move(trial);
            energy = std::move(trial_energy);
            steps = std::move(trial_steps);
            top = trial_top;
            c = trial_top.value;
            round_scale = std::min(1.0, 1.5 * round_scale);
            stall = small_change ? stall + 1 : 0;
        } else {
            round_scale *= 0.5;
            ++stall;
        }
        report.c_history.push_back(c);

        if (!sets.in_lower(pts.front(), functional) || !sets.in_upper(pts.back(), functional))
            throw InvariantViolation("path endpoint left its admissible set");
        report.gradient_norm = functional.h1_norm(functional.gradient(top_point(pts, top)));
        if (stall >= options.stall_rounds || round_scale < 1e-10)
            break;
    }

    report.c = c;
    report.energy_profile = energy;
    report.final_path.points = pts;
    report.final_path.s = path.s;
    for (std::size_t j = 0; j < P; ++j)
        report.final_path.t.push_back(static_cast<double>(j) / static_cast<double>(P - 1));

    const RadialFunction candidate = project_to_window(top_point(pts, top), window);
    const double I0 = sets.I_zero;
    report.degenerate = c >= I0 - 1e-10 * std::max(1.0, std::abs(I0));
    report.u_star = candidate;
    if (options.polish) {
        report.polish = newton_polish(functional.problem(), candidate, options.polish_options);
        report.polished = report.polish.converged;
        if (report.polished)
            report.u_star = report.polish.solution;
    }
    report.I_star = functional.energy(report.u_star);
    report.intersections = sign_changes(report.u_star, window.u_zero);

    auto& certs = report.certificates;
    certs.add(Certificate::flag("minimax.nondegenerate", !report.degenerate,
                                report.degenerate ? "degenerate path, no descent below I(u0)" : ""));
    const double residual = report.polished ? report.polish.residual_inf
                                            : functional.problem().residual_inf(report.u_star);
    certs.add(Certificate::at_most("minimax.residual", residual, 1e-8, "||L u* - f~(u*)||_inf"));
    const auto cone = check_cone(report.u_star, window, kCertificateConeTolerance);
    certs.add(Certificate::flag("minimax.window", cone.in_cone && cone.in_window.value_or(false),
                                "u* in the window set"));
    certs.add(Certificate::at_least("minimax.barrier", c, sets.barrier(), "c above the energy barrier"));
    certs.append(certify_nonconstant(report.u_star, window, functional));

    std::ostringstream msg;
    msg << report.rounds << " rounds, c = " << c << ", |grad I| at the path maximum = " << report.gradient_norm;
    if (report.degenerate)
        msg << "; degenerate path, no descent below I(u0)";
    if (options.polish)
        msg << "; polish " << (report.polished ? "converged" : "failed: " + report.polish.message);
    report.message = msg.str();
    return report;
}

}  // namespace radial
