#pragma once

#include "radial_lab/certificates.hpp"
#include "radial_lab/geometry.hpp"
#include "radial_lab/nonlinearity.hpp"
#include "radial_lab/problem.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace radial {

enum class SolveMethod { Picard, Newton, PicardThenNewton };

const char* to_string(SolveMethod method);

struct SolveOptions {
    /// Converged when residual_inf <= tol (1 + ||u||_inf).
    double tol = 1e-9;
    int max_picard = 2000;
    int max_newton = 60;
    /// Switch from Picard to Newton below this residual.
    double newton_switch = 1e-3;
    double lambda_shift = 0.0;
    double mu = 1.0;
    /// Rescale each Picard iterate along its ray so that <L u, u> = <mu a f(u) + lambda, u>.
    bool ray_rescale = true;
    double theta_min = 0.01;
};

struct SolveReport {
    RadialFunction solution;
    double residual_inf = 0.0;
    int iterations = 0;
    int picard_iterations = 0;
    int newton_iterations = 0;
    SolveMethod method = SolveMethod::Picard;
    double lambda_shift = 0.0;
    double mu = 1.0;
    bool converged = false;
    /// Largest cone violation over accepted Picard iterates.
    double max_iterate_cone_violation = 0.0;
    CertificateSet certificates;
    std::string message;
};

/// Damped Picard iteration of T with ray rescaling, then Newton on
/// L u - mu a f(u) - lambda. Throws ParameterError if the seed is not in the cone.
SolveReport solve(const Problem& problem, const RadialFunction& seed, const SolveOptions& options = {});

/// Newton iterations only, from u (no cone requirement on u).
SolveReport newton_polish(const Problem& problem, const RadialFunction& u, const SolveOptions& options = {});

/// Constant max(lambda_bar, 1).
RadialFunction default_seed(const GridPtr& grid, const AprioriBounds& bounds);

/// Cone membership, positivity and (for nonconstant a) strict monotonicity.
CertificateSet solution_certificates(const Problem& problem, const SolveReport& report);

struct HomotopyFamily {
    enum class Kind { LambdaShift, Mu };
    Kind kind = Kind::LambdaShift;
    std::vector<double> values;
};

/// Continuation over the family; each report is seeded by the previous
/// solution and carries the a priori certificates. Throws ParameterError for
/// lambda outside [0, lambda_bar] or mu outside (0, 1].
std::vector<SolveReport> homotopy(const Problem& problem, const HomotopyFamily& family, const RadialFunction& seed,
                                  const AprioriBounds& bounds, const SolveOptions& options = {});

struct KrasnoselskiiInput {
    std::vector<SolveReport> lambda_reports;
    std::vector<SolveReport> mu_reports;
    int cone_samples = 50;
    std::uint64_t seed = 7;
};

/// (i) cone map on random samples, (ii) out of scope, (iii) solution-free
/// sphere at 2 K2, (iv) solution-free sphere at k2 / 2.
CertificateSet krasnoselskii_certificates(const Problem& problem, const KrasnoselskiiInput& input,
                                          const AprioriBounds& bounds);

}  // namespace radial
