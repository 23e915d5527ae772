#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace radial {

struct SuiteCheck {
    std::string description;
    double measured = 0.0;
    double bound = 0.0;
    bool passed = false;
};

struct SuiteReport {
    std::string name;
    std::vector<SuiteCheck> checks;
    std::uint64_t seed = 0;
    double seconds = 0.0;

    bool passed() const;
};

struct SuiteConfig {
    int dimension = 2;
    int intervals = 512;
    /// Random inputs per experiment (cone samples, flow trajectories).
    int samples = 1000;
    int drifts = 5;
    int multistart = 50;
    std::uint64_t seed = 1;
};

/// embedding, embedding_counterexample, cone_map, eigen, constant_only,
/// bounds, flow_invariance, tangent.
const std::vector<std::string>& suite_names();

/// Throws ParameterError for an unknown suite name.
SuiteReport run_suite(const std::string& name, const SuiteConfig& config);

/// First positive zero of J_nu, by scanning and bisection on std::cyl_bessel_j.
double bessel_first_zero(double nu);

/// 1 + j^2 with j the first positive zero of J_{N/2}: the second radial
/// Neumann eigenvalue of -Lap + 1 on the unit ball.
double radial_lambda2_exact(int dimension);

}  // namespace radial
