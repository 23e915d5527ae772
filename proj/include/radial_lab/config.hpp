#pragma once

#include "radial_lab/linear_operator.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace radial {

/// Everything a CLI run needs. Serialized as a flat key = value file with
/// [sections]; '#' starts a comment line.
///
///   [grid]          dimension, intervals
///   [problem]       f, a, b
///   [solve]         tol, max_picard, max_newton, seed_value (0: default seed)
///   [homotopy]      lambda, mu (comma-separated lists)
///   [eigen]         k
///   [mountain-pass] points, max_rounds, explore_k, p, s0_factor
///   [verify]        suite, samples, drifts, multistart
///   [run]           seed, output
struct RunConfig {
    int dimension = 2;
    int intervals = 512;

    std::string f = "power:20";
    std::string a = "1";
    std::string b = "0";

    double tol = 1e-9;
    int max_picard = 2000;
    int max_newton = 60;
    double seed_value = 0.0;

    std::vector<double> lambda_values;
    std::vector<double> mu_values{1.0, 0.75, 0.5, 0.25};

    int eigen_count = 2;

    int path_points = 33;
    int max_rounds = 4000;
    /// Eigen-direction index for the path; values above 2 are exploratory.
    int explore_k = 2;
    double truncation_p = 3.0;
    double s0_factor = 1.5;

    std::string suite = "all";
    int samples = 1000;
    int drifts = 5;
    int multistart = 50;

    std::uint64_t seed = 1;
    /// Prefix for <output>.json and <output>.csv.
    std::string output = "radial_lab";

    bool operator==(const RunConfig&) const = default;
};

/// Throws ParameterError on syntax errors, unknown sections or keys and bad values.
RunConfig parse_config(const std::string& text, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});
std::string format_config(const RunConfig& config);

/// Range checks (N >= 2, n >= 8, tolerances positive, ...); throws ParameterError.
void check_config(const RunConfig& config);

/// Coefficients c_0, c_1, ... of a polynomial in r such as "1+r^2",
/// "-0.5*r" or "2 - 0.25 r^3". Throws ParameterError.
std::vector<double> parse_polynomial(const std::string& text);

double evaluate_polynomial(const std::vector<double>& coefficients, double r);

WeightSpec make_weight(const std::string& text);
DriftSpec make_drift(const std::string& text);

}  // namespace radial
