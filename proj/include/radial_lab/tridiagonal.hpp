#pragma once

#include <span>
#include <vector>

namespace radial {

/// Square tridiagonal matrix. lower[i] = A(i, i-1) (lower[0] unused),
/// upper[i] = A(i, i+1) (upper[n-1] unused).
struct Tridiagonal {
    std::vector<double> lower;
    std::vector<double> diag;
    std::vector<double> upper;

    explicit Tridiagonal(std::size_t n = 0) : lower(n, 0.0), diag(n, 0.0), upper(n, 0.0) {}
    std::size_t size() const noexcept { return diag.size(); }

    std::vector<double> apply(std::span<const double> x) const;
};

/// Thomas algorithm, no pivoting. Intended for diagonally dominant systems;
/// throws NumericError on a vanishing pivot.
std::vector<double> solve_thomas(const Tridiagonal& a, std::span<const double> rhs);

/// Gaussian elimination with partial pivoting (one extra fill-in diagonal),
/// for indefinite Jacobians. Throws NumericError if singular.
std::vector<double> solve_pivoted(const Tridiagonal& a, std::span<const double> rhs);

/// Number of eigenvalues strictly below x of the symmetric tridiagonal
/// matrix with diagonal d and off-diagonal e (e[i] couples i and i+1).
int sturm_count(std::span<const double> d, std::span<const double> e, double x);

/// The k smallest eigenvalues (ascending) by Sturm bisection.
std::vector<double> smallest_eigenvalues(std::span<const double> d, std::span<const double> e, int k);

/// Unit eigenvector for an accurately known eigenvalue, by inverse iteration.
std::vector<double> inverse_iteration(std::span<const double> d, std::span<const double> e, double eigenvalue);

}  // namespace radial
