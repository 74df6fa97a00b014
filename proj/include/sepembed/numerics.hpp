#pragma once

#include <Eigen/Dense>

namespace sepembed::numerics {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kDefaultTol = 1e-10;

/// Full spectrum of a symmetric matrix. `values` ascending, `vectors` holds
/// the matching orthonormal eigenvectors as columns.
struct EigenPairs {
  Vector values;
  Matrix vectors;
};

/// Cyclic Jacobi eigendecomposition of a dense symmetric matrix.
///
/// Rejects non-square input and input whose asymmetry exceeds
/// tol * max(1, max|A|). Inside a repeated eigenvalue the returned basis is
/// arbitrary but orthonormal.
EigenPairs symmetric_eig(const Matrix& a, double tol = kDefaultTol);

/// Solves (A + ridge I) X = B for symmetric positive (semi)definite A.
/// Throws NumericalError when the shifted system is numerically singular.
Matrix solve_spd(const Matrix& a, const Matrix& b, double ridge = 0.0);

/// Largest singular value, by power iteration on A^T A.
double operator_norm(const Matrix& a, double rel_tol = kDefaultTol);

/// Smallest gap between distinct positions of an ascending spectrum
/// (0 for fewer than two values).
double min_eigen_gap(const Vector& ascending_values);

void require_finite(const Matrix& a, const char* what);

} // namespace sepembed::numerics
