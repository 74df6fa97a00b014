#pragma once

#include <vector>

#include "sepembed/numerics.hpp"

namespace sepembed::rbf {

using numerics::Matrix;
using numerics::Vector;

/// Gaussian kernel exp(-r^2 / sigma^2).
double gaussian(double r, double sigma);

/// Gaussian RBF map f(x) = sum_i c_i phi(|x - x_i|) from R^n to R^d.
class RbfInterpolator {
public:
  RbfInterpolator(Matrix centers, Matrix coeffs, double sigma, double ridge);

  Vector eval(const Eigen::Ref<const Vector>& x) const;
  /// Row-wise evaluation of many points.
  Matrix eval_rows(const Matrix& points) const;

  const Matrix& centers() const { return centers_; }
  const Matrix& coeffs() const { return coeffs_; }
  double sigma() const { return sigma_; }
  double ridge() const { return ridge_; }

private:
  Matrix centers_;
  Matrix coeffs_;
  double sigma_;
  double ridge_;
};

/// Kernel matrix Phi_ij = phi(|x_i - x_j|).
Matrix kernel_matrix(const Matrix& points, double sigma);

/// Ridge used by the regularized configuration: 1e-6 * tr(Phi) / N.
double regularized_ridge(const Matrix& points, double sigma);

/// Solves (Phi + ridge I) C = Y. Exactly duplicated training points are
/// merged first, their targets averaged.
RbfInterpolator fit(const Matrix& points, const Matrix& targets, double sigma, double ridge = 0.0);

/// sqrt(2) e^{-1/2} / sigma, the maximum of |d phi / dr|.
double gaussian_lipschitz(double sigma);

struct RegularityStats {
  double coeff_bound = 0.0;  ///< C = max_k sum_i |c_i^k|
  double lipschitz_phi = 0.0;
  double co_diameter = 0.0;  ///< D_delta
};

/// Coefficient bound, kernel Lipschitz constant and D_delta: the largest
/// embedded distance between same-class samples at most `delta` apart.
RegularityStats regularity(const RbfInterpolator& f, const Matrix& points, const std::vector<int>& labels,
                           const Matrix& embedded, double delta);

} // namespace sepembed::rbf
