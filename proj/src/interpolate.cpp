#include "sepembed/interpolate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "sepembed/error.hpp"

namespace sepembed::rbf {

double gaussian(double r, double sigma) { return std::exp(-(r * r) / (sigma * sigma)); }

RbfInterpolator::RbfInterpolator(Matrix centers, Matrix coeffs, double sigma, double ridge)
    : centers_(std::move(centers)), coeffs_(std::move(coeffs)), sigma_(sigma), ridge_(ridge) {
  if (!(sigma_ > 0.0)) throw InputError("rbf: sigma must be positive");
  if (centers_.rows() != coeffs_.rows()) throw InputError("rbf: one coefficient row per center required");
}

Vector RbfInterpolator::eval(const Eigen::Ref<const Vector>& x) const {
  if (x.size() != centers_.cols()) {
    throw InputError("rbf: point has dimension " + std::to_string(x.size()) + ", expected " +
                     std::to_string(centers_.cols()));
  }
  Vector out = Vector::Zero(coeffs_.cols());
  for (Eigen::Index i = 0; i < centers_.rows(); ++i) {
    const double r2 = (centers_.row(i).transpose() - x).squaredNorm();
    out += std::exp(-r2 / (sigma_ * sigma_)) * coeffs_.row(i).transpose();
  }
  return out;
}

Matrix RbfInterpolator::eval_rows(const Matrix& points) const {
  Matrix out(points.rows(), coeffs_.cols());
  for (Eigen::Index r = 0; r < points.rows(); ++r) {
    out.row(r) = eval(points.row(r).transpose()).transpose();
  }
  return out;
}

Matrix kernel_matrix(const Matrix& points, double sigma) {
  if (!(sigma > 0.0)) throw InputError("rbf: sigma must be positive");
  const Eigen::Index n = points.rows();
  Matrix phi(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    phi(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      phi(i, j) = phi(j, i) = std::exp(-(points.row(i) - points.row(j)).squaredNorm() / (sigma * sigma));
    }
  }
  return phi;
}

double regularized_ridge(const Matrix& points, double sigma) {
  if (points.rows() == 0) return 0.0;
  return 1e-6 * kernel_matrix(points, sigma).trace() / static_cast<double>(points.rows());
}

RbfInterpolator fit(const Matrix& points, const Matrix& targets, double sigma, double ridge) {
  if (!(sigma > 0.0)) throw InputError("rbf fit: sigma must be positive");
  if (!(ridge >= 0.0)) throw InputError("rbf fit: ridge must be nonnegative");
  if (points.rows() != targets.rows()) throw InputError("rbf fit: one target row per point required");
  if (points.rows() == 0) throw InputError("rbf fit: no training points");

  // Merge exact duplicates; lexicographic order on coordinates.
  const auto less = [](const Vector& a, const Vector& b) {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
  };
  std::map<Vector, std::vector<Eigen::Index>, decltype(less)> groups(less);
  std::vector<Vector> first_seen;
  for (Eigen::Index r = 0; r < points.rows(); ++r) {
    Vector key = points.row(r).transpose();
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) first_seen.push_back(std::move(key));
    it->second.push_back(r);
  }

  const auto m = static_cast<Eigen::Index>(first_seen.size());
  Matrix centers(m, points.cols());
  Matrix merged(m, targets.cols());
  for (Eigen::Index c = 0; c < m; ++c) {
    const auto& rows = groups.at(first_seen[static_cast<std::size_t>(c)]);
    centers.row(c) = first_seen[static_cast<std::size_t>(c)].transpose();
    merged.row(c).setZero();
    for (Eigen::Index r : rows) merged.row(c) += targets.row(r);
    merged.row(c) /= static_cast<double>(rows.size());
  }

  Matrix coeffs = numerics::solve_spd(kernel_matrix(centers, sigma), merged, ridge);
  return RbfInterpolator(std::move(centers), std::move(coeffs), sigma, ridge);
}

double gaussian_lipschitz(double sigma) {
  if (!(sigma > 0.0)) throw InputError("gaussian_lipschitz: sigma must be positive");
  return std::sqrt(2.0) * std::exp(-0.5) / sigma;
}

RegularityStats regularity(const RbfInterpolator& f, const Matrix& points, const std::vector<int>& labels,
                           const Matrix& embedded, double delta) {
  if (!(delta > 0.0)) throw InputError("regularity: delta must be positive");
  if (points.rows() != embedded.rows() || static_cast<std::size_t>(points.rows()) != labels.size()) {
    throw InputError("regularity: points, labels and embedding must have matching rows");
  }
  RegularityStats s;
  s.coeff_bound = f.coeffs().cwiseAbs().colwise().sum().maxCoeff();
  s.lipschitz_phi = gaussian_lipschitz(f.sigma());
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < points.rows(); ++j) {
      if (labels[static_cast<std::size_t>(i)] != labels[static_cast<std::size_t>(j)]) continue;
      if ((points.row(i) - points.row(j)).norm() <= delta) {
        s.co_diameter = std::max(s.co_diameter, (embedded.row(i) - embedded.row(j)).norm());
      }
    }
  }
  return s;
}

} // namespace sepembed::rbf
