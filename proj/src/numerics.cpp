#include "sepembed/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "sepembed/error.hpp"

namespace sepembed::numerics {

void require_finite(const Matrix& a, const char* what) {
  if (!a.allFinite()) {
    throw InputError(std::string(what) + ": matrix contains non-finite entries");
  }
}

namespace {

double off_diagonal_norm(const Matrix& a) {
  double sum = 0.0;
  const Eigen::Index n = a.rows();
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      sum += a(i, j) * a(i, j);
    }
  }
  return std::sqrt(2.0 * sum);
}

// One Jacobi rotation zeroing a(p, q). Columns are updated contiguously and
// mirrored into rows to keep the working copy exactly symmetric.
void rotate(Matrix& a, Matrix& v, Eigen::Index p, Eigen::Index q) {
  const double apq = a(p, q);
  const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
  const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;

  const Eigen::Index n = a.rows();
  double* colp = a.col(p).data();
  double* colq = a.col(q).data();
  for (Eigen::Index k = 0; k < n; ++k) {
    if (k == p || k == q) continue;
    const double akp = colp[k];
    const double akq = colq[k];
    colp[k] = c * akp - s * akq;
    colq[k] = s * akp + c * akq;
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    if (k == p || k == q) continue;
    a(p, k) = colp[k];
    a(q, k) = colq[k];
  }
  a(p, p) -= t * apq;
  a(q, q) += t * apq;
  a(p, q) = 0.0;
  a(q, p) = 0.0;

  double* vp = v.col(p).data();
  double* vq = v.col(q).data();
  for (Eigen::Index k = 0; k < n; ++k) {
    const double x = vp[k];
    const double y = vq[k];
    vp[k] = c * x - s * y;
    vq[k] = s * x + c * y;
  }
}

} // namespace

EigenPairs symmetric_eig(const Matrix& input, double tol) {
  if (input.rows() != input.cols()) {
    throw InputError("symmetric_eig: matrix is " + std::to_string(input.rows()) + "x" +
                     std::to_string(input.cols()) + ", expected square");
  }
  require_finite(input, "symmetric_eig");
  const Eigen::Index n = input.rows();
  const double scale = std::max(1.0, input.cwiseAbs().maxCoeff());
  const double asym = (input - input.transpose()).cwiseAbs().maxCoeff();
  if (asym > tol * scale) {
    throw InputError("symmetric_eig: matrix asymmetric by " + std::to_string(asym) +
                     " (tolerance " + std::to_string(tol * scale) + ")");
  }

  Matrix a = 0.5 * (input + input.transpose());
  Matrix v = Matrix::Identity(n, n);
  const double frob = a.norm();
  constexpr int kMaxSweeps = 100;
  constexpr double kEps = std::numeric_limits<double>::epsilon();

  bool converged = n < 2 || frob == 0.0;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    if (off_diagonal_norm(a) <= kEps * frob) {
      converged = true;
      break;
    }
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = std::abs(a(p, q));
        if (apq == 0.0) continue;
        // Negligible against both diagonal entries: drop instead of rotating.
        if (sweep > 3 && apq < 0.1 * kEps * std::abs(a(p, p)) && apq < 0.1 * kEps * std::abs(a(q, q))) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        rotate(a, v, p, q);
      }
    }
  }
  if (!converged && off_diagonal_norm(a) > 1e3 * kEps * frob) {
    throw NumericalError("symmetric_eig: Jacobi sweeps did not converge");
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return a(i, i) < a(j, j); });

  EigenPairs out{Vector(n), Matrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = a(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(k)]);
    out.vectors.col(k) = v.col(order[static_cast<std::size_t>(k)]);
  }
  return out;
}

Matrix solve_spd(const Matrix& a, const Matrix& b, double ridge) {
  if (a.rows() != a.cols()) {
    throw InputError("solve_spd: system matrix must be square");
  }
  if (b.rows() != a.rows()) {
    throw InputError("solve_spd: right-hand side has " + std::to_string(b.rows()) +
                     " rows, expected " + std::to_string(a.rows()));
  }
  if (ridge < 0.0) {
    throw InputError("solve_spd: ridge must be nonnegative");
  }
  require_finite(a, "solve_spd");
  require_finite(b, "solve_spd");

  Matrix shifted = a;
  shifted.diagonal().array() += ridge;

  const auto singular = [&] {
    return NumericalError(ridge == 0.0
                              ? "solve_spd: system is numerically singular; use a positive ridge"
                              : "solve_spd: shifted system is numerically singular; raise the ridge");
  };

  Eigen::LLT<Matrix> llt(shifted);
  if (llt.info() != Eigen::Success) throw singular();
  Matrix x = llt.solve(b);

  const double b_norm = b.norm();
  const double target = 1e-8 * b_norm;
  Matrix residual = shifted * x - b;
  // A couple of refinement steps recover accuracy lost to conditioning.
  for (int step = 0; step < 3 && residual.norm() > target; ++step) {
    x -= llt.solve(residual);
    residual = shifted * x - b;
  }
  if (!x.allFinite() || residual.norm() > target) throw singular();
  return x;
}

double operator_norm(const Matrix& a, double rel_tol) {
  require_finite(a, "operator_norm");
  if (a.size() == 0 || a.cwiseAbs().maxCoeff() == 0.0) return 0.0;

  const Eigen::Index n = a.cols();
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    v(i) = 1.0 + 0.25 * std::sin(static_cast<double>(i) + 1.0);
  }
  v.normalize();

  double lambda = 0.0;
  constexpr int kMaxIter = 200000;
  for (int iter = 0; iter < kMaxIter; ++iter) {
    const Vector w = a.transpose() * (a * v);
    const double next = v.dot(w);
    const double w_norm = w.norm();
    if (w_norm == 0.0) return 0.0;
    const double residual = (w - next * v).norm();
    v = w / w_norm;
    const bool settled = std::abs(next - lambda) <= rel_tol * next && residual <= 1e-6 * next;
    lambda = next;
    if (settled) break;
  }
  return std::sqrt(std::max(lambda, 0.0));
}

double min_eigen_gap(const Vector& values) {
  if (values.size() < 2) return 0.0;
  double gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 1; i < values.size(); ++i) {
    gap = std::min(gap, values(i) - values(i - 1));
  }
  return std::max(gap, 0.0);
}

} // namespace sepembed::numerics
