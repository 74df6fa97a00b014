#include "sepembed/hull.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sepembed/error.hpp"

namespace sepembed::hull {

HullDistance hull_distance(const Matrix& pts_p, const Matrix& pts_q, const HullOptions& opts) {
  if (pts_p.rows() == 0 || pts_q.rows() == 0) throw InputError("hull_distance: empty point set");
  if (pts_p.cols() != pts_q.cols()) throw InputError("hull_distance: point sets differ in dimension");
  numerics::require_finite(pts_p, "hull_distance");
  numerics::require_finite(pts_q, "hull_distance");

  const Eigen::Index np = pts_p.rows();
  const Eigen::Index nq = pts_q.rows();
  const double scale = std::max({1e-300, pts_p.cwiseAbs().maxCoeff(), pts_q.cwiseAbs().maxCoeff()});

  // Warm start at the closest vertex pair.
  Eigen::Index best_i = 0, best_j = 0;
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < np; ++i) {
    for (Eigen::Index j = 0; j < nq; ++j) {
      const double d2 = (pts_p.row(i) - pts_q.row(j)).squaredNorm();
      if (d2 < best) {
        best = d2;
        best_i = i;
        best_j = j;
      }
    }
  }
  Vector alpha = Vector::Zero(np);
  Vector beta = Vector::Zero(nq);
  alpha(best_i) = 1.0;
  beta(best_j) = 1.0;
  Vector zp = pts_p.row(best_i).transpose();
  Vector zq = pts_q.row(best_j).transpose();

  HullDistance out;
  double gap = std::numeric_limits<double>::infinity();
  int iter = 0;
  for (; iter < opts.max_iterations; ++iter) {
    const Vector z = zp - zq;
    const double f = z.squaredNorm();
    const Vector sp_score = pts_p * z;  // minimize over P
    const Vector sq_score = pts_q * z;  // maximize over Q

    Eigen::Index sp = 0, sq = 0, vp = -1, vq = -1;
    sp_score.minCoeff(&sp);
    sq_score.maxCoeff(&sq);
    for (Eigen::Index i = 0; i < np; ++i) {
      if (alpha(i) > 0.0 && (vp < 0 || sp_score(i) > sp_score(vp))) vp = i;
    }
    for (Eigen::Index j = 0; j < nq; ++j) {
      if (beta(j) > 0.0 && (vq < 0 || sq_score(j) < sq_score(vq))) vq = j;
    }

    gap = 2.0 * (z.dot(zp) - sp_score(sp) + sq_score(sq) - z.dot(zq));
    if (gap <= opts.gap_tol * f || gap <= opts.gap_tol * opts.gap_tol * scale * scale) break;

    // Pairwise direction in each block; a block whose best and worst vertex
    // coincide contributes nothing.
    const bool move_p = sp != vp;
    const bool move_q = sq != vq;
    Vector dz = Vector::Zero(z.size());
    if (move_p) dz += (pts_p.row(sp) - pts_p.row(vp)).transpose();
    if (move_q) dz -= (pts_q.row(sq) - pts_q.row(vq)).transpose();
    const double dz2 = dz.squaredNorm();
    if (dz2 == 0.0) break;

    double step_max = std::numeric_limits<double>::infinity();
    if (move_p) step_max = std::min(step_max, alpha(vp));
    if (move_q) step_max = std::min(step_max, beta(vq));
    const double step = std::clamp(-z.dot(dz) / dz2, 0.0, step_max);
    if (step == 0.0) break;

    if (move_p) {
      alpha(sp) += step;
      alpha(vp) = step == alpha(vp) ? 0.0 : alpha(vp) - step;
      zp += step * (pts_p.row(sp) - pts_p.row(vp)).transpose();
    }
    if (move_q) {
      beta(sq) += step;
      beta(vq) = step == beta(vq) ? 0.0 : beta(vq) - step;
      zq += step * (pts_q.row(sq) - pts_q.row(vq)).transpose();
    }
    // Recompute the iterates from the weights now and then to shed drift.
    if (iter % 64 == 63) {
      zp = pts_p.transpose() * alpha;
      zq = pts_q.transpose() * beta;
    }
  }

  zp = pts_p.transpose() * alpha;
  zq = pts_q.transpose() * beta;
  const Vector z = zp - zq;
  out.distance = z.norm();
  if (out.distance > 0.0) {
    const Vector w = z / out.distance;
    out.lower_bound = (pts_p * w).minCoeff() - (pts_q * w).maxCoeff();
  }
  out.p = std::move(zp);
  out.q = std::move(zq);
  out.gap = gap;
  out.iterations = iter;
  return out;
}

} // namespace sepembed::hull
