#pragma once

#include "sepembed/numerics.hpp"

namespace sepembed::hull {

using numerics::Matrix;
using numerics::Vector;

struct HullDistance {
  double distance = 0.0;  ///< |p - q| at the final iterate
  /// Certified lower bound: min_P w.p - max_Q w.q for w = (p - q)/|p - q|.
  double lower_bound = 0.0;
  Vector p;  ///< nearest point in conv(P)
  Vector q;  ///< nearest point in conv(Q)
  double gap = 0.0;
  int iterations = 0;
};

struct HullOptions {
  int max_iterations = 10000;
  /// Stop once the duality gap falls below gap_tol * |p - q|^2 (or below
  /// gap_tol^2 * scale^2 when the hulls touch).
  double gap_tol = 1e-10;
};

/// Distance between the convex hulls of the rows of `p_points` and
/// `q_points`, by pairwise Frank-Wolfe on the product of the two weight
/// simplices (each iteration moves mass from the worst active vertex to the
/// best vertex in both hulls, with exact line search).
HullDistance hull_distance(const Matrix& p_points, const Matrix& q_points, const HullOptions& opts = {});

} // namespace sepembed::hull
