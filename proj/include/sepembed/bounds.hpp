#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "sepembed/graph.hpp"
#include "sepembed/numerics.hpp"

namespace sepembed::bounds {

using numerics::Matrix;
using numerics::Vector;

// ---- Covering numbers and neighborhood measure ----------------------------

/// Farthest-point-first centers drawn from the sample until every point lies
/// strictly within `eps` of a center. An upper bound on the sample covering
/// number.
int covering_number_greedy(const Matrix& points, double eps);

/// Minimum number of sample-centered open balls of radius `eps` covering the
/// sample, by exhaustive search. At most 12 points.
int covering_number_exact(const Matrix& points, double eps);

/// Size of a greedy 2*eps packing; no open eps-ball holds two of its points,
/// so this never exceeds the covering number.
int packing_lower_bound(const Matrix& points, double eps);

/// Empirical eta_{m,delta}: the smallest fraction of class-m samples strictly
/// within `delta` of a class-m sample (the sample itself included).
double estimate_eta(const Matrix& points, const std::vector<int>& labels, int cls, double delta);

// ---- Probability bounds ---------------------------------------------------

struct ProbabilityBound {
  double value = 0.0;
  /// The margin/regularity inequality of the theorem holds.
  bool condition_ok = false;
  /// The sample-size hypothesis holds.
  bool applicable = false;
};

/// 1 - cover / (2 N_m); applicable when N_m >= cover.
ProbabilityBound thm1_bound(double n_m, double cover);

struct BoundInputs {
  double N = 0.0;
  double N_m = 0.0;
  double Q = 0.0;
  double delta = 0.0;
  double epsilon = 0.0;
  double d = 1.0;
  double L = 0.0;
  double L_phi = 0.0;
  double C = 0.0;
  double gamma = 0.0;
  double gamma_Q = 0.0;
  double eta = 0.0;
  double D_2delta = 0.0;

  /// Throws InputError naming the first negative field or eta outside [0, 1].
  void validate() const;
};

/// Linear classifier with a Lipschitz embedding map.
ProbabilityBound thm3_bound(const BoundInputs& in);
/// Nearest-neighbor classifier with a Lipschitz embedding map.
ProbabilityBound thm4_bound(const BoundInputs& in);
/// Linear classifier with a Gaussian RBF interpolator.
ProbabilityBound thm11_bound(const BoundInputs& in);
/// Nearest-neighbor classifier with a Gaussian RBF interpolator.
ProbabilityBound thm12_bound(const BoundInputs& in);

// ---- Separability of the embedding ----------------------------------------

struct Thm6Report {
  double z_bound = 0.0;
  double y_bound = 0.0;
  double mu_max = 0.0;
  bool applicable = false;  ///< 0 < mu < mu_max
};

/// Lower bound on z_{2,min} - z_{1,max} for a two-class embedding and its
/// y-scale counterpart.
Thm6Report thm6_report(const graph::GraphStats& stats, double mu);

/// 0.5 * (beta_min / beta_max) * separation.
double cor8_bound(const graph::GraphStats& stats, double separation);

/// Separation of a two-class 1-D coordinate, oriented so that class 1 lies
/// below class 2: max over the sign s of min_{class 2} s*z - max_{class 1} s*z.
/// Negative when the classes overlap.
double two_class_separation(const Vector& z, const std::vector<int>& labels);

struct Thm9Report {
  double lnc_norm = 0.0;
  double eta_gap = 0.0;
  double xi = 0.0;
  double zeta = 0.0;
  double gamma_c = 0.0;
  double predicted_gamma = 0.0;
  bool applicable = false;
  /// Through-origin margin of the full embedding built from the eigenvectors
  /// of L at the spectral positions of the category embeddings.
  double empirical_gamma = 0.0;
  /// Same embedding, free-offset maximum margin.
  double empirical_gamma_offset = 0.0;
  std::vector<int> positions;  ///< selected eigenvector indices of L
};

/// `category_of_class[k - 1]` is the category (1-based) of class k;
/// `per_category_dims[q - 1]` is the embedding dimension of category q.
Thm9Report thm9_report(const graph::SupervisedGraph& g, double mu, const std::vector<int>& category_of_class,
                       const std::vector<int>& per_category_dims);

// ---- Kernel scale ----------------------------------------------------------

/// Unique positive root of 2 alpha a2 s^3 + 2 alpha a1 s^2 - a2 n s - a1 (n + 1).
double optimal_sigma(double alpha, double a1, double a2, int n);

/// Value of the cubic above.
double sigma_cubic(double alpha, double a1, double a2, int n, double sigma);

/// (a1, a2) = (sqrt(2d) a e^{-1/2} delta, sqrt(d) a epsilon) with a = beta sqrt(N).
std::pair<double, double> compose_a(double beta_const, double N, double d, double delta, double epsilon);

/// a sigma^{-n} e^{alpha sigma^2}.
double analytic_coeff_bound(double a, double sigma, int n, double alpha);

struct Kappa {
  double value = 0.0;
  bool finite = true;  ///< false when gamma = 0 (value is +inf)
};

/// sqrt(d) C / (sigma gamma).
Kappa condition_kappa(double d, double C, double sigma, double gamma);

/// Order-of-magnitude misclassification expression in terms of the intrinsic
/// dimension D and support diameter Theta; not a certified bound:
/// exp(-N_m delta^{2D} / Theta^{2D}) + N exp(-N_m delta^{D-2} eps^2 / (L_phi^2 Theta^D)).
double dimension_scaling(double D, double delta, double theta, double n_m, double N, double epsilon, double l_phi);

// ---- Reporting -------------------------------------------------------------

struct BoundRow {
  std::string theorem;
  std::vector<std::pair<std::string, double>> parameters;
  double value = 0.0;
  bool applicable = false;
};

/// `theorem,parameters,value,applicable`, parameters as `key=value;...`.
void write_bounds_csv(const std::vector<BoundRow>& rows, std::ostream& out);

} // namespace sepembed::bounds
