#include "sepembed/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "sepembed/classify.hpp"
#include "sepembed/error.hpp"
#include "sepembed/format.hpp"

namespace sepembed::bounds {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_positive(double v, const char* what) {
  if (!(v > 0.0)) throw InputError(std::string(what) + " must be positive");
}

double sq_dist(const Matrix& pts, Eigen::Index i, Eigen::Index j) { return (pts.row(i) - pts.row(j)).squaredNorm(); }

} // namespace

int covering_number_greedy(const Matrix& points, double eps) {
  require_positive(eps, "covering_number_greedy: eps");
  const Eigen::Index n = points.rows();
  if (n == 0) return 0;
  Vector nearest(n);
  for (Eigen::Index i = 0; i < n; ++i) nearest(i) = std::sqrt(sq_dist(points, i, 0));
  int centers = 1;
  while (true) {
    Eigen::Index far = 0;
    const double worst = nearest.maxCoeff(&far);
    if (worst < eps) break;
    ++centers;
    for (Eigen::Index i = 0; i < n; ++i) nearest(i) = std::min(nearest(i), std::sqrt(sq_dist(points, i, far)));
  }
  return centers;
}

int covering_number_exact(const Matrix& points, double eps) {
  require_positive(eps, "covering_number_exact: eps");
  const auto n = static_cast<int>(points.rows());
  if (n > 12) throw InputError("covering_number_exact: refused for more than 12 points");
  if (n == 0) return 0;
  // covers[c]: bitmask of points strictly within eps of point c.
  std::vector<unsigned> covers(static_cast<std::size_t>(n), 0u);
  for (int c = 0; c < n; ++c) {
    for (int i = 0; i < n; ++i) {
      if (std::sqrt(sq_dist(points, c, i)) < eps) covers[static_cast<std::size_t>(c)] |= 1u << i;
    }
  }
  const unsigned all = (1u << n) - 1u;
  int best = n;
  for (unsigned subset = 1; subset <= all; ++subset) {
    const int size = __builtin_popcount(subset);
    if (size >= best) continue;
    unsigned covered = 0;
    for (int c = 0; c < n; ++c) {
      if (subset & (1u << c)) covered |= covers[static_cast<std::size_t>(c)];
    }
    if (covered == all) best = size;
  }
  return best;
}

int packing_lower_bound(const Matrix& points, double eps) {
  require_positive(eps, "packing_lower_bound: eps");
  std::vector<Eigen::Index> chosen;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    bool far = true;
    for (Eigen::Index c : chosen) {
      if (std::sqrt(sq_dist(points, i, c)) < 2.0 * eps) {
        far = false;
        break;
      }
    }
    if (far) chosen.push_back(i);
  }
  return static_cast<int>(chosen.size());
}

double estimate_eta(const Matrix& points, const std::vector<int>& labels, int cls, double delta) {
  require_positive(delta, "estimate_eta: delta");
  std::vector<Eigen::Index> members;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == cls) members.push_back(static_cast<Eigen::Index>(i));
  }
  if (members.empty()) throw InputError("estimate_eta: class " + std::to_string(cls) + " is empty");
  std::size_t fewest = members.size();
  for (Eigen::Index i : members) {
    std::size_t count = 0;
    for (Eigen::Index j : members) {
      if (std::sqrt(sq_dist(points, i, j)) < delta) ++count;
    }
    fewest = std::min(fewest, count);
  }
  return static_cast<double>(fewest) / static_cast<double>(members.size());
}

ProbabilityBound thm1_bound(double n_m, double cover) {
  require_positive(n_m, "thm1_bound: N_m");
  if (cover < 0.0) throw InputError("thm1_bound: cover must be nonnegative");
  return {1.0 - cover / (2.0 * n_m), true, n_m >= cover};
}

void BoundInputs::validate() const {
  const std::pair<const char*, double> fields[] = {
      {"N", N}, {"N_m", N_m}, {"Q", Q}, {"delta", delta}, {"epsilon", epsilon}, {"d", d}, {"L", L},
      {"L_phi", L_phi}, {"C", C}, {"gamma", gamma}, {"gamma_Q", gamma_Q}, {"eta", eta}, {"D_2delta", D_2delta}};
  for (const auto& [name, v] : fields) {
    if (!(v >= 0.0)) throw InputError(std::string("bound inputs: ") + name + " must be nonnegative");
  }
  if (eta > 1.0) throw InputError("bound inputs: eta must lie in [0, 1]");
  if (!(N_m > 0.0)) throw InputError("bound inputs: N_m must be positive");
}

namespace {

// exp(-2 (N_m eta - Q)^2 / N_m)
double sample_term(const BoundInputs& in) {
  const double excess = in.N_m * in.eta - in.Q;
  return std::exp(-2.0 * excess * excess / in.N_m);
}

// count * exp(-q eps^2 / (2 lip^2 delta^2)), with the 0/0 and x/0 limits made explicit.
double concentration_term(double count, double q, double eps, double lip, double delta) {
  const double denom = 2.0 * lip * lip * delta * delta;
  const double num = q * eps * eps;
  double exponent = 0.0;
  if (num == 0.0) {
    exponent = 0.0;
  } else if (denom == 0.0) {
    exponent = num > 0.0 ? -kInf : kInf;
  } else {
    exponent = -num / denom;
  }
  return count * std::exp(exponent);
}

bool sample_condition(const BoundInputs& in) { return in.N_m * in.eta > in.Q; }

} // namespace

ProbabilityBound thm3_bound(const BoundInputs& in) {
  in.validate();
  ProbabilityBound b;
  b.value = 1.0 - sample_term(in) - concentration_term(2.0 * in.d, in.Q, in.epsilon, in.L, in.delta);
  b.condition_ok = in.L * in.delta + std::sqrt(in.d) * in.epsilon <= in.gamma_Q / 2.0;
  b.applicable = sample_condition(in);
  return b;
}

ProbabilityBound thm4_bound(const BoundInputs& in) {
  in.validate();
  ProbabilityBound b;
  b.value = 1.0 - sample_term(in) - concentration_term(2.0 * in.d, in.Q, in.epsilon, in.L, in.delta);
  b.condition_ok = in.L * in.delta + std::sqrt(in.d) * in.epsilon + in.D_2delta <= in.gamma / 2.0;
  b.applicable = sample_condition(in);
  return b;
}

ProbabilityBound thm11_bound(const BoundInputs& in) {
  in.validate();
  ProbabilityBound b;
  b.value = 1.0 - sample_term(in) - concentration_term(2.0 * in.N, in.Q - 1.0, in.epsilon, in.L_phi, in.delta);
  b.condition_ok = std::sqrt(in.d) * in.C * (in.L_phi * in.delta + in.epsilon) <= in.gamma_Q / 2.0;
  b.applicable = sample_condition(in);
  return b;
}

ProbabilityBound thm12_bound(const BoundInputs& in) {
  in.validate();
  ProbabilityBound b;
  b.value = 1.0 - sample_term(in) - concentration_term(2.0 * in.N, in.Q - 1.0, in.epsilon, in.L_phi, in.delta);
  b.condition_ok =
      std::sqrt(in.d) * in.C * (in.L_phi * in.delta + in.epsilon) + in.D_2delta <= in.gamma / 2.0;
  b.applicable = sample_condition(in);
  return b;
}

Thm6Report thm6_report(const graph::GraphStats& stats, double mu) {
  require_positive(mu, "thm6_report: mu");
  Thm6Report r;
  r.mu_max = stats.w_bar_min / (stats.beta_max * stats.between_volume_max);
  if (mu < r.mu_max) {
    r.applicable = true;
    const double ratio = mu * stats.beta_max * stats.between_volume_max / stats.w_bar_min;
    r.z_bound = (1.0 - std::sqrt(ratio)) / std::sqrt(stats.volume_max);
    r.y_bound = std::sqrt(stats.degree_within_min) * r.z_bound;
  }
  return r;
}

double cor8_bound(const graph::GraphStats& stats, double separation) {
  if (!(separation >= 0.0)) throw InputError("cor8_bound: separation must be nonnegative");
  return 0.5 * (stats.beta_min / stats.beta_max) * separation;
}

double two_class_separation(const Vector& z, const std::vector<int>& labels) {
  if (static_cast<std::size_t>(z.size()) != labels.size()) throw InputError("two_class_separation: size mismatch");
  double lo1 = kInf, hi1 = -kInf, lo2 = kInf, hi2 = -kInf;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double v = z(static_cast<Eigen::Index>(i));
    if (labels[i] == 1) {
      lo1 = std::min(lo1, v);
      hi1 = std::max(hi1, v);
    } else if (labels[i] == 2) {
      lo2 = std::min(lo2, v);
      hi2 = std::max(hi2, v);
    } else {
      throw InputError("two_class_separation: labels must be 1 or 2");
    }
  }
  if (hi1 == -kInf || hi2 == -kInf) throw InputError("two_class_separation: both classes must be present");
  return std::max(lo2 - hi1, lo1 - hi2);
}

namespace {

Matrix select(const Matrix& m, const std::vector<Eigen::Index>& idx) {
  Matrix out(static_cast<Eigen::Index>(idx.size()), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t a = 0; a < idx.size(); ++a) {
    for (std::size_t b = 0; b < idx.size(); ++b) {
      out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = m(idx[a], idx[b]);
    }
  }
  return out;
}

struct Margins {
  double origin = kInf;
  double offset = kInf;
};

// Smallest pairwise margin over the listed classes of an embedding.
Margins pairwise_margins(const Matrix& y, const std::vector<int>& labels, const std::vector<int>& classes) {
  Margins m;
  for (std::size_t a = 0; a < classes.size(); ++a) {
    for (std::size_t b = a + 1; b < classes.size(); ++b) {
      const Matrix p = classify::rows_of_class(y, labels, classes[a]);
      const Matrix q = classify::rows_of_class(y, labels, classes[b]);
      m.origin = std::min(m.origin, classify::origin_hyperplane(p, q).margin);
      m.offset = std::min(m.offset, classify::max_margin_hyperplane(p, q).margin);
    }
  }
  return m;
}

} // namespace

Thm9Report thm9_report(const graph::SupervisedGraph& g, double mu, const std::vector<int>& category_of_class,
                       const std::vector<int>& per_category_dims) {
  require_positive(mu, "thm9_report: mu");
  const int m = g.num_classes();
  if (static_cast<int>(category_of_class.size()) != m) {
    throw InputError("thm9_report: need one category per class");
  }
  const int num_categories = *std::max_element(category_of_class.begin(), category_of_class.end());
  if (*std::min_element(category_of_class.begin(), category_of_class.end()) < 1) {
    throw InputError("thm9_report: categories are numbered from 1");
  }
  if (num_categories < 2) throw InputError("thm9_report: need at least 2 categories");
  if (static_cast<int>(per_category_dims.size()) != num_categories) {
    throw InputError("thm9_report: need one embedding dimension per category");
  }
  std::vector<std::vector<int>> classes_in(static_cast<std::size_t>(num_categories));
  for (int k = 1; k <= m; ++k) classes_in[static_cast<std::size_t>(category_of_class[static_cast<std::size_t>(k - 1)] - 1)].push_back(k);
  for (int q = 0; q < num_categories; ++q) {
    if (classes_in[static_cast<std::size_t>(q)].size() < 2) {
      throw InputError("thm9_report: category " + std::to_string(q + 1) + " has fewer than 2 classes");
    }
  }

  const auto [lw, lb] = graph::laplacians(g);
  const Matrix full = lw - mu * lb;
  const graph::SupervisedGraph gc = graph::restrict_to_categories(g, category_of_class);
  const auto [lwc, lbc] = graph::laplacians(gc);
  const Matrix block = lwc - mu * lbc;

  Thm9Report r;
  r.lnc_norm = numerics::operator_norm(full - block);
  const auto spec_c = numerics::symmetric_eig(block);
  r.eta_gap = numerics::min_eigen_gap(spec_c.values);

  // Category embeddings and the positions of their eigenvalues in the full
  // spectrum of the block-diagonal matrix.
  const auto& labels = g.labels();
  std::vector<bool> taken(static_cast<std::size_t>(spec_c.values.size()), false);
  r.gamma_c = kInf;
  for (int q = 0; q < num_categories; ++q) {
    const auto& cls = classes_in[static_cast<std::size_t>(q)];
    const int dq = per_category_dims[static_cast<std::size_t>(q)];
    std::vector<Eigen::Index> idx;
    std::vector<int> sub_labels;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (category_of_class[static_cast<std::size_t>(labels[i] - 1)] == q + 1) {
        idx.push_back(static_cast<Eigen::Index>(i));
        sub_labels.push_back(labels[i]);
      }
    }
    if (dq < 1 || dq > static_cast<int>(idx.size())) {
      throw InputError("thm9_report: dimension of category " + std::to_string(q + 1) + " out of range");
    }
    const auto spec_q = numerics::symmetric_eig(select(block, idx));
    const Matrix yq = spec_q.vectors.leftCols(dq);
    r.gamma_c = std::min(r.gamma_c, pairwise_margins(yq, sub_labels, cls).origin);

    for (int c = 0; c < dq; ++c) {
      const double lambda = spec_q.values(c);
      Eigen::Index best = -1;
      for (Eigen::Index k = 0; k < spec_c.values.size(); ++k) {
        if (taken[static_cast<std::size_t>(k)]) continue;
        if (best < 0 || std::abs(spec_c.values(k) - lambda) < std::abs(spec_c.values(best) - lambda)) best = k;
      }
      taken[static_cast<std::size_t>(best)] = true;
      r.positions.push_back(static_cast<int>(best));
    }
  }
  std::sort(r.positions.begin(), r.positions.end());

  if (r.eta_gap > 0.0) {
    const double ratio = 2.0 * r.lnc_norm / r.eta_gap;
    r.xi = std::sqrt(std::max(0.0, 1.0 - ratio * ratio));
  }
  const double n = static_cast<double>(g.size());
  r.zeta = std::sqrt(2.0 - 2.0 * r.xi + 2.0 * std::sqrt(n * (1.0 - r.xi * r.xi)));
  r.predicted_gamma = r.gamma_c / std::sqrt(2.0) - 2.0 * r.zeta;
  r.applicable = r.eta_gap > 0.0 && r.lnc_norm < r.eta_gap / 2.0 && r.zeta < r.gamma_c / (2.0 * std::sqrt(2.0));

  const auto spec = numerics::symmetric_eig(full);
  Matrix y(full.rows(), static_cast<Eigen::Index>(r.positions.size()));
  for (std::size_t c = 0; c < r.positions.size(); ++c) y.col(static_cast<Eigen::Index>(c)) = spec.vectors.col(r.positions[c]);
  std::vector<int> all_classes(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) all_classes[static_cast<std::size_t>(k)] = k + 1;
  const Margins full_margins = pairwise_margins(y, labels, all_classes);
  r.empirical_gamma = full_margins.origin;
  r.empirical_gamma_offset = full_margins.offset;
  return r;
}

double sigma_cubic(double alpha, double a1, double a2, int n, double s) {
  const double nn = static_cast<double>(n);
  return 2.0 * alpha * a2 * s * s * s + 2.0 * alpha * a1 * s * s - a2 * nn * s - a1 * (nn + 1.0);
}

double optimal_sigma(double alpha, double a1, double a2, int n) {
  require_positive(alpha, "optimal_sigma: alpha");
  if (!(a1 >= 0.0) || !(a2 >= 0.0)) throw InputError("optimal_sigma: a1 and a2 must be nonnegative");
  if (a1 == 0.0 && a2 == 0.0) throw InputError("optimal_sigma: a1 and a2 are both zero");
  if (n < 1) throw InputError("optimal_sigma: n must be at least 1");
  const auto p = [&](double s) { return sigma_cubic(alpha, a1, a2, n, s); };
  const auto dp = [&](double s) {
    return 6.0 * alpha * a2 * s * s + 4.0 * alpha * a1 * s - a2 * static_cast<double>(n);
  };

  double lo = 0.0;
  double hi = 1.0;
  while (p(hi) <= 0.0) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) throw NumericalError("optimal_sigma: failed to bracket the root");
  }
  double s = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double v = p(s);
    if (v == 0.0) return s;
    if (v < 0.0) lo = s; else hi = s;
    const double slope = dp(s);
    double next = slope != 0.0 ? s - v / slope : lo - 1.0;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - s) <= 4.0 * std::numeric_limits<double>::epsilon() * s) {
      s = next;
      break;
    }
    s = next;
  }
  return s;
}

std::pair<double, double> compose_a(double beta_const, double N, double d, double delta, double epsilon) {
  const double a = beta_const * std::sqrt(N);
  return {std::sqrt(2.0 * d) * a * std::exp(-0.5) * delta, std::sqrt(d) * a * epsilon};
}

double analytic_coeff_bound(double a, double sigma, int n, double alpha) {
  require_positive(sigma, "analytic_coeff_bound: sigma");
  return a * std::pow(sigma, -static_cast<double>(n)) * std::exp(alpha * sigma * sigma);
}

Kappa condition_kappa(double d, double C, double sigma, double gamma) {
  require_positive(sigma, "condition_kappa: sigma");
  if (!(gamma >= 0.0)) throw InputError("condition_kappa: gamma must be nonnegative");
  if (gamma == 0.0) return {kInf, false};
  return {std::sqrt(d) * C / (sigma * gamma), true};
}

double dimension_scaling(double D, double delta, double theta, double n_m, double N, double epsilon,
                         double l_phi) {
  require_positive(theta, "dimension_scaling: Theta");
  require_positive(l_phi, "dimension_scaling: L_phi");
  const double first = std::exp(-n_m * std::pow(delta, 2.0 * D) / std::pow(theta, 2.0 * D));
  const double second =
      N * std::exp(-n_m * std::pow(delta, D - 2.0) * epsilon * epsilon / (l_phi * l_phi * std::pow(theta, D)));
  return first + second;
}

void write_bounds_csv(const std::vector<BoundRow>& rows, std::ostream& out) {
  out << "theorem,parameters,value,applicable\n";
  for (const auto& r : rows) {
    out << r.theorem << ',';
    for (std::size_t i = 0; i < r.parameters.size(); ++i) {
      if (i) out << ';';
      out << r.parameters[i].first << '=' << format_double(r.parameters[i].second);
    }
    out << ',' << format_double(r.value) << ',' << (r.applicable ? 1 : 0) << '\n';
  }
}

} // namespace sepembed::bounds
