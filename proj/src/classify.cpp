#include "sepembed/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>

#include "sepembed/error.hpp"
#include "sepembed/hull.hpp"

namespace sepembed::classify {

Hyperplane Hyperplane::flipped() const {
  Hyperplane h = *this;
  h.omega = -omega;
  h.b = -b;
  std::swap(h.class_pos, h.class_neg);
  return h;
}

namespace {

double coordinate_scale(const Matrix& a, const Matrix& b) {
  return std::max({1e-300, a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff()});
}

Vector fallback_direction(const Vector& z, const Matrix& p, const Matrix& q) {
  if (z.norm() > 0.0) return z.normalized();
  const Vector diff = p.colwise().mean().transpose() - q.colwise().mean().transpose();
  if (diff.norm() > 0.0) return diff.normalized();
  Vector e = Vector::Zero(p.cols());
  e(0) = 1.0;
  return e;
}

int argmax_lowest(const std::vector<double>& scores) {
  int best = 0;
  for (std::size_t c = 1; c < scores.size(); ++c) {
    if (scores[c] > scores[static_cast<std::size_t>(best)]) best = static_cast<int>(c);
  }
  return best + 1;
}

} // namespace

Hyperplane max_margin_hyperplane(const Matrix& p, const Matrix& q) {
  const auto hd = hull::hull_distance(p, q);
  const double scale = coordinate_scale(p, q);
  Hyperplane h;
  h.separating = hd.lower_bound > 0.0 && hd.distance > 1e-12 * scale;
  const Vector z = hd.p - hd.q;
  if (h.separating) {
    h.omega = z / hd.distance;
    h.margin = hd.distance;
    h.b = -0.5 * ((p * h.omega).minCoeff() + (q * h.omega).maxCoeff());
  } else {
    h.omega = fallback_direction(z, p, q);
    h.margin = 0.0;
    h.b = -0.5 * (p.colwise().mean().dot(h.omega.transpose()) + q.colwise().mean().dot(h.omega.transpose()));
  }
  return h;
}

Hyperplane origin_hyperplane(const Matrix& p, const Matrix& q) {
  Matrix stacked(p.rows() + q.rows(), p.cols());
  stacked << p, -q;
  const auto hd = hull::hull_distance(stacked, Matrix::Zero(1, p.cols()));
  const double scale = coordinate_scale(p, q);
  Hyperplane h;
  h.b = 0.0;
  h.separating = hd.lower_bound > 0.0 && hd.distance > 1e-12 * scale;
  if (h.separating) {
    h.omega = hd.p / hd.distance;
    h.margin = 2.0 * hd.distance;
  } else {
    h.omega = fallback_direction(hd.p, p, q);
    h.margin = 0.0;
  }
  return h;
}

namespace {

Matrix subset_means(const Matrix& pts, int q) {
  const auto n = static_cast<int>(pts.rows());
  std::vector<Vector> means;
  std::vector<int> idx(static_cast<std::size_t>(q));
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    Vector m = Vector::Zero(pts.cols());
    for (int i : idx) m += pts.row(i).transpose();
    means.push_back(m / q);
    int pos = q - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == n - q + pos) --pos;
    if (pos < 0) break;
    ++idx[static_cast<std::size_t>(pos)];
    for (int k = pos + 1; k < q; ++k) idx[static_cast<std::size_t>(k)] = idx[static_cast<std::size_t>(k - 1)] + 1;
  }
  Matrix out(static_cast<Eigen::Index>(means.size()), pts.cols());
  for (std::size_t r = 0; r < means.size(); ++r) out.row(static_cast<Eigen::Index>(r)) = means[r].transpose();
  return out;
}

} // namespace

double q_mean_margin_exact(const Matrix& p, const Matrix& q_points, int q) {
  if (q < 1 || q > 3) throw InputError("q_mean_margin_exact: q must be in 1..3");
  if (p.rows() > 12 || q_points.rows() > 12) throw InputError("q_mean_margin_exact: at most 12 points per set");
  if (p.rows() < q || q_points.rows() < q) throw InputError("q_mean_margin_exact: fewer points than q");
  return max_margin_hyperplane(subset_means(p, q), subset_means(q_points, q)).margin;
}

Matrix rows_of_class(const Matrix& points, const std::vector<int>& labels, int cls) {
  std::vector<Eigen::Index> rows;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == cls) rows.push_back(static_cast<Eigen::Index>(i));
  }
  Matrix out(static_cast<Eigen::Index>(rows.size()), points.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) out.row(static_cast<Eigen::Index>(r)) = points.row(rows[r]);
  return out;
}

ClassifierModel::ClassifierModel(Matrix train_embedding, std::vector<int> train_labels, int num_classes,
                                 std::vector<Hyperplane> pair_planes)
    : train_embedding_(std::move(train_embedding)),
      train_labels_(std::move(train_labels)),
      num_classes_(num_classes),
      planes_(std::move(pair_planes)) {
  const auto expected = static_cast<std::size_t>(num_classes_ * (num_classes_ - 1) / 2);
  if (planes_.size() != expected) throw InputError("classifier: wrong number of pairwise hyperplanes");
  min_margin_ = std::numeric_limits<double>::infinity();
  separable_ = true;
  for (const auto& h : planes_) {
    min_margin_ = std::min(min_margin_, h.margin);
    separable_ = separable_ && h.separating;
  }
  if (planes_.empty()) min_margin_ = 0.0;
}

Hyperplane ClassifierModel::plane(int k, int l) const {
  if (k == l || k < 1 || l < 1 || k > num_classes_ || l > num_classes_) {
    throw InputError("classifier: invalid class pair");
  }
  const int lo = std::min(k, l);
  const int hi = std::max(k, l);
  // Pairs (lo, hi) enumerated row by row over lo.
  const int index = (lo - 1) * num_classes_ - (lo - 1) * lo / 2 + (hi - lo - 1);
  const Hyperplane& h = planes_[static_cast<std::size_t>(index)];
  return k < l ? h : h.flipped();
}

ClassifierModel fit_linear(const Matrix& embedding, const std::vector<int>& labels, int num_classes) {
  if (num_classes < 2) throw InputError("fit_linear: need at least two classes");
  if (static_cast<std::size_t>(embedding.rows()) != labels.size()) {
    throw InputError("fit_linear: one label per embedded row required");
  }
  std::vector<Matrix> by_class;
  for (int c = 1; c <= num_classes; ++c) {
    by_class.push_back(rows_of_class(embedding, labels, c));
    if (by_class.back().rows() == 0) throw InputError("fit_linear: class " + std::to_string(c) + " is empty");
  }
  std::vector<Hyperplane> planes;
  for (int k = 1; k <= num_classes; ++k) {
    for (int l = k + 1; l <= num_classes; ++l) {
      Hyperplane h = max_margin_hyperplane(by_class[static_cast<std::size_t>(k - 1)], by_class[static_cast<std::size_t>(l - 1)]);
      h.class_pos = k;
      h.class_neg = l;
      planes.push_back(std::move(h));
    }
  }
  return ClassifierModel(embedding, labels, num_classes, std::move(planes));
}

LinearPrediction predict_linear(const ClassifierModel& model, const Eigen::Ref<const Vector>& y) {
  const int m = model.num_classes();
  // score(k, l) = w_kl . y + b_kl for k < l; the l > k case is its negation.
  Matrix score = Matrix::Zero(m, m);
  for (int k = 1; k <= m; ++k) {
    for (int l = k + 1; l <= m; ++l) {
      const double s = model.plane(k, l).eval(y);
      score(k - 1, l - 1) = s;
      score(l - 1, k - 1) = -s;
    }
  }
  for (int l = 0; l < m; ++l) {
    bool wins = true;
    for (int k = 0; k < m && wins; ++k) {
      if (k != l && !(score(l, k) > 0.0)) wins = false;
    }
    if (wins) return {l + 1, true};
  }
  std::vector<double> votes(static_cast<std::size_t>(m), 0.0);
  for (int k = 0; k < m; ++k) {
    for (int l = k + 1; l < m; ++l) {
      if (score(k, l) > 0.0) votes[static_cast<std::size_t>(k)] += 1.0;
      if (score(k, l) < 0.0) votes[static_cast<std::size_t>(l)] += 1.0;
    }
  }
  return {argmax_lowest(votes), false};
}

int predict_nn(const ClassifierModel& model, const Eigen::Ref<const Vector>& y) {
  const Matrix& train = model.train_embedding();
  if (y.size() != train.cols()) throw InputError("predict_nn: dimension mismatch");
  Eigen::Index best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < train.rows(); ++i) {
    const double d2 = (train.row(i).transpose() - y).squaredNorm();
    if (d2 < best_d2) {
      best_d2 = d2;
      best = i;
    }
  }
  return model.train_labels()[static_cast<std::size_t>(best)];
}

int baseline_knn(const Matrix& train_points, const std::vector<int>& train_labels, int num_classes, int k,
                 const Eigen::Ref<const Vector>& x) {
  const auto n = static_cast<int>(train_points.rows());
  if (k < 1 || k > n) throw InputError("baseline_knn: k must be in 1.." + std::to_string(n));
  std::vector<double> d2(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) d2[static_cast<std::size_t>(i)] = (train_points.row(i).transpose() - x).squaredNorm();
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + k, order.end(), [&](int a, int b) {
    const double da = d2[static_cast<std::size_t>(a)];
    const double db = d2[static_cast<std::size_t>(b)];
    return da < db || (da == db && a < b);
  });
  std::vector<double> votes(static_cast<std::size_t>(num_classes), 0.0);
  for (int r = 0; r < k; ++r) votes[static_cast<std::size_t>(train_labels[static_cast<std::size_t>(order[static_cast<std::size_t>(r)])] - 1)] += 1.0;
  return argmax_lowest(votes);
}

KernelPrediction baseline_kernel_regression(const Matrix& train_points, const std::vector<int>& train_labels,
                                            int num_classes, double sigma, const Eigen::Ref<const Vector>& x) {
  if (!(sigma > 0.0)) throw InputError("baseline_kernel_regression: sigma must be positive");
  std::vector<double> mass(static_cast<std::size_t>(num_classes), 0.0);
  double total = 0.0;
  for (Eigen::Index i = 0; i < train_points.rows(); ++i) {
    const double w = std::exp(-(train_points.row(i).transpose() - x).squaredNorm() / (sigma * sigma));
    mass[static_cast<std::size_t>(train_labels[static_cast<std::size_t>(i)] - 1)] += w;
    total += w;
  }
  if (total == 0.0) return {baseline_knn(train_points, train_labels, num_classes, 1, x), true};
  return {argmax_lowest(mass), false};
}

void write_predictions_csv(const std::vector<PredictionRow>& rows, std::ostream& out) {
  out << "index,true_label,predicted,won_outright\n";
  for (const auto& r : rows) {
    out << r.index << ',' << r.true_label << ',' << r.predicted << ',' << (r.won_outright ? 1 : 0) << '\n';
  }
}

} // namespace sepembed::classify
