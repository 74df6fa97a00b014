#pragma once

#include <iosfwd>
#include <vector>

#include "sepembed/numerics.hpp"

namespace sepembed::classify {

using numerics::Matrix;
using numerics::Vector;

/// Separating hyperplane w.y + b for a class pair (k, l); class k lies on
/// the positive side.
struct Hyperplane {
  Vector omega;
  double b = 0.0;
  double margin = 0.0;
  int class_pos = 0;
  int class_neg = 0;
  /// False when the hulls intersect; omega/b are then a best-effort split.
  bool separating = false;

  double eval(const Eigen::Ref<const Vector>& y) const { return omega.dot(y) + b; }
  Hyperplane flipped() const;
};

/// Maximum-margin hyperplane between the rows of `p` (positive side) and `q`.
/// The margin is the distance between the two convex hulls.
Hyperplane max_margin_hyperplane(const Matrix& p, const Matrix& q);

/// Through-origin margin (b = 0): twice the distance from the origin to
/// conv(P union -Q), or 0 if no through-origin hyperplane separates.
Hyperplane origin_hyperplane(const Matrix& p, const Matrix& q);

/// Exact Q-mean margin by enumerating all q-subsets of each class; for small
/// test instances only (at most 12 points per set, q <= 3).
double q_mean_margin_exact(const Matrix& p, const Matrix& q_points, int q);

/// Rows of `points` whose label equals `cls`.
Matrix rows_of_class(const Matrix& points, const std::vector<int>& labels, int cls);

class ClassifierModel {
public:
  ClassifierModel(Matrix train_embedding, std::vector<int> train_labels, int num_classes,
                  std::vector<Hyperplane> pair_planes);

  /// Hyperplane with class k positive and class l negative (k != l).
  Hyperplane plane(int k, int l) const;
  int num_classes() const { return num_classes_; }
  /// Smallest pairwise margin: the empirical gamma of the embedding.
  double min_margin() const { return min_margin_; }
  bool separable() const { return separable_; }
  const Matrix& train_embedding() const { return train_embedding_; }
  const std::vector<int>& train_labels() const { return train_labels_; }

private:
  Matrix train_embedding_;
  std::vector<int> train_labels_;
  int num_classes_;
  std::vector<Hyperplane> planes_;  // k < l, row-major over pairs
  double min_margin_ = 0.0;
  bool separable_ = false;
};

/// One maximum-margin hyperplane per unordered class pair.
ClassifierModel fit_linear(const Matrix& embedding, const std::vector<int>& labels, int num_classes);

struct LinearPrediction {
  int label = 0;
  bool won_outright = false;
};

/// Returns the unique class l with w_lk.y + b_lk > 0 for all k != l; failing
/// that, a pairwise vote with ties going to the lower class index.
LinearPrediction predict_linear(const ClassifierModel& model, const Eigen::Ref<const Vector>& y);

/// Label of the nearest training embedding; distance ties go to the lower index.
int predict_nn(const ClassifierModel& model, const Eigen::Ref<const Vector>& y);

/// Majority vote among the k nearest ambient training points (distance ties
/// by lower index, vote ties by lower class).
int baseline_knn(const Matrix& train_points, const std::vector<int>& train_labels, int num_classes, int k,
                 const Eigen::Ref<const Vector>& x);

struct KernelPrediction {
  int label = 0;
  bool fell_back = false;  ///< all weights underflowed; 1-NN used instead
};

/// Nadaraya-Watson on one-hot class indicators with weights exp(-|x - x_i|^2 / sigma^2).
KernelPrediction baseline_kernel_regression(const Matrix& train_points, const std::vector<int>& train_labels,
                                            int num_classes, double sigma, const Eigen::Ref<const Vector>& x);

struct PredictionRow {
  std::size_t index = 0;
  int true_label = 0;
  int predicted = 0;
  bool won_outright = true;
};

/// `index,true_label,predicted,won_outright`
void write_predictions_csv(const std::vector<PredictionRow>& rows, std::ostream& out);

} // namespace sepembed::classify
