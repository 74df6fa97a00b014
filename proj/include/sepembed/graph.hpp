#pragma once

#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "sepembed/dataset.hpp"
#include "sepembed/numerics.hpp"

namespace sepembed::graph {

using numerics::Matrix;
using numerics::Vector;

/// Within-class and between-class neighborhood graphs on the same vertex set.
/// An edge exists wherever the weight is positive.
class SupervisedGraph {
public:
  /// Validates the weights against the labels and computes degrees.
  /// Throws InputError on a mislabeled edge, asymmetric weights, a nonzero
  /// diagonal or a vertex without edges in either graph.
  static SupervisedGraph from_weights(Matrix within, Matrix between, std::vector<int> labels, int num_classes);

  const Matrix& within() const { return within_; }
  const Matrix& between() const { return between_; }
  const Vector& degree_within() const { return degree_within_; }
  const Vector& degree_between() const { return degree_between_; }
  const std::vector<int>& labels() const { return labels_; }
  int num_classes() const { return num_classes_; }
  std::size_t size() const { return labels_.size(); }

private:
  Matrix within_;
  Matrix between_;
  Vector degree_within_;
  Vector degree_between_;
  std::vector<int> labels_;
  int num_classes_ = 0;
};

struct BuildOptions {
  int k_within = 10;
  int k_between = 2;
  /// Heat-kernel width t in exp(-|xi - xj|^2 / (2 t^2)); unset selects the
  /// median within-class k-NN distance.
  std::optional<double> heat_t;
};

struct BuildInfo {
  double heat_t = 0.0;
  /// Bridging edges added per class to connect its within-class graph.
  std::vector<int> bridges_per_class;
};

SupervisedGraph build(const data::Dataset& ds, const BuildOptions& opts, BuildInfo* info = nullptr);

/// Normalized Laplacians D^{-1/2} (D - W) D^{-1/2} of both graphs.
std::pair<Matrix, Matrix> laplacians(const SupervisedGraph& g);

/// Normalized Laplacian of a single weight matrix; throws naming the first
/// zero-degree vertex.
Matrix normalized_laplacian(const Matrix& w);

struct GraphStats {
  std::vector<double> volume;            ///< V_k, per class
  double volume_max = 0.0;               ///< max_k V_k
  Matrix between_volume;                 ///< V^b_kl, symmetric M x M
  double between_volume_max = 0.0;       ///< max_{k != l} V^b_kl
  std::vector<int> diameter;             ///< within-class hop diameter D_k
  std::vector<double> min_weight;        ///< w_min,k
  double w_bar_min = 0.0;                ///< min_k w_min,k / D_k
  std::vector<double> beta;              ///< d_w(i) / d_b(i)
  double beta_min = 0.0;
  double beta_max = 0.0;
  double degree_within_min = 0.0;        ///< d_w,min
};

GraphStats stats(const SupervisedGraph& g);

/// Deletes every edge whose endpoints' classes fall in different categories.
/// `category_of_class[k - 1]` is the category of class k.
SupervisedGraph restrict_to_categories(const SupervisedGraph& g, const std::vector<int>& category_of_class);

/// Edge list `i j w class_i class_j`, one line per edge with i < j, within
/// graph first.
void dump_edges(const SupervisedGraph& g, std::ostream& out);

} // namespace sepembed::graph
