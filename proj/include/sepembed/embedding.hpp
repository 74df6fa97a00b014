#pragma once

#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include "sepembed/dataset.hpp"
#include "sepembed/graph.hpp"
#include "sepembed/numerics.hpp"

namespace sepembed::embed {

using numerics::Matrix;
using numerics::Vector;

enum class Method { sup_laplacian, fisher, label_encoding };

std::string_view method_name(Method m);

struct Embedding {
  Matrix coords;  ///< N x d, one row per sample
  Method method = Method::sup_laplacian;
  double mu = 0.0;
  /// D_w^{-1/2} Y, populated for graph-based methods.
  std::optional<Matrix> normalized;
  /// Eigenvalues paired with the columns (sup_laplacian), ascending.
  Vector eigenvalues;
  /// Trace-ratio iterates (fisher): rho before the first update, then after each.
  std::vector<double> ratio_history;

  Eigen::Index dim() const { return coords.cols(); }
};

/// First nonzero entry of each column made positive.
void canonicalize_signs(Matrix& columns);

/// Bottom-d eigenvectors of L_w - mu L_b.
Embedding sup_laplacian(const graph::SupervisedGraph& g, int d, double mu);

/// Same, starting from explicit Laplacians (used for category blocks).
Embedding sup_laplacian(const Matrix& lap_within, const Matrix& lap_between, int d, double mu);

struct TraceRatioResult {
  Matrix basis;
  std::vector<double> ratio_history;
};

/// Maximizes tr(Y^T A Y) / tr(Y^T B Y) over orthonormal N x d bases by the
/// shifted-eigenproblem iteration, starting from `initial`. Throws
/// NumericalError ("degenerate Fisher embedding") when tr(Y^T B Y) < 1e-12.
TraceRatioResult trace_ratio(const Matrix& a, const Matrix& b, const Matrix& initial, int max_iters = 100,
                             double tol = 1e-10);

/// Trace-ratio embedding tr(Y^T L_b Y) / tr(Y^T L_w Y), initialized from the
/// sup_laplacian solution at mu = 1.
Embedding fisher_trace_ratio(const graph::SupervisedGraph& g, int d, int max_iters = 100, double tol = 1e-10);

/// One-hot rows: sample of class m maps to the m-th unit vector of R^M.
Embedding label_encoding(const std::vector<int>& labels, int num_classes);

/// Coordinates plus label column (`y1..yd,label`).
void write_embedding_csv(const Embedding& emb, const std::vector<int>& labels, const std::filesystem::path& path);
/// Reads coordinates (as `points`) and labels back from write_embedding_csv output.
data::Dataset read_embedding_csv(const std::filesystem::path& path);

} // namespace sepembed::embed
