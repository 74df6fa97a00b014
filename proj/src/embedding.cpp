#include "sepembed/embedding.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "sepembed/error.hpp"

namespace sepembed::embed {

std::string_view method_name(Method m) {
  switch (m) {
    case Method::sup_laplacian: return "sup_laplacian";
    case Method::fisher: return "fisher";
    case Method::label_encoding: return "label_encoding";
  }
  return "unknown";
}

void canonicalize_signs(Matrix& columns) {
  for (Eigen::Index c = 0; c < columns.cols(); ++c) {
    const double scale = columns.col(c).cwiseAbs().maxCoeff();
    for (Eigen::Index r = 0; r < columns.rows(); ++r) {
      if (std::abs(columns(r, c)) > 1e-12 * scale) {
        if (columns(r, c) < 0.0) columns.col(c) *= -1.0;
        break;
      }
    }
  }
}

namespace {

void check_dim(int d, Eigen::Index n) {
  if (d < 1 || d > n) {
    throw InputError("embedding: dimension " + std::to_string(d) + " outside 1.." + std::to_string(n));
  }
}

} // namespace

Embedding sup_laplacian(const Matrix& lap_within, const Matrix& lap_between, int d, double mu) {
  check_dim(d, lap_within.rows());
  if (!(mu > 0.0)) throw InputError("sup_laplacian: mu must be positive");
  const auto eig = numerics::symmetric_eig(lap_within - mu * lap_between);
  Embedding out;
  out.method = Method::sup_laplacian;
  out.mu = mu;
  out.coords = eig.vectors.leftCols(d);
  canonicalize_signs(out.coords);
  out.eigenvalues = eig.values.head(d);
  return out;
}

Embedding sup_laplacian(const graph::SupervisedGraph& g, int d, double mu) {
  const auto [lw, lb] = graph::laplacians(g);
  Embedding out = sup_laplacian(lw, lb, d, mu);
  out.normalized = g.degree_within().cwiseSqrt().cwiseInverse().asDiagonal() * out.coords;
  return out;
}

TraceRatioResult trace_ratio(const Matrix& a, const Matrix& b, const Matrix& initial, int max_iters, double tol) {
  if (a.rows() != a.cols() || b.rows() != a.rows() || b.cols() != a.cols() || initial.rows() != a.rows()) {
    throw InputError("trace_ratio: dimension mismatch");
  }
  const Eigen::Index d = initial.cols();
  check_dim(static_cast<int>(d), a.rows());
  constexpr double kMinDenominator = 1e-12;

  const auto ratio = [&](const Matrix& y) {
    const double den = (y.transpose() * b * y).trace();
    if (den < kMinDenominator) {
      throw NumericalError("degenerate Fisher embedding: tr(Y^T L_w Y) = " + std::to_string(den));
    }
    return (y.transpose() * a * y).trace() / den;
  };

  TraceRatioResult out;
  out.basis = initial;
  double rho = ratio(out.basis);
  out.ratio_history.push_back(rho);
  for (int iter = 0; iter < max_iters; ++iter) {
    const auto eig = numerics::symmetric_eig(a - rho * b);
    Matrix next = eig.vectors.rightCols(d).rowwise().reverse();
    canonicalize_signs(next);
    const double next_rho = ratio(next);
    out.basis = std::move(next);
    out.ratio_history.push_back(next_rho);
    const bool done = std::abs(next_rho - rho) <= tol;
    rho = next_rho;
    if (done) break;
  }
  return out;
}

Embedding fisher_trace_ratio(const graph::SupervisedGraph& g, int d, int max_iters, double tol) {
  const auto [lw, lb] = graph::laplacians(g);
  const Embedding init = sup_laplacian(lw, lb, d, 1.0);
  auto result = trace_ratio(lb, lw, init.coords, max_iters, tol);
  Embedding out;
  out.method = Method::fisher;
  out.mu = 0.0;
  out.coords = std::move(result.basis);
  out.normalized = g.degree_within().cwiseSqrt().cwiseInverse().asDiagonal() * out.coords;
  out.ratio_history = std::move(result.ratio_history);
  return out;
}

Embedding label_encoding(const std::vector<int>& labels, int num_classes) {
  if (num_classes < 1) throw InputError("label_encoding: need at least one class");
  Embedding out;
  out.method = Method::label_encoding;
  out.coords = Matrix::Zero(static_cast<Eigen::Index>(labels.size()), num_classes);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 1 || labels[i] > num_classes) throw InputError("label_encoding: label out of range");
    out.coords(static_cast<Eigen::Index>(i), labels[i] - 1) = 1.0;
  }
  return out;
}

void write_embedding_csv(const Embedding& emb, const std::vector<int>& labels, const std::filesystem::path& path) {
  if (static_cast<std::size_t>(emb.coords.rows()) != labels.size()) {
    throw InputError("write_embedding_csv: label count does not match rows");
  }
  std::ofstream out(path);
  if (!out) throw InputError("write_embedding_csv: cannot open " + path.string());
  for (Eigen::Index c = 0; c < emb.coords.cols(); ++c) out << 'y' << (c + 1) << ',';
  out << "label\n";
  char buf[40];
  for (Eigen::Index r = 0; r < emb.coords.rows(); ++r) {
    for (Eigen::Index c = 0; c < emb.coords.cols(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", emb.coords(r, c));
      out << buf << ',';
    }
    out << labels[static_cast<std::size_t>(r)] << '\n';
  }
}

data::Dataset read_embedding_csv(const std::filesystem::path& path) { return data::load_csv(path, "label"); }

} // namespace sepembed::embed
