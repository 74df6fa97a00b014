#include "sepembed/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>
#include <tuple>

#include "sepembed/error.hpp"

namespace sepembed::graph {

namespace {

std::string vertex_name(std::size_t i) { return "vertex " + std::to_string(i); }

// Kernel weight of a selected edge. Floored at the smallest normal double so a
// chosen edge can never vanish through underflow.
double heat_weight(double dist, double t) {
  const double w = std::exp(-dist * dist / (2.0 * t * t));
  return std::max(w, std::numeric_limits<double>::min());
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[std::max(a, b)] = std::min(a, b);
    return true;
  }
};

// Nearest `k` of `candidates` to vertex i, ties broken by lower index.
std::vector<std::size_t> nearest(const Matrix& dist, std::size_t i, std::vector<std::size_t> candidates, int k) {
  const auto ii = static_cast<Eigen::Index>(i);
  const auto kk = static_cast<std::ptrdiff_t>(k);
  std::partial_sort(candidates.begin(), candidates.begin() + kk, candidates.end(), [&](std::size_t a, std::size_t b) {
    const double da = dist(ii, static_cast<Eigen::Index>(a));
    const double db = dist(ii, static_cast<Eigen::Index>(b));
    return da < db || (da == db && a < b);
  });
  candidates.resize(static_cast<std::size_t>(k));
  return candidates;
}

} // namespace

SupervisedGraph SupervisedGraph::from_weights(Matrix within, Matrix between, std::vector<int> labels, int num_classes) {
  const auto n = static_cast<Eigen::Index>(labels.size());
  if (within.rows() != n || within.cols() != n || between.rows() != n || between.cols() != n) {
    throw InputError("graph: weight matrices must be " + std::to_string(n) + "x" + std::to_string(n));
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const int ci = labels[static_cast<std::size_t>(i)];
    if (ci < 1 || ci > num_classes) throw InputError("graph: label out of range at " + vertex_name(static_cast<std::size_t>(i)));
    if (within(i, i) != 0.0 || between(i, i) != 0.0) {
      throw InputError("graph: self-loop at " + vertex_name(static_cast<std::size_t>(i)));
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      const double ww = within(i, j);
      const double wb = between(i, j);
      if (!(ww >= 0.0) || !(wb >= 0.0) || !std::isfinite(ww) || !std::isfinite(wb)) {
        throw InputError("graph: weights must be finite and nonnegative");
      }
      if (ww != within(j, i) || wb != between(j, i)) throw InputError("graph: weight matrices must be symmetric");
      const int cj = labels[static_cast<std::size_t>(j)];
      if (ww > 0.0 && ci != cj) throw InputError("graph: within-class edge joins different classes");
      if (wb > 0.0 && ci == cj) throw InputError("graph: between-class edge joins the same class");
    }
  }

  SupervisedGraph g;
  g.degree_within_ = within.rowwise().sum();
  g.degree_between_ = between.rowwise().sum();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (g.degree_within_(i) <= 0.0) {
      throw InputError("graph: " + vertex_name(static_cast<std::size_t>(i)) + " has no within-class edge");
    }
    if (g.degree_between_(i) <= 0.0) {
      throw InputError("graph: " + vertex_name(static_cast<std::size_t>(i)) + " has no between-class edge");
    }
  }
  g.within_ = std::move(within);
  g.between_ = std::move(between);
  g.labels_ = std::move(labels);
  g.num_classes_ = num_classes;
  return g;
}

SupervisedGraph build(const data::Dataset& ds, const BuildOptions& opts, BuildInfo* info) {
  ds.validate();
  if (opts.k_within < 1) throw InputError("graph: k_within must be at least 1");
  if (opts.k_between < 1) throw InputError("graph: k_between must be at least 1");
  if (ds.num_classes < 2) throw InputError("graph: need at least two classes");

  const std::size_t n = ds.size();
  const auto counts = ds.class_counts();
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] <= static_cast<std::size_t>(opts.k_within)) {
      throw InputError("graph: class " + std::to_string(k + 1) + " has " + std::to_string(counts[k]) +
                       " samples, needs more than k_within = " + std::to_string(opts.k_within));
    }
    if (n - counts[k] < static_cast<std::size_t>(opts.k_between)) {
      throw InputError("graph: class " + std::to_string(k + 1) + " sees only " + std::to_string(n - counts[k]) +
                       " samples of other classes, fewer than k_between = " + std::to_string(opts.k_between));
    }
  }

  const auto ni = static_cast<Eigen::Index>(n);
  Matrix dist(ni, ni);
  for (Eigen::Index i = 0; i < ni; ++i) {
    dist(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < ni; ++j) {
      dist(i, j) = dist(j, i) = (ds.points.row(i) - ds.points.row(j)).norm();
    }
  }

  std::vector<std::vector<std::size_t>> same(n), other(n);
  std::vector<double> knn_dists;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> same_cand, other_cand;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      (ds.labels[j] == ds.labels[i] ? same_cand : other_cand).push_back(j);
    }
    same[i] = nearest(dist, i, std::move(same_cand), opts.k_within);
    other[i] = nearest(dist, i, std::move(other_cand), opts.k_between);
    for (std::size_t j : same[i]) knn_dists.push_back(dist(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
  }

  double t = 0.0;
  if (opts.heat_t) {
    t = *opts.heat_t;
    if (!(t > 0.0) || !std::isfinite(t)) throw InputError("graph: heat_t must be positive");
  } else {
    std::sort(knn_dists.begin(), knn_dists.end());
    const std::size_t m = knn_dists.size();
    t = m % 2 == 1 ? knn_dists[m / 2] : 0.5 * (knn_dists[m / 2 - 1] + knn_dists[m / 2]);
    if (!(t > 0.0)) {
      throw InputError("graph: median neighbor distance is zero (duplicate points); set heat_t explicitly");
    }
  }

  Matrix within = Matrix::Zero(ni, ni);
  Matrix between = Matrix::Zero(ni, ni);
  const auto link = [&](Matrix& w, std::size_t i, std::size_t j) {
    const auto a = static_cast<Eigen::Index>(i);
    const auto b = static_cast<Eigen::Index>(j);
    w(a, b) = w(b, a) = heat_weight(dist(a, b), t);
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j : same[i]) link(within, i, j);
    for (std::size_t j : other[i]) link(between, i, j);
  }

  // Kruskal over intra-class pairs: each accepted pair is the globally
  // shortest one joining two distinct components of that class.
  std::vector<int> bridges(static_cast<std::size_t>(ds.num_classes), 0);
  UnionFind uf(n);
  for (Eigen::Index i = 0; i < ni; ++i) {
    for (Eigen::Index j = i + 1; j < ni; ++j) {
      if (within(i, j) > 0.0) uf.unite(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    }
  }
  for (int cls = 1; cls <= ds.num_classes; ++cls) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < n; ++i) {
      if (ds.labels[i] == cls) members.push_back(i);
    }
    std::size_t components = 0;
    for (std::size_t i : members) components += uf.find(i) == i ? 1 : 0;
    if (components <= 1) continue;

    std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
    for (std::size_t a = 0; a < members.size(); ++a) {
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        pairs.emplace_back(dist(static_cast<Eigen::Index>(members[a]), static_cast<Eigen::Index>(members[b])),
                           members[a], members[b]);
      }
    }
    std::sort(pairs.begin(), pairs.end());
    for (const auto& [d, i, j] : pairs) {
      if (components == 1) break;
      if (uf.unite(i, j)) {
        link(within, i, j);
        ++bridges[static_cast<std::size_t>(cls - 1)];
        --components;
      }
    }
  }

  if (info) {
    info->heat_t = t;
    info->bridges_per_class = bridges;
  }
  return SupervisedGraph::from_weights(std::move(within), std::move(between), ds.labels, ds.num_classes);
}

Matrix normalized_laplacian(const Matrix& w) {
  const Vector degree = w.rowwise().sum();
  for (Eigen::Index i = 0; i < degree.size(); ++i) {
    if (!(degree(i) > 0.0)) {
      throw InputError("laplacian: " + vertex_name(static_cast<std::size_t>(i)) + " has zero degree");
    }
  }
  const Vector inv_sqrt = degree.cwiseSqrt().cwiseInverse();
  Matrix lap = -(inv_sqrt.asDiagonal() * w * inv_sqrt.asDiagonal());
  lap.diagonal().array() += 1.0;
  // Exact symmetry for the eigensolver.
  return 0.5 * (lap + lap.transpose());
}

std::pair<Matrix, Matrix> laplacians(const SupervisedGraph& g) {
  return {normalized_laplacian(g.within()), normalized_laplacian(g.between())};
}

GraphStats stats(const SupervisedGraph& g) {
  const std::size_t n = g.size();
  const auto m = static_cast<std::size_t>(g.num_classes());
  const auto& labels = g.labels();
  const Matrix& ww = g.within();
  const Matrix& wb = g.between();

  GraphStats s;
  s.volume.assign(m, 0.0);
  s.between_volume = Matrix::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  s.min_weight.assign(m, std::numeric_limits<double>::infinity());
  s.diameter.assign(m, 0);
  s.beta.resize(n);

  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    const auto ci = static_cast<std::size_t>(labels[i] - 1);
    s.volume[ci] += g.degree_within()(ii);
    s.beta[i] = g.degree_within()(ii) / g.degree_between()(ii);
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      if (ww(ii, jj) > 0.0) s.min_weight[ci] = std::min(s.min_weight[ci], ww(ii, jj));
      if (wb(ii, jj) > 0.0) {
        const auto cj = static_cast<Eigen::Index>(labels[j] - 1);
        s.between_volume(static_cast<Eigen::Index>(ci), cj) += 2.0 * wb(ii, jj);
        if (static_cast<Eigen::Index>(ci) != cj) s.between_volume(cj, static_cast<Eigen::Index>(ci)) += 2.0 * wb(ii, jj);
      }
    }
  }

  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (ww(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) > 0.0) adj[i].push_back(j);
    }
  }
  std::vector<int> hop(n);
  for (std::size_t src = 0; src < n; ++src) {
    std::fill(hop.begin(), hop.end(), -1);
    hop[src] = 0;
    std::deque<std::size_t> queue{src};
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      for (std::size_t v : adj[u]) {
        if (hop[v] < 0) {
          hop[v] = hop[u] + 1;
          queue.push_back(v);
        }
      }
    }
    const auto c = static_cast<std::size_t>(labels[src] - 1);
    for (std::size_t j = 0; j < n; ++j) {
      if (labels[j] != labels[src]) continue;
      if (hop[j] < 0) {
        throw InputError("graph stats: class " + std::to_string(c + 1) + " has a disconnected within-class graph");
      }
      s.diameter[c] = std::max(s.diameter[c], hop[j]);
    }
  }

  s.volume_max = *std::max_element(s.volume.begin(), s.volume.end());
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t l = 0; l < m; ++l) {
      if (k != l) s.between_volume_max = std::max(s.between_volume_max, s.between_volume(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)));
    }
  }
  s.w_bar_min = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < m; ++k) {
    if (s.diameter[k] > 0) s.w_bar_min = std::min(s.w_bar_min, s.min_weight[k] / s.diameter[k]);
  }
  s.beta_min = *std::min_element(s.beta.begin(), s.beta.end());
  s.beta_max = *std::max_element(s.beta.begin(), s.beta.end());
  s.degree_within_min = g.degree_within().minCoeff();
  return s;
}

SupervisedGraph restrict_to_categories(const SupervisedGraph& g, const std::vector<int>& category_of_class) {
  if (category_of_class.size() != static_cast<std::size_t>(g.num_classes())) {
    throw InputError("restrict_to_categories: expected a category for each of " + std::to_string(g.num_classes()) +
                     " classes, got " + std::to_string(category_of_class.size()));
  }
  const auto& labels = g.labels();
  const auto category = [&](std::size_t i) { return category_of_class[static_cast<std::size_t>(labels[i] - 1)]; };

  Matrix between = g.between();
  const auto n = static_cast<Eigen::Index>(g.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (category(static_cast<std::size_t>(i)) != category(static_cast<std::size_t>(j))) between(i, j) = 0.0;
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (between.row(i).sum() <= 0.0) {
      throw InputError("restrict_to_categories: " + vertex_name(static_cast<std::size_t>(i)) +
                       " loses all between-class edges (its category needs at least two connected classes)");
    }
  }
  return SupervisedGraph::from_weights(g.within(), std::move(between), labels, g.num_classes());
}

void dump_edges(const SupervisedGraph& g, std::ostream& out) {
  const auto n = static_cast<Eigen::Index>(g.size());
  const auto& labels = g.labels();
  const auto emit = [&](const Matrix& w) {
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) {
        if (w(i, j) > 0.0) {
          out << i << ' ' << j << ' ' << w(i, j) << ' ' << labels[static_cast<std::size_t>(i)] << ' '
              << labels[static_cast<std::size_t>(j)] << '\n';
        }
      }
    }
  };
  const auto old_precision = out.precision(17);
  emit(g.within());
  emit(g.between());
  out.precision(old_precision);
}

} // namespace sepembed::graph
