#include <doctest.h>

#include <sstream>

#include "sepembed/dataset.hpp"
#include "sepembed/error.hpp"
#include "sepembed/graph.hpp"
#include "sepembed/numerics.hpp"

using namespace sepembed;
using graph::Matrix;

namespace {

// Two classes of two vertices: one within edge per class, complete
// bipartite between, all weights 1.
graph::SupervisedGraph four_vertex() {
  Matrix w = Matrix::Zero(4, 4), b = Matrix::Zero(4, 4);
  w(0, 1) = w(1, 0) = 1.0;
  w(2, 3) = w(3, 2) = 1.0;
  for (int i : {0, 1}) for (int j : {2, 3}) b(i, j) = b(j, i) = 1.0;
  return graph::SupervisedGraph::from_weights(w, b, {1, 1, 2, 2}, 2);
}

data::Dataset line_dataset() {
  data::Dataset ds;
  ds.points = Matrix(4, 1);
  ds.points << 0.0, 1.0, 10.0, 11.5;
  ds.labels = {1, 1, 2, 2};
  ds.num_classes = 2;
  return ds;
}

} // namespace

TEST_CASE("build: two points per class") {
  graph::BuildInfo info;
  const auto g = graph::build(line_dataset(), {1, 1, std::nullopt}, &info);
  CHECK(g.within()(0, 1) > 0.0);
  CHECK(g.within()(2, 3) > 0.0);
  CHECK(g.within()(0, 2) == 0.0);
  CHECK(g.between()(1, 2) > 0.0);
  CHECK(g.between()(0, 1) == 0.0);
  // Median of the directed within-class 1-NN distances {1, 1, 1.5, 1.5}.
  CHECK(info.heat_t == doctest::Approx(1.25));
  CHECK(g.within()(0, 1) == doctest::Approx(std::exp(-1.0 / (2.0 * 1.25 * 1.25))));
}

TEST_CASE("build: symmetric weights, positive degrees, explicit t") {
  const auto ds = data::gen_two_class(data::Surface::quadratic, 60, 0.0, 4);
  const auto g = graph::build(ds, {25, 5, 0.3});
  CHECK((g.within() - g.within().transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((g.between() - g.between().transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(g.degree_within().minCoeff() > 0.0);
  CHECK(g.degree_between().minCoeff() > 0.0);
  for (Eigen::Index i = 0; i < 120; ++i)
    for (Eigen::Index j = 0; j < 120; ++j) {
      const bool same = ds.labels[static_cast<std::size_t>(i)] == ds.labels[static_cast<std::size_t>(j)];
      if (g.within()(i, j) > 0.0) CHECK(same);
      if (g.between()(i, j) > 0.0) CHECK_FALSE(same);
    }
}

TEST_CASE("build: bridging connects every class") {
  data::Dataset ds;
  ds.points = Matrix(8, 1);
  // Class 1 has two far-apart pairs; with k = 1 the pairs stay disconnected
  // until bridged.
  ds.points << 0.0, 0.1, 5.0, 5.1, 2.0, 2.2, 3.0, 3.3;
  ds.labels = {1, 1, 1, 1, 2, 2, 2, 2};
  ds.num_classes = 2;
  graph::BuildInfo info;
  const auto g = graph::build(ds, {1, 1, std::nullopt}, &info);
  CHECK(info.bridges_per_class[0] == 1);
  CHECK(info.bridges_per_class[1] == 1);
  const auto st = graph::stats(g);
  CHECK(st.diameter[0] == 3);
}

TEST_CASE("build: errors") {
  auto ds = line_dataset();
  CHECK_THROWS_AS(graph::build(ds, {2, 1, std::nullopt}), InputError);
  CHECK_THROWS_AS(graph::build(ds, {1, 3, std::nullopt}), InputError);
  ds.points << 0.0, 0.0, 3.0, 3.0;
  CHECK_THROWS_AS(graph::build(ds, {1, 1, std::nullopt}), InputError);
  CHECK_NOTHROW(graph::build(ds, {1, 1, 1.0}));
}

TEST_CASE("from_weights: invariants enforced") {
  Matrix w = Matrix::Zero(2, 2), b = Matrix::Zero(2, 2);
  w(0, 1) = w(1, 0) = 1.0;
  CHECK_THROWS_AS(graph::SupervisedGraph::from_weights(w, b, {1, 2}, 2), InputError);
  w(0, 1) = 0.5;
  CHECK_THROWS_AS(graph::SupervisedGraph::from_weights(w, b, {1, 1}, 1), InputError);
}

TEST_CASE("laplacians: single edge, triangle, spectrum range") {
  Matrix w = Matrix::Zero(2, 2);
  w(0, 1) = w(1, 0) = 7.5;
  const Matrix l = graph::normalized_laplacian(w);
  CHECK(l(0, 0) == doctest::Approx(1.0));
  CHECK(l(0, 1) == doctest::Approx(-1.0));
  Matrix tri = Matrix::Ones(3, 3) - Matrix::Identity(3, 3);
  const auto e = numerics::symmetric_eig(graph::normalized_laplacian(tri));
  CHECK(std::abs(e.values(0)) <= 1e-12);
  CHECK(e.values(1) == doctest::Approx(1.5));
  CHECK(e.values(2) == doctest::Approx(1.5));
  CHECK_THROWS_WITH_AS(graph::normalized_laplacian(Matrix::Zero(2, 2)), doctest::Contains("vertex"), InputError);

  const auto ds = data::gen_two_class(data::Surface::spheres, 30, 0.0, 2);
  const auto g = graph::build(ds, {5, 1, std::nullopt});
  const auto [lw, lb] = graph::laplacians(g);
  for (const Matrix* m : {&lw, &lb}) {
    const auto s = numerics::symmetric_eig(*m);
    CHECK(std::abs(s.values(0)) <= 1e-10);
    CHECK(s.values(s.values.size() - 1) <= 2.0 + 1e-10);
  }
}

TEST_CASE("stats: hand-computed four-vertex graph") {
  const auto st = graph::stats(four_vertex());
  CHECK(st.volume == std::vector<double>{2.0, 2.0});
  CHECK(st.volume_max == 2.0);
  CHECK(st.between_volume_max == 8.0);
  CHECK(st.between_volume(0, 1) == st.between_volume(1, 0));
  CHECK(st.diameter == std::vector<int>{1, 1});
  CHECK(st.w_bar_min == 1.0);
  for (double b : st.beta) CHECK(b == 0.5);
  CHECK(st.beta_min == 0.5);
  CHECK(st.beta_max == 0.5);
  CHECK(st.degree_within_min == 1.0);
}

TEST_CASE("stats: path and complete graphs, volume identity") {
  Matrix w = Matrix::Zero(6, 6), b = Matrix::Zero(6, 6);
  w(0, 1) = w(1, 0) = 1.0;
  w(1, 2) = w(2, 1) = 2.0;
  for (int i = 3; i < 6; ++i) for (int j = 3; j < 6; ++j) if (i != j) w(i, j) = 0.5;
  for (int i = 0; i < 3; ++i) b(i, i + 3) = b(i + 3, i) = 1.0;
  const auto g = graph::SupervisedGraph::from_weights(w, b, {1, 1, 1, 2, 2, 2}, 2);
  const auto st = graph::stats(g);
  CHECK(st.diameter == std::vector<int>{2, 1});
  CHECK(st.min_weight == std::vector<double>{1.0, 0.5});
  CHECK(st.w_bar_min == 0.5);
  CHECK(st.volume[0] + st.volume[1] == doctest::Approx(g.degree_within().sum()));
}

TEST_CASE("restrict_to_categories") {
  const auto g2 = four_vertex();
  const auto same = graph::restrict_to_categories(g2, {1, 1});
  CHECK((same.between() - g2.between()).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(graph::restrict_to_categories(g2, {1, 2}), InputError);

  data::Dataset ds;
  ds.points = Matrix(16, 2);
  ds.labels.clear();
  for (int c = 0; c < 4; ++c)
    for (int i = 0; i < 4; ++i) {
      ds.points(c * 4 + i, 0) = (c < 2 ? 0.0 : 10.0) + 0.3 * i;
      ds.points(c * 4 + i, 1) = (c % 2) * 1.0 + 0.1 * i * i;
      ds.labels.push_back(c + 1);
    }
  ds.num_classes = 4;
  const auto g = graph::build(ds, {2, 6, std::nullopt});
  const auto r = graph::restrict_to_categories(g, {1, 1, 2, 2});
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) {
      const bool cross = (i < 8) != (j < 8);
      if (cross) CHECK(r.between()(i, j) == 0.0);
      else CHECK(r.between()(i, j) == g.between()(i, j));
    }
}

TEST_CASE("dump_edges") {
  std::ostringstream out;
  graph::dump_edges(four_vertex(), out);
  const std::string text = out.str();
  CHECK(text.rfind("0 1 1 1 1\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 6);
}
