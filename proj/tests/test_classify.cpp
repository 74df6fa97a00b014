#include <doctest.h>

#include <random>
#include <sstream>

#include "sepembed/classify.hpp"
#include "sepembed/error.hpp"
#include "sepembed/hull.hpp"
#include "oracles.hpp"

using namespace sepembed;
using numerics::Matrix;
using numerics::Vector;

namespace {

Matrix uniform(int n, int dim, double lo, double hi, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(lo, hi);
  Matrix p(n, dim);
  for (int i = 0; i < n; ++i) for (int j = 0; j < dim; ++j) p(i, j) = u(gen);
  return p;
}

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

void check_slab(const classify::Hyperplane& h, const Matrix& p, const Matrix& q) {
  CHECK(h.omega.norm() == doctest::Approx(1.0).epsilon(1e-10));
  for (Eigen::Index i = 0; i < p.rows(); ++i) CHECK(h.eval(p.row(i).transpose()) >= h.margin / 2 - 1e-8);
  for (Eigen::Index i = 0; i < q.rows(); ++i) CHECK(h.eval(q.row(i).transpose()) <= -h.margin / 2 + 1e-8);
}

} // namespace

TEST_CASE("max_margin_hyperplane: 1-D example") {
  Matrix p(2, 1), q(2, 1);
  p << -2.0, -1.0;
  q << 1.0, 3.0;
  const auto h = classify::max_margin_hyperplane(p, q);
  CHECK(h.separating);
  CHECK(h.margin == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(h.omega(0) == doctest::Approx(-1.0));
  CHECK(std::abs(h.b) <= 1e-10);
  check_slab(h, p, q);
}

TEST_CASE("max_margin_hyperplane: two single points") {
  Matrix p(1, 2), q(1, 2);
  p << 0.0, 0.0;
  q << 3.0, 4.0;
  const auto h = classify::max_margin_hyperplane(p, q);
  CHECK(std::abs(h.margin - 5.0) <= 1e-10);
  CHECK(h.omega(0) == doctest::Approx(-0.6));
  CHECK(h.omega(1) == doctest::Approx(-0.8));
  // With omega pointing from Q to P, P evaluates to +gamma/2.
  CHECK(h.b == doctest::Approx(2.5));
  check_slab(h, p, q);
}

TEST_CASE("max_margin_hyperplane: matches the polygon oracle") {
  std::mt19937_64 gen(21);
  std::uniform_real_distribution<double> shift(-1.0, 3.0);
  int separated = 0;
  for (int trial = 0; trial < 100; ++trial) {
    Matrix p = uniform(8, 2, 0.0, 1.0, gen), q = uniform(8, 2, 0.0, 1.0, gen);
    q.col(0).array() += shift(gen);
    q.col(1).array() += shift(gen) - 1.0;
    const double exact = oracle::polygon_distance(p, q);
    const auto h = classify::max_margin_hyperplane(p, q);
    CHECK(std::abs(h.margin - exact) <= 1e-8);
    if (exact > 0) {
      ++separated;
      CHECK(h.separating);
      check_slab(h, p, q);
    } else {
      CHECK_FALSE(h.separating);
    }
  }
  CHECK(separated > 30);
}

TEST_CASE("max_margin_hyperplane: antisymmetry and scale covariance") {
  std::mt19937_64 gen(22);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix p = uniform(6, 3, 0.0, 1.0, gen), q = uniform(5, 3, 0.0, 1.0, gen);
    q.col(2).array() += 1.5;
    const auto h = classify::max_margin_hyperplane(p, q);
    const auto r = classify::max_margin_hyperplane(q, p);
    CHECK(r.margin == h.margin);
    CHECK((r.omega + h.omega).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(std::abs(r.b + h.b) <= 1e-12);
    const double s = 3.7;
    const auto hs = classify::max_margin_hyperplane(s * p, s * q);
    CHECK(hs.margin == doctest::Approx(s * h.margin).epsilon(1e-9));
    const Matrix pts = uniform(30, 3, -1.0, 3.0, gen);
    for (Eigen::Index i = 0; i < pts.rows(); ++i) {
      const double v = h.eval(pts.row(i).transpose());
      if (std::abs(v) > 1e-6) CHECK((v > 0) == (hs.eval(s * pts.row(i).transpose()) > 0));
    }
  }
}

TEST_CASE("max_margin_hyperplane: overlap") {
  Matrix p(2, 2), q(2, 2);
  p << 0, 0, 1, 1;
  q << 0, 0, 2, -1;
  const auto h = classify::max_margin_hyperplane(p, q);
  CHECK(h.margin == 0.0);
  CHECK_FALSE(h.separating);
  CHECK(h.omega.norm() == doctest::Approx(1.0));
}

TEST_CASE("origin_hyperplane") {
  Matrix p(2, 2), q(1, 2);
  p << 1, 1, 1, -1;
  q << -1, 0;
  const auto h = classify::origin_hyperplane(p, q);
  CHECK(h.b == 0.0);
  CHECK(h.margin == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(h.omega(0) == doctest::Approx(1.0));
  Matrix bad(1, 2);
  bad << 1, 0;
  CHECK(classify::origin_hyperplane(p, bad).margin == 0.0);
}

TEST_CASE("q_mean_margin_exact") {
  std::mt19937_64 gen(23);
  for (int trial = 0; trial < 10; ++trial) {
    Matrix p = uniform(6, 2, 0.0, 1.0, gen), q = uniform(6, 2, 0.0, 1.0, gen);
    q.col(0).array() += 1.2;
    const double gamma = classify::max_margin_hyperplane(p, q).margin;
    CHECK(classify::q_mean_margin_exact(p, q, 1) == doctest::Approx(gamma).epsilon(1e-9));
    for (int k : {2, 3}) CHECK(classify::q_mean_margin_exact(p, q, k) >= gamma - 1e-9);
  }
  // Q-means of {0, 4} vs {6, 10}, q = 2: {2} vs {8}.
  Matrix a(2, 1), b(2, 1);
  a << 0.0, 4.0;
  b << 6.0, 10.0;
  CHECK(classify::q_mean_margin_exact(a, b, 2) == doctest::Approx(6.0));
  CHECK_THROWS_AS(classify::q_mean_margin_exact(a, b, 4), InputError);
  CHECK_THROWS_AS(classify::q_mean_margin_exact(Matrix::Zero(13, 1), b, 1), InputError);
}

TEST_CASE("fit_linear: plane orientation and empirical margin") {
  Matrix y(6, 2);
  y << 0, 0, 0.1, 0, 3, 0, 3.1, 0, 0, 5, 0.2, 5;
  const std::vector<int> labels{1, 1, 2, 2, 3, 3};
  const auto model = classify::fit_linear(y, labels, 3);
  CHECK(model.separable());
  CHECK(model.min_margin() == doctest::Approx(2.9));
  for (int k = 1; k <= 3; ++k)
    for (int l = 1; l <= 3; ++l) {
      if (k == l) continue;
      const auto h = model.plane(k, l), r = model.plane(l, k);
      CHECK(h.class_pos == k);
      CHECK(h.class_neg == l);
      CHECK((h.omega + r.omega).norm() == 0.0);
      CHECK(h.b == -r.b);
      for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == k) CHECK(h.eval(y.row(static_cast<Eigen::Index>(i)).transpose()) > 0);
      }
    }
  // Duplicate point in two classes.
  Matrix z(2, 1);
  z << 1.0, 1.0;
  const auto dup = classify::fit_linear(z, {1, 2}, 2);
  CHECK(dup.min_margin() == 0.0);
  CHECK_FALSE(dup.separable());
}

TEST_CASE("predict_linear: rule and fallback") {
  Matrix y(2, 1);
  y << -1.0, 1.0;
  const auto model = classify::fit_linear(y, {1, 2}, 2);
  const auto a = classify::predict_linear(model, vec({-1.0}));
  CHECK(a.label == 1);
  CHECK(a.won_outright);
  CHECK(classify::predict_linear(model, vec({0.5})).label == 2);
  const auto tie = classify::predict_linear(model, vec({0.0}));
  CHECK_FALSE(tie.won_outright);
  CHECK(tie.label == 1);
}

TEST_CASE("predict_linear: agrees with exhaustive rule evaluation") {
  std::mt19937_64 gen(24);
  Matrix y = uniform(15, 3, 0.0, 1.0, gen);
  std::vector<int> labels;
  for (int i = 0; i < 15; ++i) labels.push_back(i % 3 + 1);
  for (int i = 0; i < 15; ++i) y(i, labels[static_cast<std::size_t>(i)] - 1) += 2.0;
  const auto model = classify::fit_linear(y, labels, 3);
  const Matrix queries = uniform(300, 3, -1.0, 4.0, gen);
  for (Eigen::Index i = 0; i < queries.rows(); ++i) {
    const Vector x = queries.row(i).transpose();
    std::vector<int> winners;
    std::vector<int> votes(3, 0);
    for (int l = 1; l <= 3; ++l) {
      bool all = true;
      for (int k = 1; k <= 3; ++k) {
        if (k == l) continue;
        const double v = model.plane(l, k).eval(x);
        all = all && v > 0;
        if (k > l) ++votes[static_cast<std::size_t>(v > 0 ? l - 1 : k - 1)];
      }
      if (all) winners.push_back(l);
    }
    const auto p = classify::predict_linear(model, x);
    if (winners.size() == 1) {
      CHECK(p.won_outright);
      CHECK(p.label == winners[0]);
    } else {
      CHECK_FALSE(p.won_outright);
      const int best = static_cast<int>(std::max_element(votes.begin(), votes.end()) - votes.begin()) + 1;
      CHECK(p.label == best);
    }
  }
  for (Eigen::Index i = 0; i < y.rows(); ++i) {
    CHECK(classify::predict_linear(model, y.row(i).transpose()).label == labels[static_cast<std::size_t>(i)]);
    CHECK(classify::predict_nn(model, y.row(i).transpose()) == labels[static_cast<std::size_t>(i)]);
  }
}

TEST_CASE("predict_nn: ties and linear scan") {
  Matrix y(3, 1);
  y << 0.0, 2.0, 5.0;
  const auto model = classify::fit_linear(y, {2, 1, 1}, 2);
  CHECK(classify::predict_nn(model, vec({1.0})) == 2);
  CHECK(classify::predict_nn(model, vec({1.1})) == 1);
  std::mt19937_64 gen(25);
  const Matrix pts = uniform(20, 3, 0.0, 1.0, gen);
  std::vector<int> labels;
  for (int i = 0; i < 20; ++i) labels.push_back(i % 4 + 1);
  const auto m4 = classify::fit_linear(pts, labels, 4);
  const Matrix q = uniform(100, 3, 0.0, 1.0, gen);
  for (Eigen::Index i = 0; i < q.rows(); ++i) {
    Eigen::Index best = 0;
    (pts.rowwise() - q.row(i)).rowwise().squaredNorm().minCoeff(&best);
    CHECK(classify::predict_nn(m4, q.row(i).transpose()) == labels[static_cast<std::size_t>(best)]);
  }
}

TEST_CASE("baseline_knn") {
  std::mt19937_64 gen(26);
  const Matrix pts = uniform(25, 2, 0.0, 1.0, gen);
  std::vector<int> labels;
  for (int i = 0; i < 25; ++i) labels.push_back(i < 15 ? 1 : 2);
  CHECK(classify::baseline_knn(pts, labels, 2, 1, pts.row(20).transpose()) == 2);
  CHECK(classify::baseline_knn(pts, labels, 2, 25, pts.row(20).transpose()) == 1);
  const Matrix q = uniform(100, 2, 0.0, 1.0, gen);
  for (Eigen::Index i = 0; i < q.rows(); ++i) {
    std::vector<std::pair<double, int>> d;
    for (int j = 0; j < 25; ++j) d.push_back({(pts.row(j) - q.row(i)).norm(), j});
    std::sort(d.begin(), d.end());
    int votes[2] = {0, 0};
    for (int j = 0; j < 3; ++j) ++votes[labels[static_cast<std::size_t>(d[static_cast<std::size_t>(j)].second)] - 1];
    CHECK(classify::baseline_knn(pts, labels, 2, 3, q.row(i).transpose()) == (votes[1] > votes[0] ? 2 : 1));
  }
  // Vote tie goes to the lower class.
  Matrix two(2, 1);
  two << 0.0, 1.0;
  CHECK(classify::baseline_knn(two, {2, 1}, 2, 2, vec({0.9})) == 1);
}

TEST_CASE("baseline_kernel_regression") {
  std::mt19937_64 gen(27);
  const Matrix pts = uniform(20, 2, 0.0, 1.0, gen);
  std::vector<int> labels;
  for (int i = 0; i < 20; ++i) labels.push_back(i % 2 + 1);
  const Matrix q = uniform(100, 2, 0.0, 1.0, gen);
  for (Eigen::Index i = 0; i < q.rows(); ++i) {
    double mass[2] = {0, 0};
    for (int j = 0; j < 20; ++j) mass[labels[static_cast<std::size_t>(j)] - 1] += std::exp(-(pts.row(j) - q.row(i)).squaredNorm() / 0.09);
    const auto p = classify::baseline_kernel_regression(pts, labels, 2, 0.3, q.row(i).transpose());
    CHECK_FALSE(p.fell_back);
    CHECK(p.label == (mass[1] > mass[0] ? 2 : 1));
    // Tiny sigma behaves like 1-NN.
    CHECK(classify::baseline_kernel_regression(pts, labels, 2, 1e-3, q.row(i).transpose()).label ==
          classify::baseline_knn(pts, labels, 2, 1, q.row(i).transpose()));
  }
  const auto single = classify::baseline_kernel_regression(pts, std::vector<int>(20, 1), 1, 0.5, vec({100.0, 100.0}));
  CHECK(single.label == 1);
  CHECK(single.fell_back);
  CHECK_THROWS_AS(classify::baseline_kernel_regression(pts, labels, 2, 0.0, vec({0.0, 0.0})), InputError);
}

TEST_CASE("write_predictions_csv") {
  std::ostringstream out;
  classify::write_predictions_csv({{0, 1, 2, false}, {1, 2, 2, true}}, out);
  CHECK(out.str() == "index,true_label,predicted,won_outright\n0,1,2,0\n1,2,2,1\n");
}

TEST_CASE("hull_distance: lower bound certificate") {
  std::mt19937_64 gen(28);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix p = uniform(10, 4, 0.0, 1.0, gen), q = uniform(10, 4, 0.0, 1.0, gen);
    q.col(3).array() += 1.3;
    const auto r = hull::hull_distance(p, q);
    CHECK(r.lower_bound <= r.distance + 1e-12);
    CHECK(r.distance - r.lower_bound <= 1e-6 * r.distance);
    CHECK((r.p - r.q).norm() == doctest::Approx(r.distance));
  }
}
