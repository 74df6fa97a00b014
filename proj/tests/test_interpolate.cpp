#include <doctest.h>

#include <random>

#include "sepembed/error.hpp"
#include "sepembed/interpolate.hpp"
#include "oracles.hpp"

using namespace sepembed;
using numerics::Matrix;
using numerics::Vector;

namespace {

Matrix random_points(int n, int dim, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix p(n, dim);
  for (int i = 0; i < n; ++i) for (int j = 0; j < dim; ++j) p(i, j) = u(gen);
  return p;
}

} // namespace

TEST_CASE("gaussian kernel and Lipschitz constant") {
  CHECK(rbf::gaussian(0.0, 0.5) == 1.0);
  CHECK(rbf::gaussian(1.0, 2.0) == doctest::Approx(std::exp(-0.25)));
  const double sigma = 0.8;
  // Grid maximum of |d phi / dr| by central differences.
  double best = 0.0;
  for (int i = 1; i < 20000; ++i) {
    const double r = 3.0 * sigma * i / 20000.0, h = 1e-6;
    best = std::max(best, std::abs(rbf::gaussian(r + h, sigma) - rbf::gaussian(r - h, sigma)) / (2 * h));
  }
  CHECK(rbf::gaussian_lipschitz(sigma) == doctest::Approx(best).epsilon(1e-6));
  CHECK(rbf::gaussian_lipschitz(sigma) >= best - 1e-9);
  CHECK_THROWS_AS(rbf::gaussian_lipschitz(0.0), InputError);
}

TEST_CASE("fit: single center") {
  Matrix x(1, 2), y(1, 1);
  x << 0.5, -0.5;
  y << 3.0;
  const auto f = rbf::fit(x, y, 1.0);
  CHECK(f.coeffs()(0, 0) == doctest::Approx(3.0));
  Vector q(2);
  q << 1.5, -0.5;
  CHECK(f.eval(q)(0) == doctest::Approx(3.0 * std::exp(-1.0)));
}

TEST_CASE("fit: closed-form 2x2 system") {
  Matrix x(2, 1), y(2, 1);
  x << 0.0, 1.0;
  y << 1.0, -1.0;
  const double sigma = 1.0, e = std::exp(-1.0);
  const auto f = rbf::fit(x, y, sigma);
  // [[1, e], [e, 1]] c = (1, -1) gives c = (1, -1) / (1 - e).
  CHECK(f.coeffs()(0, 0) == doctest::Approx(1.0 / (1.0 - e)));
  CHECK(f.coeffs()(1, 0) == doctest::Approx(-1.0 / (1.0 - e)));
}

TEST_CASE("fit: coefficients match the Gauss-Jordan inverse") {
  std::mt19937_64 gen(4);
  const Matrix x = random_points(12, 3, gen), y = random_points(12, 2, gen);
  const auto f = rbf::fit(x, y, 0.9, 1e-3);
  Matrix phi = rbf::kernel_matrix(x, 0.9);
  phi.diagonal().array() += 1e-3;
  const Matrix c = oracle::gauss_jordan_inverse(phi) * y;
  CHECK((f.coeffs() - c).cwiseAbs().maxCoeff() <= 1e-8 * (1.0 + c.cwiseAbs().maxCoeff()));
}

TEST_CASE("fit: exact interpolation at training points") {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix x = random_points(30, 3, gen), y = random_points(30, 2, gen);
    const auto f = rbf::fit(x, y, 0.5);
    CHECK((f.eval_rows(x) - y).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("fit: ridge shrinks coefficients") {
  std::mt19937_64 gen(6);
  const Matrix x = random_points(20, 2, gen), y = random_points(20, 1, gen);
  double prev = rbf::fit(x, y, 0.6).coeffs().norm();
  for (double ridge : {1e-4, 1e-2, 1.0, 100.0}) {
    const double now = rbf::fit(x, y, 0.6, ridge).coeffs().norm();
    CHECK(now <= prev + 1e-12);
    prev = now;
  }
  CHECK(rbf::regularized_ridge(x, 0.6) == doctest::Approx(1e-6));
}

TEST_CASE("fit: duplicate points merged with averaged targets") {
  Matrix x(3, 1), y(3, 1);
  x << 0.0, 0.0, 2.0;
  y << 1.0, 3.0, 5.0;
  const auto f = rbf::fit(x, y, 0.7);
  CHECK(f.centers().rows() == 2);
  Vector q(1);
  q << 0.0;
  CHECK(f.eval(q)(0) == doctest::Approx(2.0));
}

TEST_CASE("fit and eval: errors") {
  Matrix x(2, 1), y(2, 1);
  x << 0.0, 1.0;
  y << 1.0, 2.0;
  CHECK_THROWS_AS(rbf::fit(x, y, 0.0), InputError);
  CHECK_THROWS_AS(rbf::fit(x, y, 1.0, -1.0), InputError);
  CHECK_THROWS_AS(rbf::fit(x, Matrix(3, 1), 1.0), InputError);
  const auto f = rbf::fit(x, y, 1.0);
  CHECK_THROWS_AS(f.eval(Vector::Zero(2)), InputError);
}

TEST_CASE("interpolator Lipschitz bound holds on random pairs") {
  std::mt19937_64 gen(7);
  const Matrix x = random_points(15, 2, gen), y = random_points(15, 2, gen);
  const auto f = rbf::fit(x, y, 0.7, 1e-6);
  const Matrix emb = f.eval_rows(x);
  const auto st = rbf::regularity(f, x, std::vector<int>(15, 1), emb, 0.1);
  const double lip = std::sqrt(2.0) * st.coeff_bound * st.lipschitz_phi;
  const Matrix a = random_points(500, 2, gen), b = random_points(500, 2, gen);
  for (int i = 0; i < 500; ++i) {
    const double lhs = (f.eval(a.row(i).transpose()) - f.eval(b.row(i).transpose())).norm();
    CHECK(lhs <= lip * (a.row(i) - b.row(i)).norm() + 1e-12);
  }
}

TEST_CASE("regularity: coefficient bound and co-diameter") {
  Matrix centers(2, 1), coeffs(2, 1);
  centers << 0.0, 1.0;
  coeffs << 1.0, -2.0;
  const rbf::RbfInterpolator f(centers, coeffs, 1.0, 0.0);
  Matrix pts(4, 1), emb(4, 2);
  pts << 0.0, 0.05, 0.3, 0.32;
  emb << 0, 0, 1, 0, 5, 5, 5, 9;
  const std::vector<int> labels{1, 1, 2, 1};
  const auto st = rbf::regularity(f, pts, labels, emb, 0.1);
  CHECK(st.coeff_bound == 3.0);
  CHECK(st.lipschitz_phi == doctest::Approx(std::sqrt(2.0) * std::exp(-0.5)));
  CHECK(st.co_diameter == 1.0);
  // Brute force over all same-class pairs at a wider delta.
  const double delta = 0.5;
  double brute = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (labels[i] == labels[j] && std::abs(pts(i, 0) - pts(j, 0)) <= delta)
        brute = std::max(brute, (emb.row(i) - emb.row(j)).norm());
  CHECK(rbf::regularity(f, pts, labels, emb, delta).co_diameter == brute);
  CHECK_THROWS_AS(rbf::regularity(f, pts, labels, emb, 0.0), InputError);
}

TEST_CASE("midpoint antisymmetry for odd targets") {
  Matrix x(2, 1), y(2, 1);
  x << -1.0, 1.0;
  y << -2.0, 2.0;
  const auto f = rbf::fit(x, y, 0.9);
  Vector mid(1);
  mid << 0.0;
  CHECK(std::abs(f.eval(mid)(0)) <= 1e-12);
  Vector a(1), b(1);
  a << 0.37;
  b << -0.37;
  CHECK(f.eval(a)(0) == doctest::Approx(-f.eval(b)(0)));
}
