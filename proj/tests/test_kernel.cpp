#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "okdmd/errors.hpp"
#include "okdmd/kernel.hpp"

using namespace okdmd;

namespace {

Eigen::VectorXd vec2(double a, double b) { return Eigen::Vector2d(a, b); }

}  // namespace

TEST_CASE("kernel values") {
  const KernelParams mu5{5.0};
  const KernelParams mu1{1.0};

  CHECK(eval_kernel(mu5, vec2(0, 0), vec2(1, 2)) == 1.0);
  CHECK(eval_kernel(mu1, vec2(1, 0), vec2(0, 1)) == 1.0);
  CHECK(eval_kernel(mu5, vec2(1, 2), vec2(1, 2)) == std::exp(1.0));

  // 1-D and higher-D inputs work the same way.
  Eigen::VectorXd x1(1), y1(1);
  x1 << 2.0;
  y1 << -3.0;
  CHECK(eval_kernel(mu1, x1, y1) == std::exp(-6.0));
}

TEST_CASE("kernel symmetry is exact") {
  const KernelParams params{2.5};
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd x(3), y(3);
    for (int i = 0; i < 3; ++i) {
      x(i) = normal(rng);
      y(i) = normal(rng);
    }
    CHECK(eval_kernel(params, x, y) == eval_kernel(params, y, x));
  }
}

TEST_CASE("kernel matrices are positive semidefinite") {
  const KernelParams params{5.0};
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;
  for (int m = 2; m <= 8; ++m) {
    std::vector<Eigen::VectorXd> points;
    for (int i = 0; i < m; ++i) {
      Eigen::VectorXd p(2);
      p << normal(rng), normal(rng);
      points.push_back(p);
    }
    Eigen::MatrixXd K(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) K(i, j) = eval_kernel(params, points[i], points[j]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(K);
    REQUIRE(eig.info() == Eigen::Success);
    CHECK(eig.eigenvalues().minCoeff() >= -1e-10 * eig.eigenvalues().maxCoeff());
  }
}

TEST_CASE("kernel difference values") {
  const KernelParams mu5{5.0};
  const KernelParams mu1{1.0};

  CHECK(eval_kernel_diff(mu5, vec2(0.7, -0.2), vec2(1, 1), vec2(1, 1)) == 0.0);
  CHECK(eval_kernel_diff(mu1, vec2(0, 0), vec2(3, -4), vec2(-2, 9)) == 0.0);
  CHECK(eval_kernel_diff(mu5, vec2(1, 0), vec2(0, 0), vec2(1, 0)) == std::exp(1.0 / 5.0) - 1.0);
}

TEST_CASE("kernel difference antisymmetry is exact") {
  const KernelParams params{1.5};
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd x(2), a(2), b(2);
    for (int i = 0; i < 2; ++i) {
      x(i) = normal(rng);
      a(i) = normal(rng);
      b(i) = normal(rng);
    }
    CHECK(eval_kernel_diff(params, x, a, b) == -eval_kernel_diff(params, x, b, a));
  }
}

TEST_CASE("kernel argument checks") {
  const KernelParams params{5.0};
  Eigen::VectorXd x2(2), x3(3), empty(0);
  x2 << 1, 2;
  x3 << 1, 2, 3;

  CHECK_THROWS_AS(eval_kernel(params, x2, x3), InputError);
  CHECK_THROWS_AS(eval_kernel(params, empty, empty), InputError);
  CHECK_THROWS_AS(eval_kernel(KernelParams{0.0}, x2, x2), InputError);
  CHECK_THROWS_AS(eval_kernel(KernelParams{-1.0}, x2, x2), InputError);
  CHECK_THROWS_AS(eval_kernel_diff(params, x2, x3, x2), InputError);
  CHECK_THROWS_AS(eval_kernel_diff(params, x2, x2, x3), InputError);
}
