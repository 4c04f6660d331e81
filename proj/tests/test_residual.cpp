#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "qgsnet/benchmarks.hpp"
#include "qgsnet/residual.hpp"

using namespace qgsnet;
using qgsnet::testing::random_dataset;
using qgsnet::testing::random_vec;

namespace {

NetworkShape random_shape(std::mt19937_64& rng, int n_max = 4, int m_max = 4, int t_max = 2) {
  std::uniform_int_distribution<int> n_d(1, n_max), m_d(1, m_max), t_d(1, t_max);
  return NetworkShape{n_d(rng), m_d(rng), t_d(rng)};
}

}  // namespace

TEST_CASE("residuals at x = 0 are the negated targets") {
  std::mt19937_64 rng(1);
  const NetworkShape shape{2, 3, 2};
  Dataset data = random_dataset(shape, 4, rng);
  NetworkResidualSystem sys(data, shape);
  const Vec h = sys.residuals(Vec::Zero(shape.param_count()));
  REQUIRE(h.size() == 8);
  for (int k = 0; k < 4; ++k) {
    CHECK((h.segment(2 * k, 2) + data.targets[k]).lpNorm<Eigen::Infinity>() == 0.0);
  }
}

TEST_CASE("residuals vanish on data generated by the network itself") {
  std::mt19937_64 rng(2);
  const NetworkShape shape{2, 3, 1};
  const Vec x_star = random_vec(shape.param_count(), rng);
  Dataset data = network_generated_dataset(shape, x_star, 8, 99);
  NetworkResidualSystem sys(data, shape);
  CHECK(sys.residuals(x_star).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK(sys.objective(x_star) < 1e-20);
  CHECK(sys.gradient(x_star).lpNorm<Eigen::Infinity>() < 1e-10);
}

TEST_CASE("objective is half the squared residual norm and half the sse") {
  std::mt19937_64 rng(3);
  const NetworkShape shape{2, 3, 2};
  Dataset data = random_dataset(shape, 5, rng);
  NetworkResidualSystem sys(data, shape);
  const Vec x = random_vec(shape.param_count(), rng);
  const double f = sys.objective(x);
  CHECK(f == doctest::Approx(0.5 * sys.residuals(x).squaredNorm()).epsilon(1e-15));
  CHECK(2.0 * f == doctest::Approx(sse(shape, x, data)).epsilon(1e-12));
  CHECK(sys.residuals(x).squaredNorm() == doctest::Approx(sse(shape, x, data)).epsilon(1e-12));
}

TEST_CASE("Jacobian at the origin is the zero matrix") {
  std::mt19937_64 rng(4);
  const NetworkShape shape{2, 3, 2};
  Dataset data = random_dataset(shape, 4, rng);
  NetworkResidualSystem sys(data, shape);
  const Mat jac = sys.jacobian(Vec::Zero(shape.param_count()));
  CHECK(jac.lpNorm<Eigen::Infinity>() == 0.0);
  CHECK(sys.gradient(Vec::Zero(shape.param_count())).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("analytic Jacobian matches central finite differences") {
  std::mt19937_64 rng(5);
  const NetworkShape shape{2, 3, 1};
  Dataset data = random_dataset(shape, 5, rng);
  NetworkResidualSystem sys(data, shape);
  const Vec x = random_vec(shape.param_count(), rng);
  const Mat jac = sys.jacobian(x);
  const Mat fd = jacobian_fd(sys, x, 1e-6);
  const double scale = 1.0 + fd.lpNorm<Eigen::Infinity>();
  CHECK((jac - fd).lpNorm<Eigen::Infinity>() / scale < 1e-6);
}

TEST_CASE("gradient consistency over random instances") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const NetworkShape shape = random_shape(rng);
    std::uniform_int_distribution<int> N_d(2, 8);
    Dataset data = random_dataset(shape, N_d(rng), rng);
    NetworkResidualSystem sys(data, shape);
    const Vec x = random_vec(shape.param_count(), rng);

    // Adjoint gradient vs the materialized product, then vs finite differences.
    const Vec g = sys.gradient(x);
    const Vec g_mat = sys.jacobian(x).transpose() * sys.residuals(x);
    CHECK((g - g_mat).lpNorm<Eigen::Infinity>() <= 1e-12 * (1.0 + g_mat.lpNorm<Eigen::Infinity>()));

    Vec g_fd(shape.param_count());
    Vec xp = x;
    for (int j = 0; j < shape.param_count(); ++j) {
      const double old = xp[j];
      xp[j] = old + 1e-6;
      const double fp = sys.objective(xp);
      xp[j] = old - 1e-6;
      const double fm = sys.objective(xp);
      xp[j] = old;
      g_fd[j] = (fp - fm) / 2e-6;
    }
    CHECK((g - g_fd).lpNorm<Eigen::Infinity>() / (1.0 + g_fd.lpNorm<Eigen::Infinity>()) < 1e-6);
  }
}

TEST_CASE("one_step and full_recurrent agree when S = 0") {
  std::mt19937_64 rng(7);
  const NetworkShape shape{2, 3, 1};
  Dataset data = random_dataset(shape, 5, rng);
  NetworkResidualSystem sys(data, shape);
  Vec x = random_vec(shape.param_count(), rng);
  x.tail(shape.hidden * shape.hidden).setZero();  // clear the S block
  const Mat full = sys.jacobian(x, SensitivityMode::full_recurrent);
  const Mat one = sys.jacobian(x, SensitivityMode::one_step);
  CHECK((full - one).lpNorm<Eigen::Infinity>() < 1e-14);
}

TEST_CASE("one_step mode is the fixed-state derivative") {
  std::mt19937_64 rng(8);
  const NetworkShape shape{1, 2, 1};
  Dataset data = random_dataset(shape, 4, rng);
  NetworkResidualSystem one(data, shape, SensitivityMode::one_step);
  const Vec x = random_vec(shape.param_count(), rng);
  const Vec g = one.gradient(x);
  const Vec g_mat = one.jacobian(x).transpose() * one.residuals(x);
  CHECK((g - g_mat).lpNorm<Eigen::Infinity>() <= 1e-12 * (1.0 + g_mat.lpNorm<Eigen::Infinity>()));
}

TEST_CASE("jacobian_fd recovers a linear map and converges at second order") {
  std::mt19937_64 rng(9);
  Mat A = qgsnet::testing::random_mat(3, 2, rng, 1.0);
  Vec b = random_vec(3, rng, 1.0);
  CallableResidual lin(2, 3, [A, b](const Vec& x) { return Vec(A * x - b); });

  const Vec x = random_vec(2, rng, 1.0);
  CHECK((jacobian_fd(lin, x, 1e-5) - A).lpNorm<Eigen::Infinity>() < 1e-9);

  // Quadratic residual: halving the step shrinks the error about 4x.
  CallableResidual quad(1, 1, [](const Vec& v) { return Vec::Constant(1, v[0] * v[0] * v[0]); });
  Vec p = Vec::Constant(1, 0.7);
  const double exact = 3.0 * 0.7 * 0.7;
  const double e1 = std::abs(jacobian_fd(quad, p, 1e-3)(0, 0) - exact);
  const double e2 = std::abs(jacobian_fd(quad, p, 5e-4)(0, 0) - exact);
  CHECK(e2 < e1 / 3.0);
  CHECK(e2 > e1 / 5.0);
  CHECK_THROWS_AS(jacobian_fd(quad, p, 0.0), std::invalid_argument);
}

TEST_CASE("slack augmentation") {
  SUBCASE("scalar inequality with slack") {
    SlackAugmentedCsp csp;
    csp.state_dim = 1;
    csp.ineq_dim = 1;
    csp.inequality = [](const Vec& y) { return Vec::Constant(1, y[0] - 1.0); };
    const Vec r = augment_with_slacks(csp, Vec::Zero(1), Vec::Constant(1, 1.0));
    REQUIRE(r.size() == 1);
    CHECK(r[0] == 0.0);  // (0 - 1) + 1^2
  }
  SUBCASE("no inequalities leaves the equality residual unchanged") {
    SlackAugmentedCsp csp;
    csp.state_dim = 2;
    csp.eq_dim = 2;
    csp.equality = [](const Vec& y) { return y; };
    Vec y(2);
    y << 3.0, -1.0;
    const Vec r = augment_with_slacks(csp, y, Vec(0));
    CHECK((r - y).lpNorm<Eigen::Infinity>() == 0.0);
  }
  SUBCASE("scalar equality at the root") {
    SlackAugmentedCsp csp;
    csp.state_dim = 1;
    csp.eq_dim = 1;
    csp.equality = [](const Vec& y) { return y; };
    CHECK(augment_with_slacks(csp, Vec::Zero(1), Vec(0))[0] == 0.0);
  }
  SUBCASE("dimension mismatch throws") {
    SlackAugmentedCsp csp;
    csp.state_dim = 1;
    csp.ineq_dim = 1;
    csp.inequality = [](const Vec& y) { return y; };
    CHECK_THROWS_AS(augment_with_slacks(csp, Vec::Zero(1), Vec(0)), std::invalid_argument);
  }
  SUBCASE("as a residual model: roots satisfy the inequality") {
    SlackAugmentedCsp csp;
    csp.state_dim = 1;
    csp.ineq_dim = 1;
    csp.inequality = [](const Vec& y) { return Vec::Constant(1, y[0] - 1.0); };
    CallableResidual model = slack_residual_model(csp);
    Vec x(2);
    x << 0.0, 1.0;  // y = 0, s = 1
    CHECK(model.residuals(x)[0] == 0.0);
    CHECK(model.objective(x) == 0.0);
  }
}
