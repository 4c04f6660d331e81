#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "helpers.hpp"
#include "qgsnet/benchmarks.hpp"
#include "qgsnet/residual.hpp"

using namespace qgsnet;

TEST_CASE("example1 plant hand values") {
  CHECK(step_example1(0.0, 0.0, 0.0) == 0.0);
  CHECK(step_example1(1.0, 1.0, 0.0) == doctest::Approx(1.25 / 3.0).epsilon(1e-15));
  CHECK(step_example1(1.0, 1.0, 0.5) == doctest::Approx(1.25 / 3.0 + 0.5).epsilon(1e-15));
}

TEST_CASE("example2 plant hand values") {
  std::array<double, 10> lags{};
  CHECK(step_example2(lags, 0.0, 0.0) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(step_example2(lags, 1.0, 1.0) == doctest::Approx(1.6).epsilon(1e-15));
  lags[0] = 1.0;  // y(k) = 1, older lags zero
  CHECK(step_example2(lags, 0.0, 0.0) == doctest::Approx(0.4).epsilon(1e-15));
}

TEST_CASE("generated datasets have the right shape") {
  const Dataset d1 = generate_dataset(BenchmarkSystem::example1, 200, 7, Split::train);
  CHECK(d1.size() == 200);
  CHECK(d1.input_dim() == 4);
  CHECK(d1.output_dim() == 1);

  const Dataset d2 = generate_dataset(BenchmarkSystem::example2, 100, 7, Split::train);
  CHECK(d2.size() == 100);
  CHECK(d2.input_dim() == 15);
  CHECK(d2.output_dim() == 1);

  CHECK_THROWS_AS(generate_dataset(BenchmarkSystem::example1, 0, 1, Split::train),
                  std::invalid_argument);
}

TEST_CASE("dataset generation is deterministic and split-dependent") {
  const Dataset a = generate_dataset(BenchmarkSystem::example1, 50, 3, Split::train);
  const Dataset b = generate_dataset(BenchmarkSystem::example1, 50, 3, Split::train);
  const Dataset c = generate_dataset(BenchmarkSystem::example1, 50, 3, Split::test);
  for (int k = 0; k < 50; ++k) {
    CHECK((a.inputs[k] - b.inputs[k]).lpNorm<Eigen::Infinity>() == 0.0);
    CHECK((a.targets[k] - b.targets[k]).lpNorm<Eigen::Infinity>() == 0.0);
  }
  CHECK((a.inputs[0] - c.inputs[0]).lpNorm<Eigen::Infinity>() > 0.0);
}

TEST_CASE("regressor lags line up with the plant recursion") {
  // With u(k) = [q(k), q(k-1), y(k), y(k-1)] the target must equal
  // step_example1(y(k), y(k-1), q(k)).
  const Dataset d = generate_dataset(BenchmarkSystem::example1, 30, 5, Split::train);
  for (int k = 0; k < d.size(); ++k) {
    const Vec& u = d.inputs[k];
    CHECK(d.targets[k][0] == doctest::Approx(step_example1(u[2], u[3], u[0])).epsilon(1e-15));
  }
  // Consecutive rows shift the lag window by one.
  for (int k = 1; k < d.size(); ++k) {
    CHECK(d.inputs[k][1] == d.inputs[k - 1][0]);  // q(k-1)
    CHECK(d.inputs[k][3] == d.inputs[k - 1][2]);  // y(k-1)
    CHECK(d.inputs[k][2] == d.targets[k - 1][0]); // y(k) is the previous target
  }
}

TEST_CASE("example2 regressor lags line up") {
  const Dataset d = generate_dataset(BenchmarkSystem::example2, 40, 11, Split::train);
  for (int k = 0; k < d.size(); ++k) {
    const Vec& u = d.inputs[k];
    std::array<double, 10> lags{};
    lags[0] = u[10];  // y(k)
    // y(k-1..4) available in the regressor; deeper lags checked via shifting.
    for (int i = 1; i <= 4; ++i) lags[i] = u[10 + i];
    if (k >= 5) {
      for (int i = 5; i <= 9; ++i) lags[i] = d.inputs[k - i + 4][10 + 4];
      CHECK(d.targets[k][0] ==
            doctest::Approx(step_example2(lags, u[0], u[9])).epsilon(1e-12));
    }
  }
  for (int k = 1; k < d.size(); ++k) {
    for (int i = 1; i < 10; ++i) CHECK(d.inputs[k][i] == d.inputs[k - 1][i - 1]);  // q lags
    CHECK(d.inputs[k][10] == d.targets[k - 1][0]);
  }
}

TEST_CASE("example1 trajectories stay finite over long runs") {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> normal(0.0, 0.5);
  double y = 0.0, y_prev = 0.0;
  for (int k = 0; k < 10000; ++k) {
    double q = std::clamp(normal(rng), -1.5, 1.5);  // |q| <= 3 sigma
    const double y_next = step_example1(y, y_prev, q);
    CHECK(std::isfinite(y_next));
    y_prev = y;
    y = y_next;
  }
}

TEST_CASE("mse") {
  CHECK(mse(std::vector<double>{1.0, 1.0}, std::vector<double>{0.0, 0.0}) == 1.0);
  CHECK(mse(std::vector<double>{0.5}, std::vector<double>{0.0}) == 0.25);
  CHECK(mse(std::vector<double>{2.0, 3.0}, std::vector<double>{2.0, 3.0}) == 0.0);
  CHECK_THROWS_AS(mse(std::vector<double>{1.0}, std::vector<double>{}),
                  std::invalid_argument);
}

TEST_CASE("mse times N equals the sse of the corresponding residuals") {
  std::mt19937_64 rng(14);
  const NetworkShape shape{2, 3, 1};
  Dataset data = qgsnet::testing::random_dataset(shape, 7, rng);
  const Vec x = qgsnet::testing::random_vec(shape.param_count(), rng);
  SimResult sim = simulate_sequence(shape, x, data.inputs);
  const double m = mse(sim.outputs, data.targets);
  CHECK(m * data.size() == doctest::Approx(sse(shape, x, data)).epsilon(1e-12));
  NetworkResidualSystem sys(data, shape);
  CHECK(m * data.size() == doctest::Approx(sys.residuals(x).squaredNorm()).epsilon(1e-12));
}

TEST_CASE("generalization error percent") {
  std::vector<double> targets;
  std::vector<double> offset;
  for (int k = 0; k < 11; ++k) {
    const double y = -1.0 + 0.2 * k;  // spans [-1, 1]
    targets.push_back(y);
    offset.push_back(y + 0.01);
  }
  CHECK(generalization_error_pct(offset, targets) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(generalization_error_pct(targets, targets) == 0.0);

  std::vector<double> doubled;
  for (double y : targets) doubled.push_back(y + 0.02);
  CHECK(generalization_error_pct(doubled, targets) ==
        doctest::Approx(2.0 * generalization_error_pct(offset, targets)).epsilon(1e-12));

  std::vector<double> constant(5, 1.0);
  CHECK_THROWS_AS(generalization_error_pct(constant, constant), std::domain_error);
}

TEST_CASE("dataset CSV round trip") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "qgsnet_test_data";
  fs::create_directories(dir);
  const fs::path csv = dir / "d.csv";

  const Dataset d = generate_dataset(BenchmarkSystem::example1, 20, 9, Split::train);
  save_dataset(d, csv);
  CHECK(fs::exists(sidecar_path(csv)));
  CHECK(sidecar_path(csv).filename() == "d.json");

  const Dataset r = load_dataset(csv);
  REQUIRE(r.size() == d.size());
  for (int k = 0; k < d.size(); ++k) {
    CHECK((r.inputs[k] - d.inputs[k]).lpNorm<Eigen::Infinity>() == 0.0);
    CHECK((r.targets[k] - d.targets[k]).lpNorm<Eigen::Infinity>() == 0.0);
  }
  CHECK(r.meta.system == "example1");
  CHECK(r.meta.seed == 9);
  CHECK(r.meta.split == "train");
  fs::remove_all(dir);
}
