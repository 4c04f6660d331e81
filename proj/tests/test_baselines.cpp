#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "qgsnet/baselines.hpp"

using namespace qgsnet;

TEST_CASE("ebp hand iteration: eta = 0.5 halves x each step") {
  auto model = qgsnet::testing::scalar_linear();  // grad f = x
  EbpConfig cfg;
  cfg.learning_rate = 0.5;
  cfg.max_epochs = 3;
  cfg.grad_tol = 1e-300;
  cfg.halve_on_increase = false;
  const TrainResult res = train_ebp(model, Vec::Constant(1, 1.0), cfg);
  CHECK(res.x[0] == 0.125);
  REQUIRE(res.history.size() == 4);
  CHECK(res.history[0] == 0.5);          // f(1) = 1/2
  CHECK(res.history[3] == 0.5 * 0.125 * 0.125);
}

TEST_CASE("ebp diverges for eta = 3 on the linear system") {
  auto model = qgsnet::testing::scalar_linear();
  EbpConfig cfg;
  cfg.learning_rate = 3.0;  // |1 - eta| = 2 > 1, iterates blow up
  cfg.max_epochs = 200;
  cfg.halve_on_increase = false;
  CHECK_THROWS_AS(train_ebp(model, Vec::Constant(1, 1.0), cfg), DivergenceError);
  try {
    train_ebp(model, Vec::Constant(1, 1.0), cfg);
  } catch (const DivergenceError& e) {
    CHECK(e.epoch() >= 1);
  }
}

TEST_CASE("ebp halving rescues an oversized learning rate") {
  auto model = qgsnet::testing::scalar_linear();
  EbpConfig cfg;
  cfg.learning_rate = 3.0;
  cfg.max_epochs = 400;
  cfg.grad_tol = 1e-10;
  cfg.halve_on_increase = true;
  const TrainResult res = train_ebp(model, Vec::Constant(1, 1.0), cfg);
  CHECK(std::abs(res.x[0]) < 1e-9);
}

TEST_CASE("ebp at a root returns immediately with a single history entry") {
  auto model = qgsnet::testing::double_well();
  EbpConfig cfg;
  cfg.grad_tol = 1e-12;
  const TrainResult res = train_ebp(model, Vec::Constant(1, 1.0), cfg);
  CHECK(res.history.size() == 1);
  CHECK(res.x[0] == 1.0);
}

TEST_CASE("ebp descends monotonically with a small learning rate") {
  std::mt19937_64 rng(41);
  const NetworkShape shape{2, 3, 1};
  NetworkResidualSystem sys(qgsnet::testing::random_dataset(shape, 5, rng), shape);
  EbpConfig cfg;
  cfg.learning_rate = 1e-2;
  cfg.max_epochs = 200;
  cfg.halve_on_increase = false;
  const TrainResult res =
      train_ebp(sys, qgsnet::testing::random_vec(shape.param_count(), rng), cfg);
  for (std::size_t i = 1; i < res.history.size(); ++i) {
    CHECK(res.history[i] < res.history[i - 1]);
  }
}

TEST_CASE("ga finds a double-well root") {
  auto model = qgsnet::testing::double_well();
  GaConfig cfg;
  cfg.population = 50;
  cfg.generations = 100;
  cfg.mutation_sigma_init = 0.3;
  cfg.elitism = 2;
  cfg.seed = 1234;
  const TrainResult res = train_ga(model, cfg);
  CHECK(std::abs(std::abs(res.x[0]) - 1.0) < 0.05);
  CHECK(res.history.size() == 100);
}

TEST_CASE("ga best-f history is monotone non-increasing") {
  std::mt19937_64 rng(42);
  const NetworkShape shape{1, 2, 1};
  NetworkResidualSystem sys(qgsnet::testing::random_dataset(shape, 4, rng), shape);
  GaConfig cfg;
  cfg.population = 30;
  cfg.generations = 50;
  cfg.seed = 5;
  const TrainResult res = train_ga(sys, cfg);
  for (std::size_t i = 1; i < res.history.size(); ++i) {
    CHECK(res.history[i] <= res.history[i - 1]);
  }
}

TEST_CASE("ga is bit-reproducible given the seed") {
  auto model = qgsnet::testing::double_well();
  GaConfig cfg;
  cfg.population = 20;
  cfg.generations = 30;
  cfg.seed = 77;
  const TrainResult a = train_ga(model, cfg);
  const TrainResult b = train_ga(model, cfg);
  CHECK(a.x[0] == b.x[0]);
  CHECK(a.history == b.history);
}

TEST_CASE("full elitism freezes the population") {
  auto model = qgsnet::testing::double_well();
  GaConfig cfg;
  cfg.population = 10;
  cfg.generations = 25;
  cfg.elitism = 10;
  cfg.seed = 9;
  const TrainResult res = train_ga(model, cfg);
  for (std::size_t i = 1; i < res.history.size(); ++i) {
    CHECK(res.history[i] == res.history[0]);
  }
}

TEST_CASE("ga config validation") {
  auto model = qgsnet::testing::double_well();
  GaConfig cfg;
  cfg.population = 1;
  CHECK_THROWS_AS(train_ga(model, cfg), std::invalid_argument);
  cfg = {};
  cfg.crossover_rate = 1.5;
  CHECK_THROWS_AS(train_ga(model, cfg), std::invalid_argument);
  EbpConfig ecfg;
  ecfg.learning_rate = 0.0;
  CHECK_THROWS_AS(train_ebp(model, Vec::Zero(1), ecfg), std::invalid_argument);
}
