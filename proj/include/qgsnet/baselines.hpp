#pragma once

#include <cstdint>
#include <vector>

#include "qgsnet/residual.hpp"
#include "qgsnet/types.hpp"

namespace qgsnet {

struct EbpConfig {
  double learning_rate = 1e-3;
  int max_epochs = 2000;
  double grad_tol = 1e-8;  // inf-norm stop
  std::uint64_t seed = 0;
  /// Halve the learning rate and retry the step whenever it would increase f.
  bool halve_on_increase = true;
};

struct GaConfig {
  int population = 200;
  int generations = 300;
  double crossover_rate = 0.8;
  double mutation_sigma_init = 0.25;
  int elitism = 2;
  std::uint64_t seed = 0;
  double init_sigma = 0.5;
  /// Generations without best-f progress before the mutation sigma halves.
  int stall_window = 10;
};

struct TrainResult {
  Vec x;
  std::vector<double> history;  // f per epoch / best f per generation
};

/// Training diverged (f blew up or went non-finite); names the epoch.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(int epoch, double f);
  int epoch() const { return epoch_; }

 private:
  int epoch_;
};

/// Steepest descent on f: x <- x - eta * grad f(x) until grad_tol or
/// max_epochs. history[0] is f(x0).
TrainResult train_ebp(const ResidualModel& model, const Vec& x0, const EbpConfig& cfg);

/// Real-valued GA: roulette selection over shifted-positive fitness -f,
/// scattered (per-gene uniform mask) crossover, Gaussian mutation with
/// stall-triggered sigma decay, elitism. history is best f per generation,
/// non-increasing when elitism >= 1.
TrainResult train_ga(const ResidualModel& model, const GaConfig& cfg);

}  // namespace qgsnet
