#include "qgsnet/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace qgsnet {

DivergenceError::DivergenceError(int epoch, double f)
    : std::runtime_error("training diverged at epoch " + std::to_string(epoch) +
                         " (f = " + std::to_string(f) + ")"),
      epoch_(epoch) {}

TrainResult train_ebp(const ResidualModel& model, const Vec& x0, const EbpConfig& cfg) {
  if (cfg.learning_rate <= 0) {
    throw std::invalid_argument("learning rate must be positive");
  }
  if (cfg.max_epochs < 1) {
    throw std::invalid_argument("max_epochs must be >= 1");
  }

  TrainResult out;
  out.x = x0;
  double eta = cfg.learning_rate;
  double f = model.objective(out.x);
  out.history.push_back(f);

  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    const Vec grad = model.gradient(out.x);
    if (grad.lpNorm<Eigen::Infinity>() < cfg.grad_tol) break;

    Vec x_next = out.x - eta * grad;
    double f_next = std::numeric_limits<double>::quiet_NaN();
    try {
      f_next = model.objective(x_next);
    } catch (const NumericError&) {
    }

    if (cfg.halve_on_increase) {
      while (!(f_next <= f) && eta > 1e-18) {
        eta *= 0.5;
        x_next = out.x - eta * grad;
        try {
          f_next = model.objective(x_next);
        } catch (const NumericError&) {
          f_next = std::numeric_limits<double>::quiet_NaN();
        }
      }
      if (!(f_next <= f)) {
        throw DivergenceError(epoch, f_next);
      }
    } else if (!std::isfinite(f_next) || f_next > 1e12 * (1.0 + f)) {
      throw DivergenceError(epoch, f_next);
    }

    out.x = std::move(x_next);
    f = f_next;
    out.history.push_back(f);
  }
  return out;
}

TrainResult train_ga(const ResidualModel& model, const GaConfig& cfg) {
  if (cfg.population < 2) {
    throw std::invalid_argument("GA population must be >= 2");
  }
  if (cfg.crossover_rate < 0 || cfg.crossover_rate > 1) {
    throw std::invalid_argument("crossover rate must lie in [0, 1]");
  }
  if (cfg.elitism < 0 || cfg.elitism > cfg.population) {
    throw std::invalid_argument("elitism must lie in [0, population]");
  }

  const Eigen::Index dim = model.param_dim();
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> init(0.0, cfg.init_sigma);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  std::vector<Vec> pop(cfg.population, Vec(dim));
  for (Vec& ind : pop) {
    for (Eigen::Index i = 0; i < dim; ++i) ind[i] = init(rng);
  }

  auto eval = [&model](const Vec& ind) {
    try {
      const double f = model.objective(ind);
      return std::isfinite(f) ? f : std::numeric_limits<double>::infinity();
    } catch (const NumericError&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  std::vector<double> fvals(cfg.population);
  std::vector<int> order(cfg.population);
  TrainResult out;
  double sigma = cfg.mutation_sigma_init;
  int stall = 0;
  double best_so_far = std::numeric_limits<double>::infinity();
  Vec best_x = pop.front();

  for (int gen = 0; gen < cfg.generations; ++gen) {
    for (int i = 0; i < cfg.population; ++i) fvals[i] = eval(pop[i]);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&fvals](int a, int b) { return fvals[a] < fvals[b]; });

    if (fvals[order[0]] < best_so_far) {
      best_so_far = fvals[order[0]];
      best_x = pop[order[0]];
      stall = 0;
    } else if (++stall >= cfg.stall_window && cfg.stall_window > 0) {
      sigma *= 0.5;
      stall = 0;
    }
    out.history.push_back(best_so_far);

    // Roulette weights: fitness -f shifted to be positive.
    const double worst = fvals[order.back()];
    std::vector<double> weights(cfg.population);
    double total = 0.0;
    for (int i = 0; i < cfg.population; ++i) {
      const double w = std::isfinite(worst) ? (worst - fvals[i]) : (std::isfinite(fvals[i]) ? 1.0 : 0.0);
      weights[i] = w + 1e-12;
      total += weights[i];
    }
    auto spin = [&]() {
      double r = uniform(rng) * total;
      for (int i = 0; i < cfg.population; ++i) {
        r -= weights[i];
        if (r <= 0) return i;
      }
      return cfg.population - 1;
    };

    std::vector<Vec> next;
    next.reserve(cfg.population);
    for (int e = 0; e < cfg.elitism; ++e) next.push_back(pop[order[e]]);
    while (static_cast<int>(next.size()) < cfg.population) {
      const Vec& pa = pop[spin()];
      const Vec& pb = pop[spin()];
      Vec child(dim);
      if (uniform(rng) < cfg.crossover_rate) {
        for (Eigen::Index i = 0; i < dim; ++i) {
          child[i] = (uniform(rng) < 0.5) ? pa[i] : pb[i];  // scattered mask
        }
      } else {
        child = pa;
      }
      for (Eigen::Index i = 0; i < dim; ++i) child[i] += sigma * noise(rng);
      next.push_back(std::move(child));
    }
    pop.swap(next);
  }

  // Final sweep so the returned individual reflects the last generation too.
  for (int i = 0; i < cfg.population; ++i) {
    const double f = eval(pop[i]);
    if (f < best_so_far) {
      best_so_far = f;
      best_x = pop[i];
    }
  }
  out.x = std::move(best_x);
  if (!out.history.empty()) out.history.back() = std::min(out.history.back(), best_so_far);
  return out;
}

}  // namespace qgsnet
