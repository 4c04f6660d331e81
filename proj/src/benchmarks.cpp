#include "qgsnet/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>
#include <stdexcept>

#include "qgsnet/network.hpp"

namespace qgsnet {

BenchmarkSystem parse_system(const std::string& name) {
  if (name == "example1") return BenchmarkSystem::example1;
  if (name == "example2") return BenchmarkSystem::example2;
  throw std::invalid_argument("unknown benchmark system: " + name);
}

const char* to_string(BenchmarkSystem system) {
  return system == BenchmarkSystem::example1 ? "example1" : "example2";
}

const char* to_string(Split split) { return split == Split::train ? "train" : "test"; }

double step_example1(double y_k, double y_km1, double q_k) {
  if (!std::isfinite(y_k) || !std::isfinite(y_km1) || !std::isfinite(q_k)) {
    throw NumericError("non-finite plant state");
  }
  const double denom = 1.0 + y_k * y_k + y_km1 * y_km1;
  return y_k * y_km1 * (y_k + 0.25) / denom + q_k;
}

double step_example2(const std::array<double, 10>& y_lags, double q_k, double q_km9) {
  double lag_sum = 0.0;
  for (int i = 1; i <= 9; ++i) lag_sum += y_lags[i];
  return 0.3 * y_lags[0] + 0.05 * y_lags[0] * lag_sum + 1.5 * q_km9 * q_k + 0.1;
}

int regressor_dim(BenchmarkSystem system) {
  return system == BenchmarkSystem::example1 ? 4 : 15;
}

namespace {

constexpr std::uint64_t kTestSeedSalt = 0x9e3779b97f4a7c15ULL;

std::uint64_t effective_seed(std::uint64_t seed, Split split) {
  if (split == Split::train) return seed;
  std::uint64_t z = seed ^ kTestSeedSalt;  // distinct input realization for test data
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  return z;
}

}  // namespace

Dataset generate_dataset(BenchmarkSystem system, int samples, std::uint64_t seed, Split split) {
  if (samples < 1) {
    throw std::invalid_argument("dataset needs at least one sample");
  }
  const int order = system == BenchmarkSystem::example1 ? 2 : 10;
  const int n = regressor_dim(system);

  std::mt19937_64 rng(effective_seed(seed, split));
  std::normal_distribution<double> input(0.0, 0.5);

  // Lag buffers, most recent first: q[0] = q(k), y[0] = y(k).
  std::deque<double> q(order, 0.0);
  std::deque<double> y(order, 0.0);

  Dataset data;
  data.inputs.reserve(samples);
  data.targets.reserve(samples);

  const int total = samples + order;  // warm-up discarded
  for (int k = 0; k < total; ++k) {
    const double q_k = input(rng);
    q.push_front(q_k);
    q.pop_back();

    double y_next = 0.0;
    if (system == BenchmarkSystem::example1) {
      y_next = step_example1(y[0], y[1], q[0]);
    } else {
      std::array<double, 10> lags{};
      for (int i = 0; i < 10; ++i) lags[i] = y[i];
      y_next = step_example2(lags, q[0], q[9]);
    }

    if (k >= order) {
      Vec u(n);
      if (system == BenchmarkSystem::example1) {
        u << q[0], q[1], y[0], y[1];
      } else {
        for (int i = 0; i < 10; ++i) u[i] = q[i];
        for (int i = 0; i < 5; ++i) u[10 + i] = y[i];
      }
      data.inputs.push_back(std::move(u));
      data.targets.push_back(Vec::Constant(1, y_next));
    }

    y.push_front(y_next);
    y.pop_back();
  }

  data.meta.system = to_string(system);
  data.meta.seed = seed;
  data.meta.samples = samples;
  data.meta.split = to_string(split);
  data.meta.inputs = n;
  data.meta.outputs = 1;
  validate_dataset(data);
  return data;
}

Dataset network_generated_dataset(const NetworkShape& shape, const Vec& x, int samples,
                                  std::uint64_t seed, double input_sigma) {
  if (samples < 1) {
    throw std::invalid_argument("dataset needs at least one sample");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> input(0.0, input_sigma);
  Dataset data;
  data.inputs.reserve(samples);
  for (int k = 0; k < samples; ++k) {
    Vec u(shape.inputs);
    for (int i = 0; i < shape.inputs; ++i) u[i] = input(rng);
    data.inputs.push_back(std::move(u));
  }
  SimResult sim = simulate_sequence(shape, x, data.inputs);
  data.targets = std::move(sim.outputs);
  data.meta.system = "network";
  data.meta.seed = seed;
  data.meta.samples = samples;
  data.meta.inputs = shape.inputs;
  data.meta.outputs = shape.outputs;
  return data;
}

double mse(const std::vector<double>& predictions, const std::vector<double>& targets) {
  if (predictions.size() != targets.size()) {
    throw std::invalid_argument("prediction/target length mismatch");
  }
  if (predictions.empty()) {
    throw std::invalid_argument("mse needs at least one sample");
  }
  double acc = 0.0;
  for (std::size_t k = 0; k < predictions.size(); ++k) {
    const double e = predictions[k] - targets[k];
    acc += e * e;
  }
  return acc / static_cast<double>(predictions.size());
}

double mse(const std::vector<Vec>& predictions, const std::vector<Vec>& targets) {
  if (predictions.size() != targets.size()) {
    throw std::invalid_argument("prediction/target length mismatch");
  }
  if (predictions.empty()) {
    throw std::invalid_argument("mse needs at least one sample");
  }
  double acc = 0.0;
  for (std::size_t k = 0; k < predictions.size(); ++k) {
    acc += (predictions[k] - targets[k]).squaredNorm();
  }
  return acc / static_cast<double>(predictions.size());
}

double generalization_error_pct(const std::vector<double>& predictions,
                                const std::vector<double>& targets) {
  if (predictions.size() != targets.size()) {
    throw std::invalid_argument("prediction/target length mismatch");
  }
  if (predictions.empty()) {
    throw std::invalid_argument("generalization error needs at least one sample");
  }
  const auto [lo, hi] = std::minmax_element(targets.begin(), targets.end());
  const double range = *hi - *lo;
  if (range <= 0.0) {
    throw std::domain_error("target series is constant; percent-of-range is undefined");
  }
  double acc = 0.0;
  for (std::size_t k = 0; k < predictions.size(); ++k) {
    acc += std::abs(predictions[k] - targets[k]);
  }
  return acc / static_cast<double>(predictions.size()) / range * 100.0;
}

}  // namespace qgsnet
