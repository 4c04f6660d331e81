#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "qgsnet/dataset.hpp"
#include "qgsnet/network.hpp"
#include "qgsnet/types.hpp"

namespace qgsnet {

enum class BenchmarkSystem { example1, example2 };
enum class Split { train, test };

BenchmarkSystem parse_system(const std::string& name);
const char* to_string(BenchmarkSystem system);
const char* to_string(Split split);

/// Second-order plant:
/// y(k+1) = y(k) y(k-1) (y(k) + 0.25) / (1 + y(k)^2 + y(k-1)^2) + q(k).
double step_example1(double y_k, double y_km1, double q_k);

/// Tenth-order NARMA plant, lag sum running i = 1..9:
/// y(k+1) = 0.3 y(k) + 0.05 y(k) sum_{i=1..9} y(k-i) + 1.5 q(k-9) q(k) + 0.1.
/// y_lags holds [y(k), y(k-1), ..., y(k-9)].
double step_example2(const std::array<double, 10>& y_lags, double q_k, double q_km9);

/// Regressor width n: 4 for example1 ([q(k), q(k-1), y(k), y(k-1)]),
/// 15 for example2 ([q(k)..q(k-9), y(k)..y(k-4)]).
int regressor_dim(BenchmarkSystem system);

/// Drives the plant from zero initial conditions with i.i.d. N(0, 0.25)
/// inputs (sigma = 0.5), discards a warm-up of max-lag steps and emits N rows
/// (u(k), y(k+1)). Deterministic per (seed, split); the test split draws a
/// fresh input realization from a seed derived from the train seed.
Dataset generate_dataset(BenchmarkSystem system, int samples, std::uint64_t seed, Split split);

/// Dataset produced by a known network driven with N(0, sigma^2) inputs, so
/// the generating weights are an exact residual root. Used by realizability
/// checks and the rate suite.
Dataset network_generated_dataset(const NetworkShape& shape, const Vec& x, int samples,
                                  std::uint64_t seed, double input_sigma = 0.5);

/// Mean over samples of the squared error (e^T e for vector outputs).
double mse(const std::vector<double>& predictions, const std::vector<double>& targets);
double mse(const std::vector<Vec>& predictions, const std::vector<Vec>& targets);

/// Mean |error| as a percentage of the target range max(y) - min(y).
/// Throws std::domain_error for a constant target series.
double generalization_error_pct(const std::vector<double>& predictions,
                                const std::vector<double>& targets);

}  // namespace qgsnet
