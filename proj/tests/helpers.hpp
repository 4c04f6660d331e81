#pragma once

#include <random>

#include "qgsnet/benchmarks.hpp"
#include "qgsnet/dataset.hpp"
#include "qgsnet/network.hpp"
#include "qgsnet/residual.hpp"

namespace qgsnet::testing {

inline Vec random_vec(int dim, std::mt19937_64& rng, double sigma = 0.5) {
  std::normal_distribution<double> normal(0.0, sigma);
  Vec x(dim);
  for (int i = 0; i < dim; ++i) x[i] = normal(rng);
  return x;
}

inline Mat random_mat(int rows, int cols, std::mt19937_64& rng, double sigma = 0.5) {
  std::normal_distribution<double> normal(0.0, sigma);
  Mat m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = normal(rng);
  return m;
}

inline Dataset random_dataset(const NetworkShape& shape, int samples, std::mt19937_64& rng,
                              double sigma = 0.5) {
  Dataset data;
  for (int k = 0; k < samples; ++k) {
    data.inputs.push_back(random_vec(shape.inputs, rng, sigma));
    data.targets.push_back(random_vec(shape.outputs, rng, sigma));
  }
  data.meta.inputs = shape.inputs;
  data.meta.outputs = shape.outputs;
  data.meta.samples = samples;
  return data;
}

/// h(x) = x^2 - 1 in one variable: minima of f at x = +/-1, saddle at 0.
inline CallableResidual double_well() {
  return CallableResidual(
      1, 1, [](const Vec& x) { return Vec::Constant(1, x[0] * x[0] - 1.0); },
      [](const Vec& x) { return Mat::Constant(1, 1, 2.0 * x[0]); });
}

/// h(x) = x in one variable: single root at the origin, linear flow.
inline CallableResidual scalar_linear() {
  return CallableResidual(
      1, 1, [](const Vec& x) { return x; },
      [](const Vec&) { return Mat::Identity(1, 1); });
}

}  // namespace qgsnet::testing
