#pragma once

#include <vector>

#include "qgsnet/dataset.hpp"
#include "qgsnet/types.hpp"

namespace qgsnet {

/// Pointwise activation together with its derivative, both as functions of
/// the pre-activation value. The training theory assumes a smooth one-one
/// invertible function; tanh is the default everywhere.
struct Activation {
  double (*f)(double);
  double (*df)(double);
  const char* name;
};

const Activation& tanh_activation();

/// Dimensions of the three-layer fully recurrent network:
/// n inputs, m hidden nodes, t outputs.
struct NetworkShape {
  int inputs = 1;
  int hidden = 1;
  int outputs = 1;

  /// Total weight count n_p = m^2 + m*(n + t).
  int param_count() const { return hidden * hidden + hidden * (inputs + outputs); }

  bool operator==(const NetworkShape&) const = default;
};

void validate_shape(const NetworkShape& shape);

/// All network weights flattened into one state vector. The layout groups
/// weights per hidden node: the m columns of V (t entries each), then the m
/// rows of W (n entries each), then the m rows of S (m entries each).
struct ParamVector {
  NetworkShape shape;
  Vec values;

  /// Validates length against the shape and finiteness of every entry.
  ParamVector(NetworkShape s, Vec v);

  int size() const { return static_cast<int>(values.size()); }
};

struct Weights {
  Mat V;  // t x m, output layer
  Mat W;  // m x n, input layer
  Mat S;  // m x m, recurrent layer
};

/// Flattens (V, W, S) into the state vector. Throws std::invalid_argument
/// when the matrix dimensions are not consistent with a single shape.
ParamVector pack(const Mat& V, const Mat& W, const Mat& S);

/// Inverse of pack.
Weights unpack(const ParamVector& x);

// Zero-copy views of the weight blocks inside a flat state vector.
Eigen::Map<const Mat> v_block(const NetworkShape& shape, const Vec& x);
Eigen::Map<const RowMat> w_block(const NetworkShape& shape, const Vec& x);
Eigen::Map<const RowMat> s_block(const NetworkShape& shape, const Vec& x);

struct StepResult {
  Vec z;
  Vec y;
};

/// One step of the recursion z(k) = psi(W u(k) + S z(k-1)), y(k) = V z(k).
StepResult forward_step(const NetworkShape& shape, const Vec& x, const Vec& u,
                        const Vec& z_prev, const Activation& act = tanh_activation());

struct SimResult {
  std::vector<Vec> outputs;
  std::vector<Vec> states;
};

/// Iterates forward_step over the input sequence starting from z0.
SimResult simulate_sequence(const NetworkShape& shape, const Vec& x,
                            const std::vector<Vec>& inputs, const Vec& z0,
                            const Activation& act = tanh_activation());

/// Same, starting from the zero hidden state.
SimResult simulate_sequence(const NetworkShape& shape, const Vec& x,
                            const std::vector<Vec>& inputs,
                            const Activation& act = tanh_activation());

/// Sum of squared output errors over the dataset, hidden state free-running
/// from zero. Throws std::domain_error on an empty dataset.
double sse(const NetworkShape& shape, const Vec& x, const Dataset& data,
           const Activation& act = tanh_activation());

}  // namespace qgsnet
