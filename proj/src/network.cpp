#include "qgsnet/network.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qgsnet {

namespace {

double tanh_f(double a) { return std::tanh(a); }
double tanh_df(double a) {
  const double th = std::tanh(a);
  return 1.0 - th * th;
}

}  // namespace

const Activation& tanh_activation() {
  static const Activation act{&tanh_f, &tanh_df, "tanh"};
  return act;
}

void validate_shape(const NetworkShape& shape) {
  if (shape.inputs < 1 || shape.hidden < 1 || shape.outputs < 1) {
    throw std::invalid_argument("network shape requires inputs, hidden and outputs >= 1");
  }
}

ParamVector::ParamVector(NetworkShape s, Vec v) : shape(s), values(std::move(v)) {
  validate_shape(shape);
  if (values.size() != shape.param_count()) {
    throw std::invalid_argument("state vector length " + std::to_string(values.size()) +
                                " does not match param_count " +
                                std::to_string(shape.param_count()));
  }
  if (!values.allFinite()) {
    throw NumericError("state vector has non-finite entries");
  }
}

ParamVector pack(const Mat& V, const Mat& W, const Mat& S) {
  if (S.rows() != S.cols()) {
    throw std::invalid_argument("S must be square");
  }
  const int m = static_cast<int>(S.rows());
  if (V.cols() != m || W.rows() != m) {
    throw std::invalid_argument("V/W/S dimensions describe different hidden sizes");
  }
  const NetworkShape shape{static_cast<int>(W.cols()), m, static_cast<int>(V.rows())};
  validate_shape(shape);

  Vec x(shape.param_count());
  int pos = 0;
  for (int i = 0; i < m; ++i, pos += shape.outputs) {
    x.segment(pos, shape.outputs) = V.col(i);
  }
  for (int i = 0; i < m; ++i, pos += shape.inputs) {
    x.segment(pos, shape.inputs) = W.row(i).transpose();
  }
  for (int i = 0; i < m; ++i, pos += m) {
    x.segment(pos, m) = S.row(i).transpose();
  }
  return ParamVector(shape, std::move(x));
}

Weights unpack(const ParamVector& x) {
  return Weights{Mat(v_block(x.shape, x.values)), Mat(w_block(x.shape, x.values)),
                 Mat(s_block(x.shape, x.values))};
}

namespace {

void check_length(const NetworkShape& shape, const Vec& x) {
  if (x.size() != shape.param_count()) {
    throw std::invalid_argument("state vector length does not match shape");
  }
}

}  // namespace

Eigen::Map<const Mat> v_block(const NetworkShape& shape, const Vec& x) {
  check_length(shape, x);
  // Column i of V occupies entries [i*t, (i+1)*t), i.e. V is stored column-major.
  return {x.data(), shape.outputs, shape.hidden};
}

Eigen::Map<const RowMat> w_block(const NetworkShape& shape, const Vec& x) {
  check_length(shape, x);
  return {x.data() + shape.outputs * shape.hidden, shape.hidden, shape.inputs};
}

Eigen::Map<const RowMat> s_block(const NetworkShape& shape, const Vec& x) {
  check_length(shape, x);
  return {x.data() + shape.hidden * (shape.outputs + shape.inputs), shape.hidden, shape.hidden};
}

StepResult forward_step(const NetworkShape& shape, const Vec& x, const Vec& u,
                        const Vec& z_prev, const Activation& act) {
  check_length(shape, x);
  if (u.size() != shape.inputs || z_prev.size() != shape.hidden) {
    throw std::invalid_argument("input or hidden state dimension mismatch");
  }
  if (!u.allFinite() || !z_prev.allFinite()) {
    throw NumericError("non-finite input to forward_step");
  }
  Vec a = w_block(shape, x) * u + s_block(shape, x) * z_prev;
  Vec z = a.unaryExpr([&act](double v) { return act.f(v); });
  Vec y = v_block(shape, x) * z;
  return {std::move(z), std::move(y)};
}

SimResult simulate_sequence(const NetworkShape& shape, const Vec& x,
                            const std::vector<Vec>& inputs, const Vec& z0,
                            const Activation& act) {
  SimResult result;
  result.outputs.reserve(inputs.size());
  result.states.reserve(inputs.size());
  Vec z = z0;
  for (const Vec& u : inputs) {
    StepResult step = forward_step(shape, x, u, z, act);
    z = step.z;
    result.states.push_back(std::move(step.z));
    result.outputs.push_back(std::move(step.y));
  }
  return result;
}

SimResult simulate_sequence(const NetworkShape& shape, const Vec& x,
                            const std::vector<Vec>& inputs, const Activation& act) {
  return simulate_sequence(shape, x, inputs, Vec::Zero(shape.hidden), act);
}

double sse(const NetworkShape& shape, const Vec& x, const Dataset& data,
           const Activation& act) {
  if (data.size() == 0) {
    throw std::domain_error("sse over an empty dataset");
  }
  if (data.input_dim() != shape.inputs || data.output_dim() != shape.outputs) {
    throw std::invalid_argument("dataset dimensions do not match network shape");
  }
  SimResult sim = simulate_sequence(shape, x, data.inputs, act);
  double total = 0.0;
  for (int k = 0; k < data.size(); ++k) {
    total += (sim.outputs[k] - data.targets[k]).squaredNorm();
  }
  return total;
}

}  // namespace qgsnet
