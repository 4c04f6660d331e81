#pragma once

#include <functional>
#include <utility>

#include "qgsnet/dataset.hpp"
#include "qgsnet/network.hpp"
#include "qgsnet/types.hpp"

namespace qgsnet {

/// A smooth residual system h : R^n -> R^m whose roots are sought by the
/// gradient flow xdot = -Dh(x)^T h(x). Implementations must be pure: every
/// method is a function of x only, safe to call concurrently.
class ResidualModel {
 public:
  virtual ~ResidualModel() = default;

  virtual Eigen::Index param_dim() const = 0;
  virtual Eigen::Index residual_dim() const = 0;

  virtual Vec residuals(const Vec& x) const = 0;
  virtual Mat jacobian(const Vec& x) const = 0;

  /// Dh(x)^T h(x), the gradient of the objective. The default multiplies the
  /// materialized Jacobian; subclasses may use a cheaper equivalent route.
  virtual Vec gradient(const Vec& x) const;

  /// f(x) = 0.5 * ||h(x)||^2.
  double objective(const Vec& x) const;
};

/// Central-difference Jacobian, column by column. Test oracle and fallback
/// for models without an analytic Jacobian.
Mat jacobian_fd(const ResidualModel& model, const Vec& x, double step = 1e-6);

/// Wraps a plain callable h (with optional analytic Jacobian) as a model.
/// Without an analytic Jacobian, jacobian() falls back to central differences.
class CallableResidual : public ResidualModel {
 public:
  using Fn = std::function<Vec(const Vec&)>;
  using JacFn = std::function<Mat(const Vec&)>;

  CallableResidual(Eigen::Index param_dim, Eigen::Index residual_dim, Fn h,
                   JacFn jac = nullptr, double fd_step = 1e-7);

  Eigen::Index param_dim() const override { return n_; }
  Eigen::Index residual_dim() const override { return m_; }
  Vec residuals(const Vec& x) const override;
  Mat jacobian(const Vec& x) const override;

 private:
  Eigen::Index n_;
  Eigen::Index m_;
  Fn h_;
  JacFn jac_;
  double fd_step_;
};

/// How the Jacobian treats the hidden state's dependence on the weights.
///   full_recurrent: exact derivative, sensitivities propagated through the
///                   recursion (P(k) = diag(psi'(a_k)) (dA + S P(k-1))).
///   one_step:       z(k-1) treated as a constant captured from the forward
///                   pass; cheaper, and the form the norm bounds apply to.
enum class SensitivityMode { full_recurrent, one_step };

const char* to_string(SensitivityMode mode);

/// The training-set residual h_i(x) = V psi(W u(i) + S z(i-1)) - y(i),
/// i = 1..N, with z free-running from z(0) = 0. Immutable and shareable.
class NetworkResidualSystem : public ResidualModel {
 public:
  NetworkResidualSystem(Dataset data, NetworkShape shape,
                        SensitivityMode mode = SensitivityMode::full_recurrent,
                        const Activation& act = tanh_activation());

  Eigen::Index param_dim() const override { return shape_.param_count(); }
  Eigen::Index residual_dim() const override {
    return static_cast<Eigen::Index>(data_.size()) * shape_.outputs;
  }

  Vec residuals(const Vec& x) const override;
  Mat jacobian(const Vec& x) const override;
  Mat jacobian(const Vec& x, SensitivityMode mode) const;

  /// Adjoint (backward-in-time) accumulation of Dh^T h; equal to the
  /// materialized product up to roundoff at a fraction of the cost.
  Vec gradient(const Vec& x) const override;

  const Dataset& dataset() const { return data_; }
  const NetworkShape& shape() const { return shape_; }
  SensitivityMode mode() const { return mode_; }
  const Activation& activation() const { return *act_; }

 private:
  Dataset data_;
  NetworkShape shape_;
  SensitivityMode mode_;
  const Activation* act_;
};

/// Generic constraint system C_I(y) < 0, C_E(y) = 0 turned into equalities
/// with squared slacks: residual = [C_I(y) + s^2; C_E(y)].
struct SlackAugmentedCsp {
  std::function<Vec(const Vec&)> inequality;  // C_I, may be null when l = 0
  std::function<Vec(const Vec&)> equality;    // C_E, may be null
  Eigen::Index state_dim = 0;                 // dim of y
  Eigen::Index ineq_dim = 0;                  // l
  Eigen::Index eq_dim = 0;
};

/// Evaluates [C_I(y) + (s_1^2,...,s_l^2)^T; C_E(y)].
Vec augment_with_slacks(const SlackAugmentedCsp& csp, const Vec& y, const Vec& s);

/// Adapts the augmented system to a ResidualModel over the stacked state
/// (y, s), with a finite-difference Jacobian.
CallableResidual slack_residual_model(const SlackAugmentedCsp& csp);

}  // namespace qgsnet
