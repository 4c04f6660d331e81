#include "qgsnet/residual.hpp"

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qgsnet {

Vec ResidualModel::gradient(const Vec& x) const {
  return jacobian(x).transpose() * residuals(x);
}

double ResidualModel::objective(const Vec& x) const {
  return 0.5 * residuals(x).squaredNorm();
}

Mat jacobian_fd(const ResidualModel& model, const Vec& x, double step) {
  if (step <= 0.0) {
    throw std::invalid_argument("finite-difference step must be positive");
  }
  Mat jac(model.residual_dim(), model.param_dim());
  Vec xp = x;
  for (Eigen::Index j = 0; j < model.param_dim(); ++j) {
    const double old = xp[j];
    xp[j] = old + step;
    const Vec hp = model.residuals(xp);
    xp[j] = old - step;
    const Vec hm = model.residuals(xp);
    xp[j] = old;
    jac.col(j) = (hp - hm) / (2.0 * step);
  }
  return jac;
}

CallableResidual::CallableResidual(Eigen::Index param_dim, Eigen::Index residual_dim, Fn h,
                                   JacFn jac, double fd_step)
    : n_(param_dim), m_(residual_dim), h_(std::move(h)), jac_(std::move(jac)),
      fd_step_(fd_step) {
  if (n_ < 1 || m_ < 1) {
    throw std::invalid_argument("residual system dimensions must be >= 1");
  }
}

Vec CallableResidual::residuals(const Vec& x) const {
  if (x.size() != n_) {
    throw std::invalid_argument("state dimension mismatch");
  }
  Vec h = h_(x);
  if (h.size() != m_) {
    throw std::invalid_argument("residual callable returned wrong dimension");
  }
  return h;
}

Mat CallableResidual::jacobian(const Vec& x) const {
  if (jac_) {
    return jac_(x);
  }
  return jacobian_fd(*this, x, fd_step_);
}

const char* to_string(SensitivityMode mode) {
  return mode == SensitivityMode::full_recurrent ? "full_recurrent" : "one_step";
}

NetworkResidualSystem::NetworkResidualSystem(Dataset data, NetworkShape shape,
                                             SensitivityMode mode, const Activation& act)
    : data_(std::move(data)), shape_(shape), mode_(mode), act_(&act) {
  validate_shape(shape_);
  validate_dataset(data_);
  if (data_.size() == 0) {
    throw std::invalid_argument("residual system needs a non-empty dataset");
  }
  if (data_.input_dim() != shape_.inputs || data_.output_dim() != shape_.outputs) {
    throw std::invalid_argument("dataset dimensions do not match network shape");
  }
}

Vec NetworkResidualSystem::residuals(const Vec& x) const {
  const int N = data_.size();
  const int t = shape_.outputs;
  const auto V = v_block(shape_, x);
  const auto W = w_block(shape_, x);
  const auto S = s_block(shape_, x);

  Vec h(static_cast<Eigen::Index>(N) * t);
  Vec z = Vec::Zero(shape_.hidden);
  Vec a(shape_.hidden);
  for (int k = 0; k < N; ++k) {
    a.noalias() = W * data_.inputs[k];
    a.noalias() += S * z;
    for (int i = 0; i < shape_.hidden; ++i) z[i] = act_->f(a[i]);
    h.segment(static_cast<Eigen::Index>(k) * t, t) = V * z - data_.targets[k];
  }
  if (!h.allFinite()) {
    throw NumericError("non-finite residual");
  }
  return h;
}

Mat NetworkResidualSystem::jacobian(const Vec& x) const { return jacobian(x, mode_); }

Mat NetworkResidualSystem::jacobian(const Vec& x, SensitivityMode mode) const {
  const int N = data_.size();
  const int n = shape_.inputs;
  const int m = shape_.hidden;
  const int t = shape_.outputs;
  const int np = shape_.param_count();
  const int w_off = t * m;
  const int s_off = t * m + m * n;

  const auto V = v_block(shape_, x);
  const auto W = w_block(shape_, x);
  const auto S = s_block(shape_, x);

  Mat jac = Mat::Zero(static_cast<Eigen::Index>(N) * t, np);
  Mat P = Mat::Zero(m, np);     // dz(k)/dx
  Mat Pnew = Mat::Zero(m, np);
  Vec z = Vec::Zero(m);
  Vec z_prev(m);
  Vec a(m);
  Vec dpsi(m);

  for (int k = 0; k < N; ++k) {
    z_prev = z;
    a.noalias() = W * data_.inputs[k];
    a.noalias() += S * z_prev;
    for (int i = 0; i < m; ++i) {
      z[i] = act_->f(a[i]);
      dpsi[i] = act_->df(a[i]);
    }

    if (mode == SensitivityMode::full_recurrent) {
      Pnew.noalias() = S * P;
    } else {
      Pnew.setZero();
    }
    // da_i/dx at fixed z_prev: row i touches only w_i (-> u(k)) and s_i (-> z_prev).
    for (int i = 0; i < m; ++i) {
      Pnew.row(i).segment(w_off + i * n, n) += data_.inputs[k].transpose();
      Pnew.row(i).segment(s_off + i * m, m) += z_prev.transpose();
      Pnew.row(i) *= dpsi[i];
    }
    P.swap(Pnew);

    auto rows = jac.middleRows(static_cast<Eigen::Index>(k) * t, t);
    rows.noalias() = V * P;
    // dh_k/dV: output j picks up z_i(k) at the j-th entry of V's column i.
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < t; ++j) {
        rows(j, i * t + j) += z[i];
      }
    }
  }
  if (!jac.allFinite()) {
    throw NumericError("non-finite Jacobian");
  }
  return jac;
}

Vec NetworkResidualSystem::gradient(const Vec& x) const {
  const int N = data_.size();
  const int n = shape_.inputs;
  const int m = shape_.hidden;
  const int t = shape_.outputs;
  const int w_off = t * m;
  const int s_off = t * m + m * n;

  const auto V = v_block(shape_, x);
  const auto W = w_block(shape_, x);
  const auto S = s_block(shape_, x);

  // Forward pass, keeping states, activation slopes and output errors.
  std::vector<Vec> zs(N + 1, Vec::Zero(m));
  std::vector<Vec> dpsis(N + 1);
  std::vector<Vec> errs(N + 1);
  Vec a(m);
  for (int k = 1; k <= N; ++k) {
    a.noalias() = W * data_.inputs[k - 1];
    a.noalias() += S * zs[k - 1];
    Vec z(m), dpsi(m);
    for (int i = 0; i < m; ++i) {
      z[i] = act_->f(a[i]);
      dpsi[i] = act_->df(a[i]);
    }
    errs[k] = V * z - data_.targets[k - 1];
    zs[k] = std::move(z);
    dpsis[k] = std::move(dpsi);
  }

  Vec grad = Vec::Zero(shape_.param_count());
  auto gV = Eigen::Map<Mat>(grad.data(), t, m);
  auto gW = Eigen::Map<RowMat>(grad.data() + w_off, m, n);
  auto gS = Eigen::Map<RowMat>(grad.data() + s_off, m, m);

  // Backward pass: mu(k) = dpsi(k) .* (V^T e(k) + S^T mu(k+1)), with the
  // recurrent term dropped in one_step mode.
  Vec mu = Vec::Zero(m);
  for (int k = N; k >= 1; --k) {
    Vec lambda = V.transpose() * errs[k];
    if (mode_ == SensitivityMode::full_recurrent) {
      lambda.noalias() += S.transpose() * mu;
    }
    mu = dpsis[k].cwiseProduct(lambda);
    gV.noalias() += errs[k] * zs[k].transpose();
    gW.noalias() += mu * data_.inputs[k - 1].transpose();
    gS.noalias() += mu * zs[k - 1].transpose();
  }
  if (!grad.allFinite()) {
    throw NumericError("non-finite gradient");
  }
  return grad;
}

Vec augment_with_slacks(const SlackAugmentedCsp& csp, const Vec& y, const Vec& s) {
  if (y.size() != csp.state_dim) {
    throw std::invalid_argument("state dimension mismatch in slack augmentation");
  }
  if (s.size() != csp.ineq_dim) {
    throw std::invalid_argument("one slack variable per inequality is required");
  }
  Vec out(csp.ineq_dim + csp.eq_dim);
  if (csp.ineq_dim > 0) {
    Vec ci = csp.inequality(y);
    if (ci.size() != csp.ineq_dim) {
      throw std::invalid_argument("C_I returned wrong dimension");
    }
    out.head(csp.ineq_dim) = ci + s.cwiseProduct(s);
  }
  if (csp.eq_dim > 0) {
    Vec ce = csp.equality(y);
    if (ce.size() != csp.eq_dim) {
      throw std::invalid_argument("C_E returned wrong dimension");
    }
    out.tail(csp.eq_dim) = ce;
  }
  return out;
}

CallableResidual slack_residual_model(const SlackAugmentedCsp& csp) {
  const Eigen::Index state_dim = csp.state_dim;
  return CallableResidual(
      csp.state_dim + csp.ineq_dim, csp.ineq_dim + csp.eq_dim,
      [csp, state_dim](const Vec& x) {
        return augment_with_slacks(csp, x.head(state_dim), x.tail(csp.ineq_dim));
      });
}

}  // namespace qgsnet
