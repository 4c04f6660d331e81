#include "qgsnet/stability.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qgsnet {

DescentCheck lyapunov_descent_check(const ResidualModel& model, const Vec& x,
                                    double rel_tol) {
  if (!x.allFinite()) {
    throw NumericError("non-finite point in lyapunov_descent_check");
  }
  DescentCheck out;
  const Vec grad = model.gradient(x);
  out.analytic = -2.0 * grad.squaredNorm();

  const Vec field = -grad;
  auto lyap = [&model](const Vec& p) { return model.residuals(p).squaredNorm(); };
  const double scale = 1.0 + field.lpNorm<Eigen::Infinity>();
  const double delta = 1e-6 * (1.0 + x.lpNorm<Eigen::Infinity>()) / scale;
  out.numeric = (lyap(x + delta * field) - lyap(x - delta * field)) / (2.0 * delta);

  const double tol_ok = 1e-12 * (1.0 + lyap(x));
  const double agree_to = rel_tol * std::max(std::abs(out.analytic), std::abs(out.numeric));
  const bool agree = std::abs(out.analytic - out.numeric) <= std::max(agree_to, tol_ok);
  out.ok = agree && out.analytic <= tol_ok && out.numeric <= agree_to + tol_ok;
  return out;
}

std::vector<RatePoint> exponential_rate_check(const ResidualModel& model, const Trace& trace,
                                              double margin, double sigma_floor) {
  std::vector<RatePoint> out;
  out.reserve(trace.points.size());
  for (const TracePoint& p : trace.points) {
    if (p.x.size() == 0) continue;  // state not recorded
    RatePoint rp;
    rp.t = p.t;
    const Vec h = model.residuals(p.x);
    const Mat jac = model.jacobian(p.x);
    rp.lyapunov = h.squaredNorm();
    rp.vdot = -2.0 * (jac.transpose() * h).squaredNorm();

    Eigen::SelfAdjointEigenSolver<Mat> eig(Mat(jac * jac.transpose()));
    if (eig.info() != Eigen::Success) {
      rp.skipped = true;
      out.push_back(rp);
      continue;
    }
    rp.sigma_min = eig.eigenvalues().minCoeff();
    if (rp.sigma_min <= sigma_floor) {
      rp.skipped = true;  // repeated measurements make Dh Dh^T singular
      out.push_back(rp);
      continue;
    }
    rp.ok = rp.vdot <= -(1.0 - margin) * rp.sigma_min * rp.lyapunov;
    out.push_back(rp);
  }
  return out;
}

double perturbation_bound(const BoundInputs& b) {
  if (b.samples < 1 || b.hidden < 1 || b.inputs < 1) {
    throw std::invalid_argument("bound inputs need N, m, n >= 1");
  }
  if (b.input_bound < 0 || b.output_bound < 0) {
    throw std::invalid_argument("norm bounds must be nonnegative");
  }
  const double N = static_cast<double>(b.samples);
  const double m = static_cast<double>(b.hidden);
  const double n = static_cast<double>(b.inputs);
  const double inner = std::sqrt(m) + std::sqrt(b.output_bound * (b.input_bound * std::sqrt(n) + m));
  return N * std::sqrt(N * m) * inner * inner;
}

PerturbedDescent perturbed_descent_test(const ResidualModel& model, const Vec& x,
                                        const Vec& g) {
  if (g.size() != model.param_dim()) {
    throw std::invalid_argument("perturbation dimension mismatch");
  }
  const Vec grad = model.gradient(x);
  if (grad.norm() <= 0.0) {
    throw std::invalid_argument("perturbed_descent_test requires a non-equilibrium point");
  }
  PerturbedDescent out;
  out.vdot = -grad.squaredNorm() + g.dot(grad);
  out.ok = out.vdot < 0.0;
  return out;
}

NormBoundReport norm_bound_checks(const NetworkResidualSystem& sys, const Vec& x,
                                  double u_bound, double y_bound) {
  const NetworkShape& shape = sys.shape();
  if (shape.outputs != 1) {
    throw std::invalid_argument("norm bounds are derived for single-output networks");
  }
  const Dataset& data = sys.dataset();
  for (int k = 0; k < data.size(); ++k) {
    if (data.inputs[k].norm() > u_bound * (1.0 + 1e-12) ||
        data.targets[k].norm() > y_bound * (1.0 + 1e-12)) {
      throw std::invalid_argument("dataset violates the stated input/output bounds");
    }
  }

  const double N = static_cast<double>(data.size());
  const double m = static_cast<double>(shape.hidden);
  const double n = static_cast<double>(shape.inputs);
  const double xn = x.norm();

  NormBoundReport rep;
  rep.h_norm = sys.residuals(x).norm();
  rep.h_bound = N * (m * xn + y_bound);
  rep.h_ok = rep.h_norm <= rep.h_bound;

  const Mat jac = sys.jacobian(x, SensitivityMode::one_step);
  rep.jac_fro = jac.norm();
  Eigen::SelfAdjointEigenSolver<Mat> eig(Mat(jac.transpose() * jac));
  rep.jac_two = eig.info() == Eigen::Success ? std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff()))
                                             : rep.jac_fro;
  rep.jac_bound = std::sqrt(N * m) * (1.0 + std::sqrt(n) * u_bound * xn + m * xn);
  rep.fro_ok = rep.jac_fro <= rep.jac_bound;
  rep.two_ok = rep.jac_two <= rep.jac_bound;
  return rep;
}

}  // namespace qgsnet
