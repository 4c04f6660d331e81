#include "qgsnet/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace qgsnet {

void validate_config(const IntegratorConfig& cfg) {
  if (cfg.rel_tol <= 0 || cfg.abs_tol <= 0 || cfg.equilibrium_tol <= 0) {
    throw std::invalid_argument("integrator tolerances must be positive");
  }
  if (!(cfg.min_step > 0) || !(cfg.min_step <= cfg.max_step)) {
    throw std::invalid_argument("require 0 < min_step <= max_step");
  }
  if (cfg.max_time <= 0 || cfg.max_steps <= 0 || cfg.trace_stride < 1) {
    throw std::invalid_argument("integrator budget must be positive");
  }
}

const char* to_string(FlowStatus status) {
  switch (status) {
    case FlowStatus::equilibrium: return "equilibrium";
    case FlowStatus::cap_reached: return "cap_reached";
    case FlowStatus::budget_exhausted: return "budget_exhausted";
  }
  return "unknown";
}

void Trace::write_csv(std::ostream& out, bool with_states) const {
  out.precision(std::numeric_limits<double>::max_digits10);
  out << "step,t,f,grad_norm";
  if (with_states && !points.empty() && points.front().x.size() > 0) {
    for (Eigen::Index i = 0; i < points.front().x.size(); ++i) out << ",x_" << i;
  }
  out << "\n";
  for (const TracePoint& p : points) {
    out << p.step << "," << p.t << "," << p.f << "," << p.grad_norm;
    if (with_states) {
      for (Eigen::Index i = 0; i < p.x.size(); ++i) out << "," << p.x[i];
    }
    out << "\n";
  }
}

StiffnessError::StiffnessError(Vec state, double time, double step)
    : std::runtime_error("step size underflow at t = " + std::to_string(time) +
                         " (h = " + std::to_string(step) + ")"),
      state_(std::move(state)),
      time_(time) {}

namespace {

// Dormand-Prince 5(4) tableau (FSAL: stage 7 is the derivative at the new point).
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                 A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247,
                 A64 = 49.0 / 176, A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192,
                 B5 = -2187.0 / 6784, B6 = 11.0 / 84;
// b - b*, the 5th/4th order difference used for the error estimate.
constexpr double E1 = B1 - 5179.0 / 57600, E3 = B3 - 7571.0 / 16695, E4 = B4 - 393.0 / 640,
                 E5 = B5 + 92097.0 / 339200, E6 = B6 - 187.0 / 2100, E7 = -1.0 / 40;

double error_norm(const Vec& err, const Vec& x_old, const Vec& x_new,
                  const IntegratorConfig& cfg) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double sc =
        cfg.abs_tol + cfg.rel_tol * std::max(std::abs(x_old[i]), std::abs(x_new[i]));
    const double q = err[i] / sc;
    acc += q * q;
  }
  return std::sqrt(acc / static_cast<double>(err.size()));
}

double initial_step(const Vec& x0, const Vec& f0, const IntegratorConfig& cfg) {
  const double d0 = x0.norm();
  const double d1 = f0.norm();
  double h = (d0 < 1e-10 || d1 < 1e-10) ? 1e-6 : 0.01 * d0 / d1;
  // With x0 near the origin fall back to a scale set by the field alone.
  if (d0 < 1e-10 && d1 > 1e-10) h = 0.01 / d1;
  return std::clamp(h, cfg.min_step, cfg.max_step);
}

}  // namespace

FlowResult integrate_flow(const std::function<Vec(const Vec&)>& field,
                          const std::function<double(const Vec&)>& value, const Vec& x0,
                          const IntegratorConfig& cfg, std::optional<double> value_cap) {
  validate_config(cfg);
  if (!x0.allFinite()) {
    throw NumericError("non-finite initial state");
  }

  FlowResult result;
  result.trace.points.reserve(256);

  Vec x = x0;
  Vec k1 = field(x);
  double t = 0.0;
  long accepted = 0;

  auto record = [&](long step) {
    if (step % cfg.trace_stride != 0 && step != 0) return;
    TracePoint p;
    p.step = step;
    p.t = t;
    p.f = value(x);
    p.grad_norm = k1.lpNorm<Eigen::Infinity>();
    if (cfg.record_states) p.x = x;
    result.trace.points.push_back(std::move(p));
  };
  record(0);

  auto finish = [&](FlowStatus status) {
    result.x_end = x;
    result.status = status;
    result.t_end = t;
    result.accepted_steps = accepted;
    return result;
  };

  if (k1.lpNorm<Eigen::Infinity>() < cfg.equilibrium_tol) {
    return finish(FlowStatus::equilibrium);
  }

  double h = initial_step(x, k1, cfg);
  double err_prev = 1.0;
  bool rejected_last = false;

  Vec k2, k3, k4, k5, k6, k7, x_new, err;
  for (long attempt = 0; attempt < cfg.max_steps; ++attempt) {
    if (t >= cfg.max_time) {
      return finish(FlowStatus::budget_exhausted);
    }
    h = std::min({h, cfg.max_step, cfg.max_time - t});

    k2 = field(x + h * (A21 * k1));
    k3 = field(x + h * (A31 * k1 + A32 * k2));
    k4 = field(x + h * (A41 * k1 + A42 * k2 + A43 * k3));
    k5 = field(x + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4));
    k6 = field(x + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5));
    x_new = x + h * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6);
    k7 = field(x_new);
    err = h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7);

    double err_n = x_new.allFinite() ? error_norm(err, x, x_new, cfg)
                                     : std::numeric_limits<double>::infinity();
    if (!std::isfinite(err_n)) err_n = 1e10;

    if (err_n <= 1.0) {
      t += h;
      x.swap(x_new);
      k1.swap(k7);  // FSAL
      ++accepted;
      record(accepted);
      if (k1.lpNorm<Eigen::Infinity>() < cfg.equilibrium_tol) {
        return finish(FlowStatus::equilibrium);
      }
      if (value_cap && value(x) > *value_cap) {
        return finish(FlowStatus::cap_reached);
      }
      // PI controller.
      const double fac = 0.9 * std::pow(std::max(err_n, 1e-10), -0.17) *
                         std::pow(std::max(err_prev, 1e-10), 0.04);
      double growth = std::clamp(fac, 0.2, rejected_last ? 1.0 : 5.0);
      h *= growth;
      err_prev = std::max(err_n, 1e-10);
      rejected_last = false;
    } else {
      h *= std::clamp(0.9 * std::pow(err_n, -0.2), 0.1, 0.9);
      rejected_last = true;
      if (h < cfg.min_step) {
        throw StiffnessError(std::move(x), t, h);
      }
    }
  }
  return finish(FlowStatus::budget_exhausted);
}

}  // namespace qgsnet
