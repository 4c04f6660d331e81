#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "qgsnet/types.hpp"

namespace qgsnet {

struct IntegratorConfig {
  double rel_tol = 1e-6;
  double abs_tol = 1e-8;
  double max_step = 10.0;
  double min_step = 1e-14;
  /// Trajectory stops as converged when the inf-norm of the gradient field
  /// drops below this.
  double equilibrium_tol = 1e-8;
  double max_time = 1e6;
  long max_steps = 500000;
  /// Keep full states in the trace (needed for CSV export of x and for the
  /// pointwise rate checks).
  bool record_states = false;
  /// Keep every stride-th accepted step in the trace.
  int trace_stride = 1;
};

void validate_config(const IntegratorConfig& cfg);

enum class FlowStatus { equilibrium, cap_reached, budget_exhausted };

const char* to_string(FlowStatus status);

struct TracePoint {
  long step = 0;
  double t = 0.0;
  double f = 0.0;
  double grad_norm = 0.0;  // inf-norm
  Vec x;                   // empty unless record_states
};

struct Trace {
  std::vector<TracePoint> points;

  /// Columns: step,t,f,grad_norm[,x_0..x_{n-1} when with_states].
  void write_csv(std::ostream& out, bool with_states = false) const;
};

struct FlowResult {
  Vec x_end;
  FlowStatus status = FlowStatus::budget_exhausted;
  Trace trace;
  double t_end = 0.0;
  long accepted_steps = 0;
};

/// Step-size control drove the step below min_step; carries the state where
/// integration got stuck.
class StiffnessError : public std::runtime_error {
 public:
  StiffnessError(Vec state, double time, double step);
  const Vec& state() const { return state_; }
  double time() const { return time_; }

 private:
  Vec state_;
  double time_;
};

/// Integrates xdot = field(x) with a Dormand-Prince 5(4) embedded pair and
/// PI step control. Stops with status
///   equilibrium      when ||field(x)||_inf < cfg.equilibrium_tol,
///   cap_reached      when value(x) > value_cap (if a cap is given),
///   budget_exhausted at cfg.max_time or cfg.max_steps.
/// value() is evaluated at accepted points only and recorded in the trace.
FlowResult integrate_flow(const std::function<Vec(const Vec&)>& field,
                          const std::function<double(const Vec&)>& value, const Vec& x0,
                          const IntegratorConfig& cfg,
                          std::optional<double> value_cap = std::nullopt);

}  // namespace qgsnet
