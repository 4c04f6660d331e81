#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qgsnet/dataset.hpp"
#include "qgsnet/network.hpp"
#include "qgsnet/ode.hpp"
#include "qgsnet/residual.hpp"
#include "qgsnet/types.hpp"

namespace qgsnet {

enum class Stability { stable, unstable_saddle, indeterminate };

const char* to_string(Stability s);

/// An equilibrium of the gradient flow, classified by the eigenvalues of the
/// symmetric linearization (Gauss-Newton Dh^T Dh at near-zero residual,
/// otherwise a finite-difference Hessian of the objective).
struct EquilibriumRecord {
  Vec x;
  double f_value = 0.0;
  double grad_norm = 0.0;  // inf-norm at x
  Stability stability = Stability::indeterminate;
  double eig_min = 0.0;
  double eig_max = 0.0;
  std::string found_at;  // trajectory provenance
};

/// Archive of distinct stable equilibria. Two records are duplicates only if
/// both the inf-distance and the objective gap are below the thresholds, so
/// symmetric weight-space copies with equal objective still count as distinct.
struct MinimaArchive {
  std::vector<EquilibriumRecord> records;
  double dedup_distance = 1e-3;
  double dedup_fvalue = 1e-8;

  /// Returns false when the record duplicates an archived one.
  bool insert(EquilibriumRecord rec);
  bool is_duplicate(const EquilibriumRecord& rec) const;
  std::size_t size() const { return records.size(); }
};

struct SearchBudget {
  int max_minima = 16;
  int max_escape_attempts = 64;
  double max_wall_seconds = 600.0;
  std::uint64_t seed = 0;
};

void validate_budget(const SearchBudget& budget);

struct FlowOutcome {
  Vec x_end;
  FlowStatus status = FlowStatus::budget_exhausted;
  Trace trace;
};

/// Forward integration of xdot = -grad f(x) until the gradient flattens out.
FlowOutcome integrate_forward(const ResidualModel& model, const Vec& x0,
                              const IntegratorConfig& cfg);

/// Reversed flow xdot = +grad f(x), used to climb out of a basin. Stops at the
/// next flat point (candidate boundary saddle), at f(x) > f_cap, or on budget.
FlowOutcome integrate_backward(const ResidualModel& model, const Vec& x0,
                               const IntegratorConfig& cfg, double f_cap);

struct ClassifyOptions {
  double class_tol = 1e-8;      // eigenvalue threshold for stable/unstable
  double grad_tol = 1e-6;       // precondition on ||grad||_inf
  double residual_floor = 1e-6; // ||h||_inf below this -> Gauss-Newton route
  double hess_step = 1e-5;      // relative step of the FD Hessian
};

/// Requires ||grad f(x)||_inf < opts.grad_tol. Eigen-solver trouble degrades
/// to an indeterminate classification instead of throwing.
EquilibriumRecord classify_equilibrium(const ResidualModel& model, const Vec& x,
                                       const ClassifyOptions& opts = {});

/// Symmetric linearization used for the eigenvalue stability test; exposed for
/// the escape directions. Gauss-Newton at near-zero residual, FD Hessian
/// otherwise.
Mat stability_matrix(const ResidualModel& model, const Vec& x, const ClassifyOptions& opts = {});

struct EscapeOptions {
  double kick = 1e-2;        // inf-norm size of every perturbation
  int max_directions = 8;    // eigen-direction pair first, then random
  double f_cap = 1e12;
  ClassifyOptions classify;
};

/// From a stable equilibrium: perturb, climb backward to a boundary saddle,
/// then kick past the saddle along its most unstable direction in both signs.
/// Returns start points for forward integration; backward runs that hit the
/// f-cap contribute their endpoint, exhausted ones contribute nothing.
std::vector<Vec> escape(const ResidualModel& model, const EquilibriumRecord& record,
                        const IntegratorConfig& cfg, const EscapeOptions& opts,
                        std::mt19937_64& rng);

struct SearchOptions {
  double kick = 1e-2;
  double dedup_distance = 1e-3;
  double dedup_fvalue = 1e-8;
  /// Escape attempts since the last new minimum before the search gives up;
  /// 0 disables the stall rule.
  int stall_attempts = 0;
  double f_cap_factor = 10.0;
  double f_cap_offset = 1.0;
  ClassifyOptions classify;
};

/// Alternates forward integration, classification and escape, archiving
/// distinct stable equilibria. Deterministic for a fixed budget seed as long
/// as the wall-clock limit does not bind. Never throws on integration
/// trouble; the archive collected so far is always returned.
MinimaArchive search_minima(const ResidualModel& model, const Vec& x0,
                            const IntegratorConfig& cfg, const SearchBudget& budget,
                            const SearchOptions& opts = {});

/// Mean squared one-step prediction error of the archived network weights on
/// a held-out set.
double validation_mse(const NetworkShape& shape, const Vec& x, const Dataset& validation,
                      const Activation& act = tanh_activation());

/// Index of the record with the lowest validation MSE; ties broken by lower
/// objective value, then by discovery order. Throws std::domain_error on an
/// empty archive.
std::size_t best_by_validation_index(const MinimaArchive& archive, const NetworkShape& shape,
                                     const Dataset& validation,
                                     const Activation& act = tanh_activation());

const EquilibriumRecord& best_by_validation(const MinimaArchive& archive,
                                            const NetworkShape& shape,
                                            const Dataset& validation,
                                            const Activation& act = tanh_activation());

}  // namespace qgsnet
