#include "qgsnet/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>
#include <utility>

namespace qgsnet {

const char* to_string(Stability s) {
  switch (s) {
    case Stability::stable: return "stable";
    case Stability::unstable_saddle: return "unstable/saddle";
    case Stability::indeterminate: return "indeterminate";
  }
  return "unknown";
}

bool MinimaArchive::is_duplicate(const EquilibriumRecord& rec) const {
  for (const EquilibriumRecord& r : records) {
    const double dist = (r.x - rec.x).lpNorm<Eigen::Infinity>();
    if (dist < dedup_distance && std::abs(r.f_value - rec.f_value) < dedup_fvalue) {
      return true;
    }
  }
  return false;
}

bool MinimaArchive::insert(EquilibriumRecord rec) {
  if (is_duplicate(rec)) return false;
  records.push_back(std::move(rec));
  return true;
}

void validate_budget(const SearchBudget& budget) {
  if (budget.max_minima < 1 || budget.max_escape_attempts < 1 ||
      budget.max_wall_seconds <= 0) {
    throw std::invalid_argument("search budget values must be positive");
  }
}

FlowOutcome integrate_forward(const ResidualModel& model, const Vec& x0,
                              const IntegratorConfig& cfg) {
  FlowResult r = integrate_flow([&model](const Vec& x) { return Vec(-model.gradient(x)); },
                                [&model](const Vec& x) { return model.objective(x); }, x0, cfg);
  return {std::move(r.x_end), r.status, std::move(r.trace)};
}

FlowOutcome integrate_backward(const ResidualModel& model, const Vec& x0,
                               const IntegratorConfig& cfg, double f_cap) {
  FlowResult r = integrate_flow([&model](const Vec& x) { return model.gradient(x); },
                                [&model](const Vec& x) { return model.objective(x); }, x0, cfg,
                                f_cap);
  return {std::move(r.x_end), r.status, std::move(r.trace)};
}

namespace {

Mat fd_hessian(const ResidualModel& model, const Vec& x, double rel_step) {
  const Eigen::Index n = model.param_dim();
  Mat hess(n, n);
  Vec xp = x;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double old = xp[j];
    const double step = rel_step * (1.0 + std::abs(old));
    xp[j] = old + step;
    const Vec gp = model.gradient(xp);
    xp[j] = old - step;
    const Vec gm = model.gradient(xp);
    xp[j] = old;
    hess.col(j) = (gp - gm) / (2.0 * step);
  }
  return Mat(0.5 * (hess + hess.transpose()));
}

}  // namespace

Mat stability_matrix(const ResidualModel& model, const Vec& x, const ClassifyOptions& opts) {
  const Vec h = model.residuals(x);
  if (h.lpNorm<Eigen::Infinity>() < opts.residual_floor) {
    const Mat jac = model.jacobian(x);
    return Mat(jac.transpose() * jac);
  }
  return fd_hessian(model, x, opts.hess_step);
}

EquilibriumRecord classify_equilibrium(const ResidualModel& model, const Vec& x,
                                       const ClassifyOptions& opts) {
  EquilibriumRecord rec;
  rec.x = x;
  rec.f_value = model.objective(x);
  rec.grad_norm = model.gradient(x).lpNorm<Eigen::Infinity>();
  if (rec.grad_norm >= opts.grad_tol) {
    throw std::invalid_argument("classify_equilibrium called away from an equilibrium");
  }

  const Vec h = model.residuals(x);
  const bool gauss_newton = h.lpNorm<Eigen::Infinity>() < opts.residual_floor;
  Mat lin;
  if (gauss_newton) {
    const Mat jac = model.jacobian(x);
    lin = jac.transpose() * jac;
  } else {
    lin = fd_hessian(model, x, opts.hess_step);
  }

  Eigen::SelfAdjointEigenSolver<Mat> eig(lin);
  if (eig.info() != Eigen::Success) {
    rec.stability = Stability::indeterminate;
    return rec;
  }
  rec.eig_min = eig.eigenvalues().minCoeff();
  rec.eig_max = eig.eigenvalues().maxCoeff();

  if (rec.eig_min > opts.class_tol) {
    rec.stability = Stability::stable;
  } else if (rec.eig_min < -opts.class_tol) {
    rec.stability = Stability::unstable_saddle;
  } else {
    rec.stability = Stability::indeterminate;
  }
  return rec;
}

namespace {

Vec unit_inf(const Vec& v) {
  const double n = v.lpNorm<Eigen::Infinity>();
  if (n <= 0 || !std::isfinite(n)) {
    throw std::invalid_argument("cannot normalize a zero direction");
  }
  return v / n;
}

/// Eigenvector of the smallest eigenvalue of the symmetric linearization.
Vec softest_direction(const ResidualModel& model, const Vec& x, const ClassifyOptions& opts) {
  Eigen::SelfAdjointEigenSolver<Mat> eig(stability_matrix(model, x, opts));
  if (eig.info() != Eigen::Success) {
    return Vec::Unit(x.size(), 0);
  }
  Eigen::Index which = 0;
  eig.eigenvalues().minCoeff(&which);
  return eig.eigenvectors().col(which);
}

}  // namespace

namespace {

/// One perturb-climb-cross attempt along a fixed unit direction.
std::vector<Vec> escape_along(const ResidualModel& model, const EquilibriumRecord& record,
                              const IntegratorConfig& cfg, const EscapeOptions& opts,
                              const Vec& direction) {
  std::vector<Vec> candidates;
  const Vec x_pert = record.x + opts.kick * direction;
  FlowOutcome back;
  try {
    back = integrate_backward(model, x_pert, cfg, opts.f_cap);
  } catch (const StiffnessError&) {
    return candidates;
  }
  if (back.status == FlowStatus::cap_reached) {
    // High on the landscape; forward integration from here can land in a
    // different basin.
    candidates.push_back(back.x_end);
    return candidates;
  }
  if (back.status != FlowStatus::equilibrium) {
    return candidates;
  }
  // Still inside the flat neighborhood of the starting minimum: no saddle.
  if ((back.x_end - record.x).lpNorm<Eigen::Infinity>() < 2.0 * opts.kick) {
    return candidates;
  }
  const Vec unstable = unit_inf(softest_direction(model, back.x_end, opts.classify));
  candidates.push_back(back.x_end + opts.kick * unstable);
  candidates.push_back(back.x_end - opts.kick * unstable);
  return candidates;
}

Vec random_unit_direction(Eigen::Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec d(dim);
  do {
    for (Eigen::Index i = 0; i < dim; ++i) d[i] = normal(rng);
  } while (d.lpNorm<Eigen::Infinity>() < 1e-12);
  return unit_inf(d);
}

}  // namespace

std::vector<Vec> escape(const ResidualModel& model, const EquilibriumRecord& record,
                        const IntegratorConfig& cfg, const EscapeOptions& opts,
                        std::mt19937_64& rng) {
  if (record.stability != Stability::stable) {
    throw std::invalid_argument("escape expects a stable equilibrium record");
  }
  if (!(opts.kick > 0)) {
    throw std::invalid_argument("escape kick must be positive");
  }

  std::vector<Vec> directions;
  directions.reserve(opts.max_directions);
  const Vec soft = unit_inf(softest_direction(model, record.x, opts.classify));
  directions.push_back(soft);
  if (opts.max_directions > 1) directions.push_back(-soft);
  while (static_cast<int>(directions.size()) < opts.max_directions) {
    directions.push_back(random_unit_direction(record.x.size(), rng));
  }

  std::vector<Vec> candidates;
  for (const Vec& d : directions) {
    std::vector<Vec> got = escape_along(model, record, cfg, opts, d);
    candidates.insert(candidates.end(), std::make_move_iterator(got.begin()),
                      std::make_move_iterator(got.end()));
  }
  return candidates;
}

MinimaArchive search_minima(const ResidualModel& model, const Vec& x0,
                            const IntegratorConfig& cfg, const SearchBudget& budget,
                            const SearchOptions& opts) {
  validate_config(cfg);
  validate_budget(budget);

  MinimaArchive archive;
  archive.dedup_distance = opts.dedup_distance;
  archive.dedup_fvalue = opts.dedup_fvalue;

  ClassifyOptions classify = opts.classify;
  classify.grad_tol = std::max(classify.grad_tol, 2.0 * cfg.equilibrium_tol);

  std::mt19937_64 rng(budget.seed);
  const auto t_start = std::chrono::steady_clock::now();
  auto wall_exceeded = [&] {
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t_start;
    return dt.count() > budget.max_wall_seconds;
  };

  std::deque<std::pair<Vec, std::string>> starts;
  starts.emplace_back(x0, "start");
  int attempts = 0;
  int attempts_since_new = 0;
  std::size_t next_escape_record = 0;
  std::vector<int> directions_tried;  // per archive record

  while (!wall_exceeded()) {
    if (!starts.empty()) {
      auto [xs, provenance] = std::move(starts.front());
      starts.pop_front();
      try {
        FlowOutcome fwd = integrate_forward(model, xs, cfg);
        if (fwd.status != FlowStatus::equilibrium) continue;
        EquilibriumRecord rec = classify_equilibrium(model, fwd.x_end, classify);
        rec.found_at = provenance;
        if (rec.stability == Stability::stable && archive.insert(std::move(rec))) {
          attempts_since_new = 0;
          if (static_cast<int>(archive.size()) >= budget.max_minima) break;
        }
      } catch (const StiffnessError&) {
      } catch (const NumericError&) {
      } catch (const std::invalid_argument&) {
      }
      continue;
    }

    if (archive.records.empty()) break;  // nothing to escape from
    if (attempts >= budget.max_escape_attempts) break;
    if (opts.stall_attempts > 0 && attempts_since_new >= opts.stall_attempts) break;

    directions_tried.resize(archive.size(), 0);
    const std::size_t idx = next_escape_record % archive.size();
    next_escape_record++;
    double f_best = std::numeric_limits<double>::infinity();
    for (const EquilibriumRecord& r : archive.records) f_best = std::min(f_best, r.f_value);

    EscapeOptions esc;
    esc.kick = opts.kick;
    esc.f_cap = opts.f_cap_factor * f_best + opts.f_cap_offset;
    esc.classify = classify;
    ++attempts;
    ++attempts_since_new;
    try {
      // Round-robin over records; per record the first two probes follow the
      // soft eigen-direction pair, later ones draw random directions.
      const EquilibriumRecord& rec = archive.records[idx];
      const int probe = directions_tried[idx]++;
      Vec direction;
      if (probe < 2) {
        const Vec soft = unit_inf(softest_direction(model, rec.x, classify));
        direction = (probe == 0) ? soft : Vec(-soft);
      } else {
        direction = random_unit_direction(rec.x.size(), rng);
      }
      std::vector<Vec> cands = escape_along(model, rec, cfg, esc, direction);
      for (Vec& c : cands) {
        starts.emplace_back(std::move(c), "escape(record=" + std::to_string(idx) + ")");
      }
    } catch (const StiffnessError&) {
    } catch (const NumericError&) {
    } catch (const std::invalid_argument&) {
    }
  }
  return archive;
}

double validation_mse(const NetworkShape& shape, const Vec& x, const Dataset& validation,
                      const Activation& act) {
  if (validation.size() == 0) {
    throw std::domain_error("validation set is empty");
  }
  return sse(shape, x, validation, act) / static_cast<double>(validation.size());
}

std::size_t best_by_validation_index(const MinimaArchive& archive, const NetworkShape& shape,
                                     const Dataset& validation, const Activation& act) {
  if (archive.records.empty()) {
    throw std::domain_error("archive is empty");
  }
  std::size_t best = 0;
  double best_mse = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < archive.records.size(); ++i) {
    const double mse_i = validation_mse(shape, archive.records[i].x, validation, act);
    const bool better =
        mse_i < best_mse ||
        (mse_i == best_mse && archive.records[i].f_value < archive.records[best].f_value);
    if (better) {
      best = i;
      best_mse = mse_i;
    }
  }
  return best;
}

const EquilibriumRecord& best_by_validation(const MinimaArchive& archive,
                                            const NetworkShape& shape,
                                            const Dataset& validation, const Activation& act) {
  return archive.records[best_by_validation_index(archive, shape, validation, act)];
}

}  // namespace qgsnet
