#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <random>

#include "qgsnet/baselines.hpp"
#include "qgsnet/benchmarks.hpp"
#include "qgsnet/dataset.hpp"
#include "qgsnet/network.hpp"
#include "qgsnet/ode.hpp"
#include "qgsnet/residual.hpp"
#include "qgsnet/solver.hpp"
#include "qgsnet/stability.hpp"

namespace py = pybind11;
using namespace qgsnet;

namespace {

py::dict trace_to_dict(const Trace& trace) {
  py::list step, t, f, grad_norm, states;
  for (const TracePoint& p : trace.points) {
    step.append(p.step);
    t.append(p.t);
    f.append(p.f);
    grad_norm.append(p.grad_norm);
    if (p.x.size() > 0) states.append(p.x);
  }
  py::dict d;
  d["step"] = step;
  d["t"] = t;
  d["f"] = f;
  d["grad_norm"] = grad_norm;
  d["x"] = states;
  return d;
}

}  // namespace

PYBIND11_MODULE(_qgsnet, m) {
  m.doc() = "Gradient-flow training of small fully recurrent networks";

  py::class_<NetworkShape>(m, "NetworkShape")
      .def(py::init<int, int, int>(), py::arg("inputs"), py::arg("hidden"), py::arg("outputs"))
      .def_readwrite("inputs", &NetworkShape::inputs)
      .def_readwrite("hidden", &NetworkShape::hidden)
      .def_readwrite("outputs", &NetworkShape::outputs)
      .def("param_count", &NetworkShape::param_count)
      .def("__repr__", [](const NetworkShape& s) {
        return "NetworkShape(inputs=" + std::to_string(s.inputs) +
               ", hidden=" + std::to_string(s.hidden) +
               ", outputs=" + std::to_string(s.outputs) + ")";
      });

  m.def("pack", [](const Mat& V, const Mat& W, const Mat& S) { return pack(V, W, S).values; },
        py::arg("V"), py::arg("W"), py::arg("S"));
  m.def("unpack", [](const NetworkShape& shape, const Vec& x) {
    const Weights w = unpack(ParamVector(shape, x));
    return py::make_tuple(w.V, w.W, w.S);
  });
  m.def("forward_step", [](const NetworkShape& shape, const Vec& x, const Vec& u, const Vec& z) {
    const StepResult r = forward_step(shape, x, u, z);
    return py::make_tuple(r.z, r.y);
  });
  m.def("simulate_sequence",
        [](const NetworkShape& shape, const Vec& x, const std::vector<Vec>& inputs) {
          const SimResult r = simulate_sequence(shape, x, inputs);
          return py::make_tuple(r.outputs, r.states);
        });
  m.def("sse", [](const NetworkShape& shape, const Vec& x, const Dataset& d) {
    return sse(shape, x, d);
  });

  py::class_<DatasetMeta>(m, "DatasetMeta")
      .def(py::init<>())
      .def_readwrite("system", &DatasetMeta::system)
      .def_readwrite("seed", &DatasetMeta::seed)
      .def_readwrite("samples", &DatasetMeta::samples)
      .def_readwrite("split", &DatasetMeta::split)
      .def_readwrite("inputs", &DatasetMeta::inputs)
      .def_readwrite("outputs", &DatasetMeta::outputs);

  py::class_<Dataset>(m, "Dataset")
      .def(py::init<>())
      .def_readwrite("inputs", &Dataset::inputs)
      .def_readwrite("targets", &Dataset::targets)
      .def_readwrite("meta", &Dataset::meta)
      .def("__len__", &Dataset::size)
      .def("input_dim", &Dataset::input_dim)
      .def("output_dim", &Dataset::output_dim);

  m.def("save_dataset", &save_dataset, py::arg("dataset"), py::arg("csv_path"));
  m.def("load_dataset", &load_dataset, py::arg("csv_path"));

  py::enum_<BenchmarkSystem>(m, "BenchmarkSystem")
      .value("example1", BenchmarkSystem::example1)
      .value("example2", BenchmarkSystem::example2);
  py::enum_<Split>(m, "Split").value("train", Split::train).value("test", Split::test);

  m.def("step_example1", &step_example1, py::arg("y_k"), py::arg("y_km1"), py::arg("q_k"));
  m.def("step_example2", &step_example2, py::arg("y_lags"), py::arg("q_k"), py::arg("q_km9"));
  m.def("generate_dataset", &generate_dataset, py::arg("system"), py::arg("samples"),
        py::arg("seed"), py::arg("split"));
  m.def("network_generated_dataset", &network_generated_dataset, py::arg("shape"), py::arg("x"),
        py::arg("samples"), py::arg("seed"), py::arg("input_sigma") = 0.5);
  m.def("mse", py::overload_cast<const std::vector<double>&, const std::vector<double>&>(&mse));
  m.def("mse_vec", py::overload_cast<const std::vector<Vec>&, const std::vector<Vec>&>(&mse));
  m.def("generalization_error_pct", &generalization_error_pct);

  py::enum_<SensitivityMode>(m, "SensitivityMode")
      .value("full_recurrent", SensitivityMode::full_recurrent)
      .value("one_step", SensitivityMode::one_step);

  py::class_<ResidualModel>(m, "ResidualModel")
      .def("param_dim", &ResidualModel::param_dim)
      .def("residual_dim", &ResidualModel::residual_dim)
      .def("residuals", &ResidualModel::residuals)
      .def("jacobian", py::overload_cast<const Vec&>(&ResidualModel::jacobian, py::const_))
      .def("gradient", &ResidualModel::gradient)
      .def("objective", &ResidualModel::objective);

  py::class_<NetworkResidualSystem, ResidualModel>(m, "NetworkResidualSystem")
      .def(py::init<Dataset, NetworkShape, SensitivityMode>(), py::arg("dataset"),
           py::arg("shape"), py::arg("mode") = SensitivityMode::full_recurrent)
      .def("shape", &NetworkResidualSystem::shape)
      .def("mode", &NetworkResidualSystem::mode);

  m.def("jacobian_fd", &jacobian_fd, py::arg("model"), py::arg("x"), py::arg("step") = 1e-6);

  py::class_<IntegratorConfig>(m, "IntegratorConfig")
      .def(py::init<>())
      .def_readwrite("rel_tol", &IntegratorConfig::rel_tol)
      .def_readwrite("abs_tol", &IntegratorConfig::abs_tol)
      .def_readwrite("max_step", &IntegratorConfig::max_step)
      .def_readwrite("min_step", &IntegratorConfig::min_step)
      .def_readwrite("equilibrium_tol", &IntegratorConfig::equilibrium_tol)
      .def_readwrite("max_time", &IntegratorConfig::max_time)
      .def_readwrite("max_steps", &IntegratorConfig::max_steps)
      .def_readwrite("record_states", &IntegratorConfig::record_states)
      .def_readwrite("trace_stride", &IntegratorConfig::trace_stride);

  py::enum_<FlowStatus>(m, "FlowStatus")
      .value("equilibrium", FlowStatus::equilibrium)
      .value("cap_reached", FlowStatus::cap_reached)
      .value("budget_exhausted", FlowStatus::budget_exhausted);

  m.def("integrate_forward",
        [](const ResidualModel& model, const Vec& x0, const IntegratorConfig& cfg) {
          FlowOutcome out = integrate_forward(model, x0, cfg);
          return py::make_tuple(out.x_end, out.status, trace_to_dict(out.trace));
        });
  m.def("integrate_backward",
        [](const ResidualModel& model, const Vec& x0, const IntegratorConfig& cfg, double cap) {
          FlowOutcome out = integrate_backward(model, x0, cfg, cap);
          return py::make_tuple(out.x_end, out.status, trace_to_dict(out.trace));
        });

  py::enum_<Stability>(m, "Stability")
      .value("stable", Stability::stable)
      .value("unstable_saddle", Stability::unstable_saddle)
      .value("indeterminate", Stability::indeterminate);

  py::class_<EquilibriumRecord>(m, "EquilibriumRecord")
      .def_readonly("x", &EquilibriumRecord::x)
      .def_readonly("f_value", &EquilibriumRecord::f_value)
      .def_readonly("grad_norm", &EquilibriumRecord::grad_norm)
      .def_readonly("stability", &EquilibriumRecord::stability)
      .def_readonly("eig_min", &EquilibriumRecord::eig_min)
      .def_readonly("eig_max", &EquilibriumRecord::eig_max)
      .def_readonly("found_at", &EquilibriumRecord::found_at);

  py::class_<MinimaArchive>(m, "MinimaArchive")
      .def_readonly("records", &MinimaArchive::records)
      .def("__len__", &MinimaArchive::size);

  py::class_<ClassifyOptions>(m, "ClassifyOptions")
      .def(py::init<>())
      .def_readwrite("class_tol", &ClassifyOptions::class_tol)
      .def_readwrite("grad_tol", &ClassifyOptions::grad_tol)
      .def_readwrite("residual_floor", &ClassifyOptions::residual_floor)
      .def_readwrite("hess_step", &ClassifyOptions::hess_step);

  m.def("classify_equilibrium",
        [](const ResidualModel& model, const Vec& x, const ClassifyOptions& opts) {
          return classify_equilibrium(model, x, opts);
        },
        py::arg("model"), py::arg("x"), py::arg("opts") = ClassifyOptions{});

  py::class_<SearchBudget>(m, "SearchBudget")
      .def(py::init<>())
      .def_readwrite("max_minima", &SearchBudget::max_minima)
      .def_readwrite("max_escape_attempts", &SearchBudget::max_escape_attempts)
      .def_readwrite("max_wall_seconds", &SearchBudget::max_wall_seconds)
      .def_readwrite("seed", &SearchBudget::seed);

  py::class_<SearchOptions>(m, "SearchOptions")
      .def(py::init<>())
      .def_readwrite("kick", &SearchOptions::kick)
      .def_readwrite("dedup_distance", &SearchOptions::dedup_distance)
      .def_readwrite("dedup_fvalue", &SearchOptions::dedup_fvalue)
      .def_readwrite("stall_attempts", &SearchOptions::stall_attempts);

  m.def("search_minima",
        [](const ResidualModel& model, const Vec& x0, const IntegratorConfig& cfg,
           const SearchBudget& budget, const SearchOptions& opts) {
          return search_minima(model, x0, cfg, budget, opts);
        },
        py::arg("model"), py::arg("x0"), py::arg("cfg"), py::arg("budget"),
        py::arg("opts") = SearchOptions{});

  m.def("validation_mse", [](const NetworkShape& shape, const Vec& x, const Dataset& d) {
    return validation_mse(shape, x, d);
  });
  m.def("best_by_validation_index",
        [](const MinimaArchive& archive, const NetworkShape& shape, const Dataset& d) {
          return best_by_validation_index(archive, shape, d);
        });

  py::class_<DescentCheck>(m, "DescentCheck")
      .def_readonly("analytic", &DescentCheck::analytic)
      .def_readonly("numeric", &DescentCheck::numeric)
      .def_readonly("ok", &DescentCheck::ok);
  m.def("lyapunov_descent_check",
        [](const ResidualModel& model, const Vec& x) { return lyapunov_descent_check(model, x); });

  py::class_<BoundInputs>(m, "BoundInputs")
      .def(py::init<int, int, int, double, double>(), py::arg("samples"), py::arg("hidden"),
           py::arg("inputs"), py::arg("input_bound"), py::arg("output_bound"));
  m.def("perturbation_bound", &perturbation_bound);

  py::class_<PerturbedDescent>(m, "PerturbedDescent")
      .def_readonly("vdot", &PerturbedDescent::vdot)
      .def_readonly("ok", &PerturbedDescent::ok);
  m.def("perturbed_descent_test", &perturbed_descent_test);

  py::class_<NormBoundReport>(m, "NormBoundReport")
      .def_readonly("h_norm", &NormBoundReport::h_norm)
      .def_readonly("h_bound", &NormBoundReport::h_bound)
      .def_readonly("jac_fro", &NormBoundReport::jac_fro)
      .def_readonly("jac_two", &NormBoundReport::jac_two)
      .def_readonly("jac_bound", &NormBoundReport::jac_bound)
      .def_readonly("h_ok", &NormBoundReport::h_ok)
      .def_readonly("fro_ok", &NormBoundReport::fro_ok)
      .def_readonly("two_ok", &NormBoundReport::two_ok);
  m.def("norm_bound_checks", &norm_bound_checks);

  py::class_<EbpConfig>(m, "EbpConfig")
      .def(py::init<>())
      .def_readwrite("learning_rate", &EbpConfig::learning_rate)
      .def_readwrite("max_epochs", &EbpConfig::max_epochs)
      .def_readwrite("grad_tol", &EbpConfig::grad_tol)
      .def_readwrite("seed", &EbpConfig::seed)
      .def_readwrite("halve_on_increase", &EbpConfig::halve_on_increase);

  py::class_<GaConfig>(m, "GaConfig")
      .def(py::init<>())
      .def_readwrite("population", &GaConfig::population)
      .def_readwrite("generations", &GaConfig::generations)
      .def_readwrite("crossover_rate", &GaConfig::crossover_rate)
      .def_readwrite("mutation_sigma_init", &GaConfig::mutation_sigma_init)
      .def_readwrite("elitism", &GaConfig::elitism)
      .def_readwrite("seed", &GaConfig::seed)
      .def_readwrite("init_sigma", &GaConfig::init_sigma)
      .def_readwrite("stall_window", &GaConfig::stall_window);

  m.def("train_ebp", [](const ResidualModel& model, const Vec& x0, const EbpConfig& cfg) {
    const TrainResult r = train_ebp(model, x0, cfg);
    return py::make_tuple(r.x, r.history);
  });
  m.def("train_ga", [](const ResidualModel& model, const GaConfig& cfg) {
    const TrainResult r = train_ga(model, cfg);
    return py::make_tuple(r.x, r.history);
  });

  m.attr("__version__") = "0.1.0";
}
