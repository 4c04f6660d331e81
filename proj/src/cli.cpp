#include "qgsnet/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qgsnet/baselines.hpp"
#include "qgsnet/benchmarks.hpp"
#include "qgsnet/dataset.hpp"
#include "qgsnet/io_util.hpp"
#include "qgsnet/network.hpp"
#include "qgsnet/ode.hpp"
#include "qgsnet/report.hpp"
#include "qgsnet/residual.hpp"
#include "qgsnet/solver.hpp"
#include "qgsnet/stability.hpp"

namespace qgsnet::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// config plumbing

void merge_into(json& base, const json& overlay) {
  if (!overlay.is_object() || !base.is_object()) {
    base = overlay;
    return;
  }
  for (auto it = overlay.begin(); it != overlay.end(); ++it) {
    if (base.contains(it.key()) && base[it.key()].is_object() && it->is_object()) {
      merge_into(base[it.key()], *it);
    } else {
      base[it.key()] = *it;
    }
  }
}

json default_train_config() {
  return json{
      {"method", "qgs"},
      {"train", ""},
      {"test", ""},
      {"hidden", 8},
      {"seed", 0},
      {"activation", "tanh"},
      {"sensitivity_mode", "full_recurrent"},
      {"init_sigma", 0.5},
      {"integrator",
       {{"rel_tol", 1e-6},
        {"abs_tol", 1e-8},
        {"max_step", 10.0},
        {"min_step", 1e-14},
        {"equilibrium_tol", 1e-6},
        {"max_time", 1e6},
        {"max_steps", 40000}}},
      {"budget",
       {{"max_minima", 8}, {"max_escape_attempts", 16}, {"max_wall_seconds", 600.0}}},
      {"search",
       {{"kick", 1e-2},
        {"dedup_distance", 1e-3},
        {"dedup_fvalue", 1e-8},
        {"stall_attempts", 0},
        {"f_cap_factor", 10.0},
        {"f_cap_offset", 1.0}}},
      {"ebp",
       {{"learning_rate", 1e-3},
        {"max_epochs", 2000},
        {"grad_tol", 1e-8},
        {"halve_on_increase", true}}},
      {"ga",
       {{"population", 200},
        {"generations", 300},
        {"crossover_rate", 0.8},
        {"mutation_sigma_init", 0.25},
        {"elitism", 2},
        {"stall_window", 10},
        {"init_sigma", 0.5}}}};
}

IntegratorConfig integrator_from(const json& j) {
  IntegratorConfig cfg;
  cfg.rel_tol = j.at("rel_tol").get<double>();
  cfg.abs_tol = j.at("abs_tol").get<double>();
  cfg.max_step = j.at("max_step").get<double>();
  cfg.min_step = j.at("min_step").get<double>();
  cfg.equilibrium_tol = j.at("equilibrium_tol").get<double>();
  cfg.max_time = j.at("max_time").get<double>();
  cfg.max_steps = j.at("max_steps").get<long>();
  return cfg;
}

SearchOptions search_from(const json& j) {
  SearchOptions opts;
  opts.kick = j.at("kick").get<double>();
  opts.dedup_distance = j.at("dedup_distance").get<double>();
  opts.dedup_fvalue = j.at("dedup_fvalue").get<double>();
  opts.stall_attempts = j.at("stall_attempts").get<int>();
  opts.f_cap_factor = j.at("f_cap_factor").get<double>();
  opts.f_cap_offset = j.at("f_cap_offset").get<double>();
  return opts;
}

Vec random_initial_point(int dim, std::uint64_t seed, double sigma) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, sigma);
  Vec x(dim);
  for (int i = 0; i < dim; ++i) x[i] = normal(rng);
  return x;
}

std::vector<double> first_component(const std::vector<Vec>& series) {
  std::vector<double> out;
  out.reserve(series.size());
  for (const Vec& v : series) out.push_back(v[0]);
  return out;
}

double generalization_pct_flat(const std::vector<Vec>& pred, const std::vector<Vec>& targ) {
  std::vector<double> p, t;
  for (std::size_t k = 0; k < pred.size(); ++k) {
    for (Eigen::Index j = 0; j < pred[k].size(); ++j) {
      p.push_back(pred[k][j]);
      t.push_back(targ[k][j]);
    }
  }
  return generalization_error_pct(p, t);
}

void write_prediction_csv(const fs::path& path, const std::vector<Vec>& pred,
                          const std::vector<Vec>& targ) {
  std::ostringstream out;
  out.precision(std::numeric_limits<double>::max_digits10);
  out << "k,y,y_hat,abs_err\n";
  for (std::size_t k = 0; k < pred.size(); ++k) {
    out << k + 1 << "," << targ[k][0] << "," << pred[k][0] << ","
        << std::abs(pred[k][0] - targ[k][0]) << "\n";
  }
  write_file_atomic(path, out.str());
}

void write_history_csv(const fs::path& path, const std::vector<double>& history) {
  std::ostringstream out;
  out.precision(std::numeric_limits<double>::max_digits10);
  out << "epoch,best_f\n";
  for (std::size_t i = 0; i < history.size(); ++i) {
    out << i << "," << history[i] << "\n";
  }
  write_file_atomic(path, out.str());
}

double median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

// ---------------------------------------------------------------------------
// gen-data

struct GenDataArgs {
  std::string system;
  int samples = 0;
  std::uint64_t seed = 0;
  std::string split = "train";
  std::string out;
};

int cmd_gen_data(const GenDataArgs& args) {
  const BenchmarkSystem system = parse_system(args.system);
  const Split split = args.split == "test" ? Split::test : Split::train;
  Dataset data = generate_dataset(system, args.samples, args.seed, split);
  save_dataset(data, args.out);
  std::cout << "wrote " << data.size() << " samples (n=" << data.input_dim()
            << ", t=" << data.output_dim() << ") to " << args.out << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// train

struct TrainCliArgs {
  std::string method, train, test, config, out;
  std::string plots_dir, history_out, trace_out;
  int hidden = -1;
  std::int64_t seed = -1;
  bool seed_set = false, hidden_set = false, method_set = false;
  bool train_set = false, test_set = false;
};

json resolve_train_config(const TrainCliArgs& args) {
  json cfg = default_train_config();
  if (!args.config.empty()) {
    json file = json::parse(read_file(args.config));
    // A previous run report is a valid config source: use its echo.
    if (file.contains("schema_version") && file.contains("config")) {
      file = file["config"];
    }
    merge_into(cfg, file);
  }
  if (args.method_set) cfg["method"] = args.method;
  if (args.train_set) cfg["train"] = args.train;
  if (args.test_set) cfg["test"] = args.test;
  if (args.hidden_set) cfg["hidden"] = args.hidden;
  if (args.seed_set) cfg["seed"] = static_cast<std::uint64_t>(args.seed);
  return cfg;
}

int cmd_train(const TrainCliArgs& args) {
  const auto t0 = std::chrono::steady_clock::now();
  json cfg = resolve_train_config(args);
  const std::string method = cfg.at("method").get<std::string>();
  if (method != "qgs" && method != "ga" && method != "ebp") {
    throw std::runtime_error("unknown method: " + method);
  }
  if (cfg.at("train").get<std::string>().empty() || cfg.at("test").get<std::string>().empty()) {
    throw std::runtime_error("train and test dataset paths are required");
  }

  Dataset train_data = load_dataset(cfg.at("train").get<std::string>());
  Dataset test_data = load_dataset(cfg.at("test").get<std::string>());
  if (train_data.input_dim() != test_data.input_dim() ||
      train_data.output_dim() != test_data.output_dim()) {
    throw std::runtime_error("train and test datasets have different dimensions");
  }

  NetworkShape shape{train_data.input_dim(), cfg.at("hidden").get<int>(),
                     train_data.output_dim()};
  validate_shape(shape);
  const std::uint64_t seed = cfg.at("seed").get<std::uint64_t>();
  const SensitivityMode mode = cfg.at("sensitivity_mode").get<std::string>() == "one_step"
                                   ? SensitivityMode::one_step
                                   : SensitivityMode::full_recurrent;
  NetworkResidualSystem sys(train_data, shape, mode);

  RunReport report;
  report.method = method;
  report.shape = shape;
  report.seed = seed;
  report.system = train_data.meta.system;
  report.config = cfg;

  Vec x_final;
  if (method == "qgs") {
    IntegratorConfig icfg = integrator_from(cfg.at("integrator"));
    SearchOptions sopts = search_from(cfg.at("search"));
    SearchBudget budget;
    budget.max_minima = cfg.at("budget").at("max_minima").get<int>();
    budget.max_escape_attempts = cfg.at("budget").at("max_escape_attempts").get<int>();
    budget.max_wall_seconds = cfg.at("budget").at("max_wall_seconds").get<double>();
    budget.seed = seed;
    sopts.classify.grad_tol = 2.0 * icfg.equilibrium_tol;

    const Vec x0 = random_initial_point(shape.param_count(), seed,
                                        cfg.at("init_sigma").get<double>());
    if (!args.trace_out.empty()) {
      FlowOutcome first = integrate_forward(sys, x0, icfg);
      std::ostringstream csv;
      first.trace.write_csv(csv, false);
      write_file_atomic(args.trace_out, csv.str());
      report.artifacts.push_back(args.trace_out);
    }

    MinimaArchive archive = search_minima(sys, x0, icfg, budget, sopts);
    if (archive.records.empty()) {
      throw std::runtime_error("search found no stable equilibrium within budget");
    }
    const std::size_t best = best_by_validation_index(archive, shape, test_data);
    report.minima_count = static_cast<int>(archive.size());
    report.best_index = static_cast<int>(best);
    for (const EquilibriumRecord& r : archive.records) {
      ArchiveSummaryEntry e;
      e.f_value = r.f_value;
      e.grad_norm = r.grad_norm;
      e.stability = to_string(r.stability);
      e.eig_min = r.eig_min;
      e.eig_max = r.eig_max;
      e.validation_mse = validation_mse(shape, r.x, test_data);
      e.found_at = r.found_at;
      report.archive.push_back(std::move(e));
    }
    x_final = archive.records[best].x;
  } else if (method == "ebp") {
    EbpConfig ecfg;
    ecfg.learning_rate = cfg.at("ebp").at("learning_rate").get<double>();
    ecfg.max_epochs = cfg.at("ebp").at("max_epochs").get<int>();
    ecfg.grad_tol = cfg.at("ebp").at("grad_tol").get<double>();
    ecfg.halve_on_increase = cfg.at("ebp").at("halve_on_increase").get<bool>();
    ecfg.seed = seed;
    const Vec x0 = random_initial_point(shape.param_count(), seed,
                                        cfg.at("init_sigma").get<double>());
    TrainResult res = train_ebp(sys, x0, ecfg);
    if (!args.history_out.empty()) {
      write_history_csv(args.history_out, res.history);
      report.artifacts.push_back(args.history_out);
    }
    x_final = std::move(res.x);
  } else {
    GaConfig gcfg;
    const json& g = cfg.at("ga");
    gcfg.population = g.at("population").get<int>();
    gcfg.generations = g.at("generations").get<int>();
    gcfg.crossover_rate = g.at("crossover_rate").get<double>();
    gcfg.mutation_sigma_init = g.at("mutation_sigma_init").get<double>();
    gcfg.elitism = g.at("elitism").get<int>();
    gcfg.stall_window = g.at("stall_window").get<int>();
    gcfg.init_sigma = g.at("init_sigma").get<double>();
    gcfg.seed = seed;
    TrainResult res = train_ga(sys, gcfg);
    if (!args.history_out.empty()) {
      write_history_csv(args.history_out, res.history);
      report.artifacts.push_back(args.history_out);
    }
    x_final = std::move(res.x);
  }

  SimResult train_sim = simulate_sequence(shape, x_final, train_data.inputs);
  SimResult test_sim = simulate_sequence(shape, x_final, test_data.inputs);
  report.train_mse = mse(train_sim.outputs, train_data.targets);
  report.test_mse = mse(test_sim.outputs, test_data.targets);
  report.generalization_pct = generalization_pct_flat(test_sim.outputs, test_data.targets);

  if (!args.plots_dir.empty()) {
    fs::create_directories(args.plots_dir);
    write_prediction_csv(fs::path(args.plots_dir) / "train_predictions.csv",
                         train_sim.outputs, train_data.targets);
    write_prediction_csv(fs::path(args.plots_dir) / "test_predictions.csv", test_sim.outputs,
                         test_data.targets);
    report.artifacts.push_back(args.plots_dir);
  }

  const std::chrono::duration<double> wall = std::chrono::steady_clock::now() - t0;
  report.wall_seconds = wall.count();
  save_report(report, args.out);
  std::cout << "method=" << method << " train_mse=" << report.train_mse
            << " test_mse=" << report.test_mse << " gen_pct=" << report.generalization_pct;
  if (method == "qgs") std::cout << " minima=" << report.minima_count;
  std::cout << " -> " << args.out << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// stability suites

struct StabilityArgs {
  std::string suite;
  int trials = 20;
  std::uint64_t seed = 0;
  std::string out;
  int outputs = 1;
};

NetworkShape random_small_shape(std::mt19937_64& rng, int t_max) {
  std::uniform_int_distribution<int> n_d(1, 3), m_d(1, 4), t_d(1, t_max);
  return NetworkShape{n_d(rng), m_d(rng), t_d(rng)};
}

Dataset random_dataset(const NetworkShape& shape, int samples, std::mt19937_64& rng,
                       double u_scale = 1.0, double y_scale = 1.0) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Dataset data;
  for (int k = 0; k < samples; ++k) {
    Vec u(shape.inputs), y(shape.outputs);
    for (int i = 0; i < shape.inputs; ++i) u[i] = u_scale * normal(rng);
    for (int i = 0; i < shape.outputs; ++i) y[i] = y_scale * normal(rng);
    data.inputs.push_back(std::move(u));
    data.targets.push_back(std::move(y));
  }
  data.meta.samples = samples;
  data.meta.inputs = shape.inputs;
  data.meta.outputs = shape.outputs;
  return data;
}

Vec random_point(int dim, std::mt19937_64& rng, double sigma = 0.5) {
  std::normal_distribution<double> normal(0.0, sigma);
  Vec x(dim);
  for (int i = 0; i < dim; ++i) x[i] = normal(rng);
  return x;
}

int cmd_stability(const StabilityArgs& args) {
  std::mt19937_64 rng(args.seed);
  std::uniform_int_distribution<int> n_samples(3, 8);
  json trials = json::array();
  int passed = 0;
  int total = 0;

  if (args.suite == "descent") {
    for (int trial = 0; trial < args.trials; ++trial) {
      const NetworkShape shape = random_small_shape(rng, 2);
      NetworkResidualSystem sys(random_dataset(shape, n_samples(rng), rng), shape);
      const Vec x = random_point(shape.param_count(), rng);
      DescentCheck check = lyapunov_descent_check(sys, x);
      trials.push_back({{"trial", trial},
                        {"analytic", check.analytic},
                        {"numeric", check.numeric},
                        {"pass", check.ok}});
      ++total;
      passed += check.ok ? 1 : 0;
    }
  } else if (args.suite == "rate") {
    for (int trial = 0; trial < args.trials; ++trial) {
      std::uniform_int_distribution<int> m_d(2, 3), n_d(1, 2), N_d(5, 10);
      const NetworkShape shape{n_d(rng), m_d(rng), 1};
      const Vec x_star = random_point(shape.param_count(), rng);
      Dataset data = network_generated_dataset(shape, x_star, N_d(rng), rng());
      NetworkResidualSystem sys(data, shape);
      IntegratorConfig icfg;
      icfg.equilibrium_tol = 1e-9;
      icfg.max_steps = 20000;
      icfg.record_states = true;
      const Vec x0 = x_star + 0.05 * random_point(shape.param_count(), rng, 1.0);
      FlowOutcome flow = integrate_forward(sys, x0, icfg);
      auto points = exponential_rate_check(sys, flow.trace);
      int ok = 0, considered = 0;
      for (const RatePoint& p : points) {
        if (p.skipped) continue;
        ++considered;
        ok += p.ok ? 1 : 0;
      }
      const bool pass = considered > 0 && ok >= (95 * considered + 99) / 100;
      trials.push_back({{"trial", trial},
                        {"points", considered},
                        {"ok_points", ok},
                        {"pass", pass}});
      ++total;
      passed += pass ? 1 : 0;
    }
  } else if (args.suite == "perturbation") {
    for (int trial = 0; trial < args.trials; ++trial) {
      const NetworkShape shape = random_small_shape(rng, 2);
      Dataset data = random_dataset(shape, n_samples(rng), rng);
      NetworkResidualSystem sys(data, shape);
      Vec x = random_point(shape.param_count(), rng);
      Vec grad = sys.gradient(x);
      if (grad.norm() < 1e-12) continue;  // nearly impossible with random data
      Vec g = random_point(shape.param_count(), rng, 1.0);
      g *= 0.9 * grad.norm() / g.norm();  // inside the safe ball
      PerturbedDescent small = perturbed_descent_test(sys, x, g);
      PerturbedDescent aligned = perturbed_descent_test(sys, x, Vec(2.0 * grad));
      double ku = 0.0, ky = 0.0;
      for (int k = 0; k < data.size(); ++k) {
        ku = std::max(ku, data.inputs[k].norm());
        ky = std::max(ky, data.targets[k].norm());
      }
      const double bound = perturbation_bound(
          {data.size(), shape.hidden, shape.inputs, ku, ky});
      const bool pass = small.ok && !aligned.ok && aligned.vdot > 0;
      trials.push_back({{"trial", trial},
                        {"vdot_small", small.vdot},
                        {"vdot_aligned", aligned.vdot},
                        {"gamma_max", bound},
                        {"pass", pass}});
      ++total;
      passed += pass ? 1 : 0;
    }
  } else if (args.suite == "bounds") {
    const double ku = 2.0, ky = 1.5;
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::uniform_real_distribution<double> radius(0.0, 1.0);
    for (int trial = 0; trial < args.trials; ++trial) {
      std::uniform_int_distribution<int> m_d(1, 4), n_d(1, 3), N_d(3, 8);
      const NetworkShape shape{n_d(rng), m_d(rng), 1};
      Dataset data;
      const int N = N_d(rng);
      for (int k = 0; k < N; ++k) {
        Vec u(shape.inputs), y(1);
        for (int i = 0; i < shape.inputs; ++i) u[i] = unif(rng);
        const double norm = u.norm();
        if (norm > 1e-12) u *= ku * radius(rng) / norm;  // inside the K_u ball
        y[0] = ky * unif(rng);
        data.inputs.push_back(std::move(u));
        data.targets.push_back(std::move(y));
      }
      data.meta.inputs = shape.inputs;
      data.meta.outputs = 1;
      NetworkResidualSystem sys(data, shape);
      const Vec x = random_point(shape.param_count(), rng);
      NormBoundReport rep = norm_bound_checks(sys, x, ku, ky);
      const bool pass = rep.h_ok && rep.fro_ok && rep.two_ok;
      trials.push_back({{"trial", trial},
                        {"h_norm", rep.h_norm},
                        {"h_bound", rep.h_bound},
                        {"jac_fro", rep.jac_fro},
                        {"jac_two", rep.jac_two},
                        {"jac_bound", rep.jac_bound},
                        {"pass", pass}});
      ++total;
      passed += pass ? 1 : 0;
    }
  } else {
    throw std::runtime_error("unknown stability suite: " + args.suite);
  }

  json report{{"suite", args.suite}, {"seed", args.seed},     {"trials", total},
              {"passed", passed},    {"failed", total - passed}, {"results", trials}};
  const std::string text = report.dump(2) + "\n";
  if (!args.out.empty()) {
    write_file_atomic(args.out, text);
  } else {
    std::cout << text;
  }
  std::cout << "suite=" << args.suite << " " << passed << "/" << total << " trials passed\n";
  return passed == total ? 0 : 1;
}

// ---------------------------------------------------------------------------
// compare

struct CompareArgs {
  std::string runs;
  std::string out;
};

struct ReferenceRow {
  const char* system;
  const char* method;
  double test_mse;
};

// Published reference results for the two benchmark systems.
constexpr ReferenceRow kReferenceRows[] = {
    {"example1", "qgs", 0.00797}, {"example1", "ga", 0.0082}, {"example1", "ebp", 0.0187},
    {"example2", "qgs", 0.0026},  {"example2", "ga", 0.0038}, {"example2", "ebp", 0.0087},
};

int cmd_compare(const CompareArgs& args) {
  std::vector<RunReport> reports;
  std::vector<std::string> files;
  if (!fs::is_directory(args.runs)) {
    throw std::runtime_error("not a directory: " + args.runs);
  }
  std::vector<fs::path> paths;
  for (const auto& entry : fs::directory_iterator(args.runs)) {
    if (entry.path().extension() == ".json") paths.push_back(entry.path());
  }
  std::sort(paths.begin(), paths.end());
  for (const fs::path& p : paths) {
    try {
      reports.push_back(load_report(p));
      files.push_back(p.filename().string());
    } catch (const std::exception&) {
      // not a run report (dataset sidecar etc.)
    }
  }
  if (reports.empty()) {
    throw std::runtime_error("no run reports found in " + args.runs);
  }

  // Group by (system, method).
  struct Group {
    std::vector<double> train, test, gen;
    int count = 0;
  };
  std::vector<std::pair<std::pair<std::string, std::string>, Group>> groups;
  auto group_of = [&](const std::string& system, const std::string& method) -> Group& {
    for (auto& g : groups) {
      if (g.first.first == system && g.first.second == method) return g.second;
    }
    groups.push_back({{system, method}, Group{}});
    return groups.back().second;
  };
  for (const RunReport& r : reports) {
    Group& g = group_of(r.system, r.method);
    g.train.push_back(r.train_mse);
    g.test.push_back(r.test_mse);
    g.gen.push_back(r.generalization_pct);
    g.count++;
  }

  std::ostringstream csv;
  csv.precision(std::numeric_limits<double>::max_digits10);
  csv << "system,method,source,runs,test_mse,train_mse,generalization_pct\n";
  json rows = json::array();
  for (const auto& [key, g] : groups) {
    const double test_med = median(g.test), train_med = median(g.train), gen_med = median(g.gen);
    csv << key.first << "," << key.second << ",measured," << g.count << "," << test_med << ","
        << train_med << "," << gen_med << "\n";
    rows.push_back({{"system", key.first},
                    {"method", key.second},
                    {"source", "measured"},
                    {"runs", g.count},
                    {"test_mse", test_med},
                    {"train_mse", train_med},
                    {"generalization_pct", gen_med}});
  }
  for (const ReferenceRow& ref : kReferenceRows) {
    csv << ref.system << "," << ref.method << ",reference,," << ref.test_mse << ",,\n";
    rows.push_back({{"system", ref.system},
                    {"method", ref.method},
                    {"source", "reference"},
                    {"test_mse", ref.test_mse}});
  }

  fs::path base(args.out);
  if (base.extension() == ".csv" || base.extension() == ".json") {
    base.replace_extension();
  }
  const fs::path csv_path = fs::path(base).concat(".csv");
  const fs::path json_path = fs::path(base).concat(".json");
  write_file_atomic(csv_path, csv.str());
  write_file_atomic(json_path,
                    json{{"reports", files}, {"rows", rows}}.dump(2) + "\n");
  std::cout << "aggregated " << reports.size() << " reports -> " << csv_path.string() << ", "
            << json_path.string() << "\n";
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Gradient-flow training and stability toolkit for small recurrent networks"};
  app.require_subcommand(1);

  GenDataArgs gen;
  CLI::App* gen_cmd = app.add_subcommand("gen-data", "Generate a benchmark dataset (CSV + JSON sidecar)");
  gen_cmd->add_option("--system", gen.system, "example1 | example2")->required();
  gen_cmd->add_option("--samples", gen.samples, "number of samples")->required()
      ->check(CLI::PositiveNumber);
  gen_cmd->add_option("--seed", gen.seed, "rng seed");
  gen_cmd->add_option("--split", gen.split, "train | test")
      ->check(CLI::IsMember({"train", "test"}));
  gen_cmd->add_option("--out", gen.out, "output CSV path")->required();

  TrainCliArgs train;
  CLI::App* train_cmd = app.add_subcommand("train", "Train a network and write a run report");
  auto* m_opt = train_cmd->add_option("--method", train.method, "qgs | ga | ebp")
      ->check(CLI::IsMember({"qgs", "ga", "ebp"}));
  auto* tr_opt = train_cmd->add_option("--train", train.train, "training dataset CSV");
  auto* te_opt = train_cmd->add_option("--test", train.test, "test/validation dataset CSV");
  auto* h_opt = train_cmd->add_option("--hidden", train.hidden, "hidden nodes m");
  auto* s_opt = train_cmd->add_option("--seed", train.seed, "run seed");
  train_cmd->add_option("--config", train.config, "JSON config (or a previous run report)");
  train_cmd->add_option("--out", train.out, "run report path")->required();
  train_cmd->add_option("--plots-dir", train.plots_dir, "write prediction CSVs here");
  train_cmd->add_option("--history-out", train.history_out, "f-history CSV (ga/ebp)");
  train_cmd->add_option("--trace-out", train.trace_out, "first-descent trajectory CSV (qgs)");

  StabilityArgs stab;
  CLI::App* stab_cmd = app.add_subcommand("stability", "Run a numerical stability check suite");
  stab_cmd->add_option("--suite", stab.suite, "descent | rate | perturbation | bounds")
      ->required()
      ->check(CLI::IsMember({"descent", "rate", "perturbation", "bounds"}));
  stab_cmd->add_option("--trials", stab.trials, "trial count")->check(CLI::PositiveNumber);
  stab_cmd->add_option("--seed", stab.seed, "rng seed");
  stab_cmd->add_option("--out", stab.out, "report JSON path (stdout when omitted)");
  stab_cmd->add_option("--outputs", stab.outputs, "network output count for the suite");

  CompareArgs cmp;
  CLI::App* cmp_cmd = app.add_subcommand("compare", "Aggregate run reports into a comparison table");
  cmp_cmd->add_option("--runs", cmp.runs, "directory of run reports")->required();
  cmp_cmd->add_option("--out", cmp.out, "output base path (.csv and .json)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  train.method_set = m_opt->count() > 0;
  train.train_set = tr_opt->count() > 0;
  train.test_set = te_opt->count() > 0;
  train.hidden_set = h_opt->count() > 0;
  train.seed_set = s_opt->count() > 0;

  try {
    if (gen_cmd->parsed()) return cmd_gen_data(gen);
    if (train_cmd->parsed()) return cmd_train(train);
    if (stab_cmd->parsed()) {
      if (stab.suite == "bounds" && stab.outputs != 1) {
        std::cerr << "error: the bounds suite is defined for single-output networks\n";
        return 2;
      }
      return cmd_stability(stab);
    }
    if (cmp_cmd->parsed()) return cmd_compare(cmp);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace qgsnet::cli
