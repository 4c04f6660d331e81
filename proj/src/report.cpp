#include "qgsnet/report.hpp"

#include <cmath>
#include <stdexcept>

#include "qgsnet/io_util.hpp"

namespace qgsnet {

using nlohmann::json;

json RunReport::to_json() const {
  json entries = json::array();
  for (const ArchiveSummaryEntry& e : archive) {
    entries.push_back({{"f_value", e.f_value},
                       {"grad_norm", e.grad_norm},
                       {"stability", e.stability},
                       {"eig_min", e.eig_min},
                       {"eig_max", e.eig_max},
                       {"validation_mse", e.validation_mse},
                       {"found_at", e.found_at}});
  }
  return json{{"schema_version", schema_version},
              {"method", method},
              {"shape", {{"inputs", shape.inputs}, {"hidden", shape.hidden}, {"outputs", shape.outputs}}},
              {"seed", seed},
              {"system", system},
              {"config", config},
              {"metrics",
               {{"train_mse", train_mse},
                {"test_mse", test_mse},
                {"generalization_pct", generalization_pct},
                {"wall_seconds", wall_seconds}}},
              {"qgs", {{"minima_count", minima_count}, {"best_index", best_index}, {"archive", entries}}},
              {"artifacts", artifacts}};
}

RunReport RunReport::from_json(const json& j) {
  RunReport r;
  r.schema_version = j.at("schema_version").get<int>();
  r.method = j.at("method").get<std::string>();
  r.shape.inputs = j.at("shape").at("inputs").get<int>();
  r.shape.hidden = j.at("shape").at("hidden").get<int>();
  r.shape.outputs = j.at("shape").at("outputs").get<int>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.system = j.value("system", "");
  r.config = j.value("config", json::object());
  const json& m = j.at("metrics");
  r.train_mse = m.at("train_mse").get<double>();
  r.test_mse = m.at("test_mse").get<double>();
  r.generalization_pct = m.at("generalization_pct").get<double>();
  r.wall_seconds = m.at("wall_seconds").get<double>();
  if (j.contains("qgs")) {
    r.minima_count = j["qgs"].value("minima_count", 0);
    r.best_index = j["qgs"].value("best_index", -1);
    for (const json& e : j["qgs"].value("archive", json::array())) {
      ArchiveSummaryEntry entry;
      entry.f_value = e.at("f_value").get<double>();
      entry.grad_norm = e.at("grad_norm").get<double>();
      entry.stability = e.at("stability").get<std::string>();
      entry.eig_min = e.at("eig_min").get<double>();
      entry.eig_max = e.at("eig_max").get<double>();
      entry.validation_mse = e.at("validation_mse").get<double>();
      entry.found_at = e.value("found_at", "");
      r.archive.push_back(std::move(entry));
    }
  }
  r.artifacts = j.value("artifacts", std::vector<std::string>{});
  return r;
}

void RunReport::validate() const {
  auto check = [](double v, const char* name) {
    if (!std::isfinite(v)) {
      throw std::runtime_error(std::string("report field is not finite: ") + name);
    }
  };
  check(train_mse, "train_mse");
  check(test_mse, "test_mse");
  check(generalization_pct, "generalization_pct");
  check(wall_seconds, "wall_seconds");
  for (const ArchiveSummaryEntry& e : archive) {
    check(e.f_value, "archive.f_value");
    check(e.grad_norm, "archive.grad_norm");
    check(e.eig_min, "archive.eig_min");
    check(e.eig_max, "archive.eig_max");
    check(e.validation_mse, "archive.validation_mse");
  }
}

void save_report(const RunReport& report, const std::filesystem::path& path) {
  report.validate();
  write_file_atomic(path, report.to_json().dump(2) + "\n");
}

RunReport load_report(const std::filesystem::path& path) {
  return RunReport::from_json(json::parse(read_file(path)));
}

}  // namespace qgsnet
