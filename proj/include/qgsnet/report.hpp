#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qgsnet/network.hpp"
#include "qgsnet/solver.hpp"

namespace qgsnet {

inline constexpr int kReportSchemaVersion = 1;

struct ArchiveSummaryEntry {
  double f_value = 0.0;
  double grad_norm = 0.0;
  std::string stability;
  double eig_min = 0.0;
  double eig_max = 0.0;
  double validation_mse = 0.0;
  std::string found_at;
};

/// Full provenance of one training/search run. The config echo is the exact
/// resolved configuration; re-running from it reproduces every metric.
struct RunReport {
  int schema_version = kReportSchemaVersion;
  std::string method;  // qgs | ga | ebp
  NetworkShape shape;
  std::uint64_t seed = 0;
  nlohmann::json config;  // resolved config echo
  double train_mse = 0.0;
  double test_mse = 0.0;
  double generalization_pct = 0.0;
  double wall_seconds = 0.0;
  std::string system;  // benchmark id from the dataset metadata
  int minima_count = 0;
  int best_index = -1;
  std::vector<ArchiveSummaryEntry> archive;
  std::vector<std::string> artifacts;

  nlohmann::json to_json() const;
  static RunReport from_json(const nlohmann::json& j);

  /// Throws when any numeric field is non-finite.
  void validate() const;
};

void save_report(const RunReport& report, const std::filesystem::path& path);
RunReport load_report(const std::filesystem::path& path);

}  // namespace qgsnet
