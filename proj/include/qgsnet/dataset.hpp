#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "qgsnet/types.hpp"

namespace qgsnet {

struct DatasetMeta {
  std::string system = "custom";
  std::uint64_t seed = 0;
  int samples = 0;
  std::string split = "train";
  int inputs = 0;
  int outputs = 0;
};

/// Ordered samples (u(k), y(k)) for k = 1..N.
struct Dataset {
  std::vector<Vec> inputs;
  std::vector<Vec> targets;
  DatasetMeta meta;

  int size() const { return static_cast<int>(inputs.size()); }
  int input_dim() const {
    return inputs.empty() ? meta.inputs : static_cast<int>(inputs.front().size());
  }
  int output_dim() const {
    return targets.empty() ? meta.outputs : static_cast<int>(targets.front().size());
  }
};

/// Throws std::invalid_argument on length mismatch, inconsistent dimensions
/// or non-finite entries.
void validate_dataset(const Dataset& data);

/// Sidecar lives next to the CSV as <stem>.json.
std::filesystem::path sidecar_path(const std::filesystem::path& csv_path);

/// Writes the CSV (header u_1,..,u_n,y_1,..,y_t, one row per sample) plus the
/// JSON metadata sidecar. Writes are whole-file atomic (temp file + rename).
void save_dataset(const Dataset& data, const std::filesystem::path& csv_path);

/// Reads a dataset written by save_dataset. The sidecar is optional; without
/// it the metadata keeps defaults and dimensions are inferred from the header.
Dataset load_dataset(const std::filesystem::path& csv_path);

}  // namespace qgsnet
