#include "qgsnet/dataset.hpp"

#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "qgsnet/io_util.hpp"

namespace qgsnet {

using nlohmann::json;

void validate_dataset(const Dataset& data) {
  if (data.inputs.size() != data.targets.size()) {
    throw std::invalid_argument("dataset inputs and targets differ in length");
  }
  for (int k = 0; k < data.size(); ++k) {
    if (data.inputs[k].size() != data.inputs.front().size() ||
        data.targets[k].size() != data.targets.front().size()) {
      throw std::invalid_argument("dataset rows have inconsistent dimensions");
    }
    if (!data.inputs[k].allFinite() || !data.targets[k].allFinite()) {
      throw std::invalid_argument("dataset contains non-finite values");
    }
  }
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path) {
  std::filesystem::path p = csv_path;
  if (p.has_extension() && p.extension() != ".json") {
    p.replace_extension(".json");
  } else if (!p.has_extension()) {
    p += ".json";
  }
  return p;
}

void save_dataset(const Dataset& data, const std::filesystem::path& csv_path) {
  validate_dataset(data);
  const int n = data.input_dim();
  const int t = data.output_dim();

  std::ostringstream csv;
  csv.precision(std::numeric_limits<double>::max_digits10);
  for (int j = 0; j < n; ++j) csv << "u_" << (j + 1) << ",";
  for (int j = 0; j < t; ++j) csv << "y_" << (j + 1) << (j + 1 < t ? "," : "");
  csv << "\n";
  for (int k = 0; k < data.size(); ++k) {
    for (int j = 0; j < n; ++j) csv << data.inputs[k][j] << ",";
    for (int j = 0; j < t; ++j) csv << data.targets[k][j] << (j + 1 < t ? "," : "");
    csv << "\n";
  }
  write_file_atomic(csv_path, csv.str());

  json meta{{"system", data.meta.system}, {"seed", data.meta.seed},
            {"N", data.size()},           {"split", data.meta.split},
            {"n", n},                     {"t", t}};
  write_file_atomic(sidecar_path(csv_path), meta.dump(2) + "\n");
}

namespace {

std::vector<double> parse_csv_row(const std::string& line) {
  std::vector<double> row;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    row.push_back(std::stod(cell));
  }
  return row;
}

}  // namespace

Dataset load_dataset(const std::filesystem::path& csv_path) {
  std::ifstream in(csv_path);
  if (!in) {
    throw std::runtime_error("cannot open dataset file " + csv_path.string());
  }
  std::string header;
  if (!std::getline(in, header)) {
    throw std::runtime_error("dataset file is empty: " + csv_path.string());
  }
  int n = 0, t = 0;
  {
    std::stringstream ss(header);
    std::string col;
    while (std::getline(ss, col, ',')) {
      if (col.rfind("u_", 0) == 0) ++n;
      else if (col.rfind("y_", 0) == 0) ++t;
      else throw std::runtime_error("unexpected dataset column name: " + col);
    }
  }
  if (n == 0 || t == 0) {
    throw std::runtime_error("dataset header must name u_* and y_* columns");
  }

  Dataset data;
  data.meta.inputs = n;
  data.meta.outputs = t;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row = parse_csv_row(line);
    if (static_cast<int>(row.size()) != n + t) {
      throw std::runtime_error("dataset row has wrong column count");
    }
    Vec u(n), y(t);
    for (int j = 0; j < n; ++j) u[j] = row[j];
    for (int j = 0; j < t; ++j) y[j] = row[n + j];
    data.inputs.push_back(std::move(u));
    data.targets.push_back(std::move(y));
  }
  data.meta.samples = data.size();

  const std::filesystem::path side = sidecar_path(csv_path);
  if (std::filesystem::exists(side)) {
    std::ifstream sin(side);
    json meta = json::parse(sin);
    data.meta.system = meta.value("system", data.meta.system);
    data.meta.seed = meta.value("seed", data.meta.seed);
    data.meta.split = meta.value("split", data.meta.split);
    data.meta.samples = meta.value("N", data.meta.samples);
  }
  validate_dataset(data);
  return data;
}

}  // namespace qgsnet
