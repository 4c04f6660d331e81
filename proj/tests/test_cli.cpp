#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qgsnet/cli.hpp"
#include "qgsnet/io_util.hpp"
#include "qgsnet/report.hpp"

using namespace qgsnet;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"qgsnet"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  return cli::run(static_cast<int>(argv.size()), argv.data());
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / fs::path("qgsnet_cli_" + std::to_string(::getpid()))) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("gen-data writes deterministic CSV plus sidecar") {
  TempDir tmp;
  const std::string out = tmp.file("d.csv");
  CHECK(run_cli({"gen-data", "--system", "example1", "--samples", "200", "--seed", "7",
                 "--split", "train", "--out", out}) == 0);
  const std::string first = read_file(out);
  CHECK(first.rfind("u_1,u_2,u_3,u_4,y_1", 0) == 0);
  CHECK(fs::exists(tmp.file("d.json")));

  CHECK(run_cli({"gen-data", "--system", "example1", "--samples", "200", "--seed", "7",
                 "--split", "train", "--out", out}) == 0);
  CHECK(read_file(out) == first);  // identical bytes
}

TEST_CASE("usage errors exit with code 2") {
  TempDir tmp;
  CHECK(run_cli({"gen-data", "--samples", "10", "--out", tmp.file("x.csv")}) == 2);
  CHECK(run_cli({"stability"}) == 2);
  CHECK(run_cli({"no-such-command"}) == 2);
  CHECK(run_cli({"stability", "--suite", "bounds", "--trials", "2", "--outputs", "2"}) == 2);
}

TEST_CASE("train/compare round trip on a desk-scale example1 instance") {
  TempDir tmp;
  const std::string train_csv = tmp.file("train.csv");
  const std::string test_csv = tmp.file("test.csv");
  REQUIRE(run_cli({"gen-data", "--system", "example1", "--samples", "40", "--seed", "3",
                   "--split", "train", "--out", train_csv}) == 0);
  REQUIRE(run_cli({"gen-data", "--system", "example1", "--samples", "40", "--seed", "3",
                   "--split", "test", "--out", test_csv}) == 0);

  // Small qgs budget keeps this test quick.
  const std::string config = tmp.file("config.json");
  write_file_atomic(config, json{{"budget", {{"max_minima", 2}, {"max_escape_attempts", 2}}},
                                 {"integrator", {{"equilibrium_tol", 1e-5}, {"max_steps", 15000}}}}
                                .dump());

  const fs::path runs = fs::path(tmp.file("runs"));
  fs::create_directories(runs);
  const std::string qgs_out = (runs / "qgs.json").string();
  REQUIRE(run_cli({"train", "--method", "qgs", "--train", train_csv, "--test", test_csv,
                   "--hidden", "3", "--seed", "5", "--config", config, "--out", qgs_out}) == 0);

  RunReport qgs = load_report(qgs_out);
  CHECK(qgs.method == "qgs");
  CHECK(qgs.shape.hidden == 3);
  CHECK(qgs.minima_count >= 1);
  CHECK(qgs.system == "example1");
  CHECK(std::isfinite(qgs.test_mse));
  CHECK(static_cast<int>(qgs.archive.size()) == qgs.minima_count);

  const std::string ebp_out = (runs / "ebp.json").string();
  const std::string ebp_cfg = tmp.file("ebp.json");
  write_file_atomic(ebp_cfg, json{{"ebp", {{"max_epochs", 300}}}}.dump());
  REQUIRE(run_cli({"train", "--method", "ebp", "--train", train_csv, "--test", test_csv,
                   "--hidden", "3", "--seed", "5", "--config", ebp_cfg, "--out", ebp_out}) == 0);

  const std::string ga_out = (runs / "ga.json").string();
  const std::string ga_cfg = tmp.file("ga.json");
  write_file_atomic(ga_cfg,
                    json{{"ga", {{"population", 30}, {"generations", 30}}}}.dump());
  REQUIRE(run_cli({"train", "--method", "ga", "--train", train_csv, "--test", test_csv,
                   "--hidden", "3", "--seed", "5", "--config", ga_cfg, "--out", ga_out}) == 0);

  // --hidden echoes into the report config.
  RunReport ebp = load_report(ebp_out);
  CHECK(ebp.config.at("hidden").get<int>() == 3);

  const std::string cmp_out = tmp.file("table");
  REQUIRE(run_cli({"compare", "--runs", runs.string(), "--out", cmp_out}) == 0);
  const std::string csv = read_file(cmp_out + ".csv");
  CHECK(csv.find("example1,qgs,measured") != std::string::npos);
  CHECK(csv.find("example1,ebp,measured") != std::string::npos);
  CHECK(csv.find("example1,ga,measured") != std::string::npos);
  CHECK(csv.find("0.00797") != std::string::npos);  // reference row
  CHECK(csv.find("example2,ebp,reference") != std::string::npos);
  const json table = json::parse(read_file(cmp_out + ".json"));
  CHECK(table.at("rows").size() >= 9);

  // Replay from the report's config echo reproduces the metrics bit-identically.
  const std::string replay_out = tmp.file("replay.json");
  REQUIRE(run_cli({"train", "--config", qgs_out, "--out", replay_out}) == 0);
  RunReport replay = load_report(replay_out);
  CHECK(replay.train_mse == qgs.train_mse);
  CHECK(replay.test_mse == qgs.test_mse);
  CHECK(replay.generalization_pct == qgs.generalization_pct);
  CHECK(replay.minima_count == qgs.minima_count);
}

TEST_CASE("ebp divergence surfaces as a runtime failure naming the epoch") {
  TempDir tmp;
  const std::string train_csv = tmp.file("train.csv");
  const std::string test_csv = tmp.file("test.csv");
  REQUIRE(run_cli({"gen-data", "--system", "example1", "--samples", "20", "--seed", "2",
                   "--split", "train", "--out", train_csv}) == 0);
  REQUIRE(run_cli({"gen-data", "--system", "example1", "--samples", "20", "--seed", "2",
                   "--split", "test", "--out", test_csv}) == 0);
  const std::string cfg = tmp.file("cfg.json");
  write_file_atomic(cfg, json{{"ebp",
                               {{"learning_rate", 50.0},
                                {"halve_on_increase", false},
                                {"max_epochs", 200}}}}
                             .dump());
  CHECK(run_cli({"train", "--method", "ebp", "--train", train_csv, "--test", test_csv,
                 "--hidden", "3", "--seed", "1", "--config", cfg,
                 "--out", tmp.file("r.json")}) == 1);
}

TEST_CASE("stability suites run from the CLI") {
  TempDir tmp;
  const std::string out = tmp.file("suite.json");
  CHECK(run_cli({"stability", "--suite", "perturbation", "--trials", "25", "--seed", "1",
                 "--out", out}) == 0);
  const json rep = json::parse(read_file(out));
  CHECK(rep.at("passed").get<int>() == rep.at("trials").get<int>());
  CHECK(rep.at("results").size() == 25);

  CHECK(run_cli({"stability", "--suite", "bounds", "--trials", "10", "--seed", "2",
                 "--out", tmp.file("b.json")}) == 0);
  CHECK(run_cli({"stability", "--suite", "descent", "--trials", "10", "--seed", "3",
                 "--out", tmp.file("d.json")}) == 0);
  CHECK(run_cli({"stability", "--suite", "rate", "--trials", "3", "--seed", "4",
                 "--out", tmp.file("r.json")}) == 0);
}

TEST_CASE("compare fails cleanly on an empty directory") {
  TempDir tmp;
  const fs::path runs = fs::path(tmp.file("empty"));
  fs::create_directories(runs);
  CHECK(run_cli({"compare", "--runs", runs.string(), "--out", tmp.file("t")}) == 1);
}
