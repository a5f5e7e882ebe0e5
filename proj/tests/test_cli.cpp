#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include <doctest.h>

#include "fsco/config.hpp"
#include "fsco/controller.hpp"
#include "fsco/telemetry.hpp"
#include "fsco_cli.hpp"

using namespace fsco;

namespace {

namespace fs = std::filesystem;

const char* kTinyConfig =
    "preset = synthetic\n"
    "batch = 16\n"
    "g_hidden = 8,8\n"
    "d_hidden = 8,8\n"
    "actor_hidden = 8,8\n"
    "critic_hidden = 8,8\n"
    "ddpg_batch = 8\n"
    "buffer = 64\n"
    "total_cycles = 40\n"
    "sample_count = 64\n"
    "seed = 4242\n";

fs::path temp_dir(const std::string& leaf) {
  const fs::path dir = fs::temp_directory_path() / "fsco_cli_test" / leaf;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_tiny_config(const fs::path& dir) {
  const fs::path path = dir / "tiny.cfg";
  std::ofstream out(path);
  out << kTinyConfig;
  return path;
}

std::vector<fs::path> subdirectories(const fs::path& dir) {
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_directory()) out.push_back(entry.path());
  }
  return out;
}

fs::path only_run_dir(const fs::path& out_dir) {
  const auto dirs = subdirectories(out_dir);
  REQUIRE(dirs.size() == 1);
  return dirs.front();
}

std::string file_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("train writes a complete, auditable run directory") {
  const fs::path dir = temp_dir("train");
  const fs::path cfg = write_tiny_config(dir);
  const fs::path out = dir / "runs";

  const int rc = cli::run_cli(
      {"train", "--config", cfg.string(), "--out", out.string()});
  CHECK(rc == 0);

  const fs::path run_dir = only_run_dir(out);
  CHECK(fs::exists(run_dir / "manifest.json"));
  CHECK(fs::exists(run_dir / "telemetry.csv"));
  CHECK(fs::exists(run_dir / "coverage.csv"));
  CHECK(fs::exists(run_dir / "u_histogram.csv"));
  CHECK(fs::exists(run_dir / "points-final.csv"));

  const RunManifest manifest = read_manifest(run_dir / "manifest.json");
  CHECK(manifest.mode == "fsco");
  CHECK(manifest.status == "completed");
  CHECK(manifest.seed == 4242);
  CHECK(manifest.output_dir == run_dir.string());
  const FscoConfig parsed = parse_config_text(manifest.config_text, "manifest");
  CHECK(parsed.batch == 16);
  CHECK(parsed.total_cycles == 40);

  const auto records = read_telemetry(run_dir / "telemetry.csv");
  CHECK(records.size() == 40);

  const int check_rc =
      cli::run_cli({"check", (run_dir / "telemetry.csv").string()});
  CHECK(check_rc == 0);
}

TEST_CASE("check flags a tampered reward column") {
  const fs::path dir = temp_dir("tamper");
  const fs::path cfg = write_tiny_config(dir);
  const fs::path out = dir / "runs";
  REQUIRE(cli::run_cli({"train", "--config", cfg.string(), "--cycles", "20",
                        "--out", out.string()}) == 0);
  const fs::path run_dir = only_run_dir(out);

  auto records = read_telemetry(run_dir / "telemetry.csv");
  REQUIRE_FALSE(records.empty());
  records[0].reward = 0.125;  // rewards are never positive
  const fs::path tampered = run_dir / "tampered.csv";
  write_telemetry(records, tampered);

  CHECK(cli::run_cli({"check", tampered.string()}) == 1);
}

TEST_CASE("check without a manifest needs explicit parameters") {
  const fs::path dir = temp_dir("orphan");
  const fs::path cfg = write_tiny_config(dir);
  const fs::path out = dir / "runs";
  REQUIRE(cli::run_cli({"train", "--config", cfg.string(), "--cycles", "20",
                        "--out", out.string()}) == 0);
  const fs::path run_dir = only_run_dir(out);

  const fs::path orphan = dir / "orphan.csv";
  fs::copy_file(run_dir / "telemetry.csv", orphan);

  CHECK(cli::run_cli({"check", orphan.string()}) == 1);
  CHECK(cli::run_cli({"check", orphan.string(), "--eta-d-base", "0.005",
                      "--u-floor", "0.001"}) == 0);
  CHECK(cli::run_cli({"check", orphan.string(), "--eta-d-base", "0.004"}) == 1);
}

TEST_CASE("same seed, same bytes") {
  const fs::path dir = temp_dir("repeat");
  const fs::path cfg = write_tiny_config(dir);
  const fs::path out_a = dir / "a";
  const fs::path out_b = dir / "b";

  REQUIRE(cli::run_cli({"train", "--config", cfg.string(), "--cycles", "30",
                        "--out", out_a.string()}) == 0);
  REQUIRE(cli::run_cli({"train", "--config", cfg.string(), "--cycles", "30",
                        "--out", out_b.string()}) == 0);

  const std::string ta = file_bytes(only_run_dir(out_a) / "telemetry.csv");
  const std::string tb = file_bytes(only_run_dir(out_b) / "telemetry.csv");
  CHECK(ta == tb);
  CHECK_FALSE(ta.empty());

  const fs::path out_c = dir / "c";
  REQUIRE(cli::run_cli({"train", "--config", cfg.string(), "--cycles", "30",
                        "--seed", "4243", "--out", out_c.string()}) == 0);
  CHECK(file_bytes(only_run_dir(out_c) / "telemetry.csv") != ta);
}

TEST_CASE("baseline telemetry matches a constant-action controller run") {
  const fs::path dir = temp_dir("baseline_eq");
  const fs::path cfg_path = write_tiny_config(dir);
  const fs::path out = dir / "runs";
  REQUIRE(cli::run_cli({"baseline", "--config", cfg_path.string(), "--cycles",
                        "30", "--out", out.string()}) == 0);
  const fs::path run_dir = only_run_dir(out);

  const RunManifest manifest = read_manifest(run_dir / "manifest.json");
  CHECK(manifest.mode == "baseline");

  FscoConfig cfg = parse_config_text(std::string(kTinyConfig), "tiny");
  cfg.total_cycles = 30;
  ConstantPolicy stub(1.0);
  const RunResult lib = run_experiment(cfg, stub, {});

  const auto cli_records = read_telemetry(run_dir / "telemetry.csv");
  REQUIRE(cli_records.size() == lib.records.size());
  for (std::size_t i = 0; i < cli_records.size(); ++i) {
    CHECK(cli_records[i].g_loss == lib.records[i].g_loss);
    CHECK(cli_records[i].d_loss == lib.records[i].d_loss);
    CHECK(cli_records[i].action_u == lib.records[i].action_u);
    CHECK(cli_records[i].eta_fsco_d == lib.records[i].eta_fsco_d);
    CHECK(cli_records[i].reward == lib.records[i].reward);
  }
}

TEST_CASE("sweep runs every seed and writes the aggregate table") {
  const fs::path dir = temp_dir("sweep");
  const fs::path cfg = write_tiny_config(dir);
  const fs::path out = dir / "runs";

  const int rc = cli::run_cli({"sweep", "--config", cfg.string(), "--seeds",
                               "1..3", "--cycles", "15", "--out", out.string()});
  CHECK(rc == 0);

  const auto dirs = subdirectories(out);
  CHECK(dirs.size() == 3);
  for (const auto& d : dirs) {
    CHECK(fs::exists(d / "manifest.json"));
    CHECK(fs::exists(d / "telemetry.csv"));
  }

  const fs::path summary = out / "sweep-summary.csv";
  REQUIRE(fs::exists(summary));
  std::ifstream in(summary);
  std::string line;
  std::getline(in, line);
  CHECK(line ==
        "seed,status,cycles,final_g_loss,final_d_loss,covered_modes,"
        "high_quality_fraction,low_action_fraction");
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++rows;
    CHECK(line.find("completed") != std::string::npos);
  }
  CHECK(rows == 3);
}

TEST_CASE("bad invocations fail without throwing") {
  const fs::path dir = temp_dir("bad");
  const fs::path cfg = write_tiny_config(dir);

  CHECK(cli::run_cli({}) != 0);
  CHECK(cli::run_cli({"train"}) == 1);  // neither --config nor --preset
  CHECK(cli::run_cli({"train", "--config", cfg.string(), "--preset",
                      "synthetic"}) == 1);
  CHECK(cli::run_cli({"train", "--config",
                      (dir / "missing.cfg").string()}) == 1);
  CHECK(cli::run_cli({"check", (dir / "nope.csv").string(), "--eta-d-base",
                      "0.005"}) == 1);
  CHECK(cli::run_cli({"frobnicate"}) != 0);
}
