#include "fsco_cli.hpp"

#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "fsco/config.hpp"
#include "fsco/controller.hpp"
#include "fsco/errors.hpp"
#include "fsco/serialize.hpp"
#include "fsco/telemetry.hpp"

namespace fsco::cli {

namespace {

namespace fs = std::filesystem;

struct CommonOpts {
  std::string config_path;
  std::string preset;
  std::optional<std::uint64_t> seed;
  std::optional<long long> cycles;
  std::optional<long long> sample_every;
  std::string out_dir = "runs";
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config_path, "config file (key = value lines)");
  cmd->add_option("--preset", o.preset, "built-in preset: mnist28 | synthetic");
  cmd->add_option("--seed", o.seed, "master seed override");
  cmd->add_option("--cycles", o.cycles, "total training cycles override");
  cmd->add_option("--sample-every", o.sample_every,
                  "emit samples every N cycles (0: only at the end)");
  cmd->add_option("--out", o.out_dir, "parent directory for run outputs");
}

FscoConfig resolve_config(const CommonOpts& o) {
  if (!o.config_path.empty() && !o.preset.empty()) {
    throw ConfigError("pass either --config or --preset, not both");
  }
  FscoConfig cfg;
  if (!o.config_path.empty()) {
    cfg = parse_config(o.config_path);
  } else if (!o.preset.empty()) {
    cfg = preset_config(o.preset);
  } else {
    throw ConfigError("one of --config or --preset is required");
  }
  if (o.seed) cfg.seed = *o.seed;
  if (o.cycles) cfg.total_cycles = *o.cycles;
  if (o.sample_every) cfg.sample_every = *o.sample_every;
  validate_config(cfg);
  return cfg;
}

std::string timestamp_compact() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y%m%d-%H%M%S", &tm);
  return buf;
}

/// <out>/<preset>-seed<seed>-<timestamp>, suffixed if taken; never reuses an
/// existing directory.
fs::path make_run_dir(const fs::path& base, const FscoConfig& cfg) {
  const std::string name =
      cfg.preset + "-seed" + std::to_string(cfg.seed) + "-" + timestamp_compact();
  fs::path dir = base / name;
  for (int k = 2; fs::exists(dir); ++k) {
    dir = base / (name + "-" + std::to_string(k));
  }
  fs::create_directories(dir);
  return dir;
}

void print_summary(const FscoConfig& cfg, const RunResult& result,
                   const fs::path& run_dir) {
  std::cout << "run directory: " << run_dir.string() << "\n";
  std::cout << "cycles completed: " << result.records.size() << " of "
            << cfg.total_cycles << "\n";
  std::cout << "status: "
            << (result.status == RunStatus::kCompleted ? "completed"
                                                       : "numeric-abort")
            << "\n";
  if (!result.diagnostic.empty()) {
    std::cout << "diagnostic: " << result.diagnostic << "\n";
  }
  if (!result.records.empty()) {
    const auto& last = result.records.back();
    std::cout << "final g_loss " << last.g_loss << ", d_loss " << last.d_loss
              << "\n";
    std::cout << "fraction of cycles with u < 0.05: "
              << result.low_action_fraction << "\n";
  }
  if (result.has_coverage) {
    std::cout << "mode coverage: " << result.final_coverage.covered_modes << "/"
              << cfg.mixture_modes << ", high-quality fraction "
              << result.final_coverage.high_quality_fraction << "\n";
  }
}

/// One train or baseline run into a fresh directory; returns the result and
/// writes the manifest. Shared by the single-run commands and sweep.
RunResult execute_run(const FscoConfig& cfg, bool baseline, const fs::path& base_out,
                      fs::path& run_dir_out) {
  const fs::path run_dir = make_run_dir(base_out, cfg);
  run_dir_out = run_dir;

  RunManifest manifest;
  manifest.config_text = config_snapshot(cfg);
  manifest.seed = cfg.seed;
  manifest.mode = baseline ? "baseline" : "fsco";
  manifest.started_at = timestamp_utc();
  manifest.output_dir = run_dir.string();

  RunResult result;
  try {
    if (baseline) {
      result = run_fixed_rate(cfg, run_dir);
    } else {
      DdpgPolicy policy(ddpg_params_from(cfg), cfg.seed);
      result = run_experiment(cfg, policy, run_dir);
    }
    manifest.status = result.status == RunStatus::kCompleted ? "completed"
                                                             : "numeric-abort";
  } catch (const Error&) {
    manifest.status = "io-error";
    manifest.finished_at = timestamp_utc();
    write_manifest(manifest, run_dir / "manifest.json");
    throw;
  }
  manifest.finished_at = timestamp_utc();
  write_manifest(manifest, run_dir / "manifest.json");
  return result;
}

int cmd_run(const CommonOpts& opts, bool baseline) {
  const FscoConfig cfg = resolve_config(opts);
  fs::path run_dir;
  const RunResult result = execute_run(cfg, baseline, opts.out_dir, run_dir);
  print_summary(cfg, result, run_dir);
  return result.status == RunStatus::kCompleted ? 0 : 1;
}

std::pair<std::uint64_t, std::uint64_t> parse_seed_range(const std::string& s) {
  const auto dots = s.find("..");
  if (dots == std::string::npos) {
    const auto v = static_cast<std::uint64_t>(parse_int(s));
    return {v, v};
  }
  const auto lo = static_cast<std::uint64_t>(parse_int(s.substr(0, dots)));
  const auto hi = static_cast<std::uint64_t>(parse_int(s.substr(dots + 2)));
  if (hi < lo) throw ArgumentError("seed range " + s + " is empty");
  return {lo, hi};
}

int cmd_sweep(const CommonOpts& opts, const std::string& seeds, bool baseline) {
  FscoConfig cfg = resolve_config(opts);
  const auto [lo, hi] = parse_seed_range(seeds);

  std::ostringstream table;
  table << "seed,status,cycles,final_g_loss,final_d_loss,covered_modes,"
           "high_quality_fraction,low_action_fraction\n";
  bool all_completed = true;
  for (std::uint64_t seed = lo; seed <= hi; ++seed) {
    cfg.seed = seed;
    fs::path run_dir;
    const RunResult result = execute_run(cfg, baseline, opts.out_dir, run_dir);
    std::cout << "seed " << seed << " -> " << run_dir.string() << "\n";
    print_summary(cfg, result, run_dir);
    std::cout << "\n";

    const bool completed = result.status == RunStatus::kCompleted;
    all_completed = all_completed && completed;
    table << seed << ',' << (completed ? "completed" : "numeric-abort") << ','
          << result.records.size() << ',';
    if (!result.records.empty()) {
      table << format_double(result.records.back().g_loss) << ','
            << format_double(result.records.back().d_loss) << ',';
    } else {
      table << ",,";
    }
    if (result.has_coverage) {
      table << result.final_coverage.covered_modes << ','
            << format_double(result.final_coverage.high_quality_fraction) << ',';
    } else {
      table << ",,";
    }
    table << format_double(result.low_action_fraction) << "\n";
  }

  const fs::path summary_path = fs::path(opts.out_dir) / "sweep-summary.csv";
  fs::create_directories(opts.out_dir);
  std::ofstream out(summary_path, std::ios::binary);
  if (!out) throw IoError("cannot open " + summary_path.string() + " for writing");
  out << table.str();
  std::cout << "sweep summary: " << summary_path.string() << "\n";
  std::cout << table.str();
  return all_completed ? 0 : 1;
}

int cmd_check(const std::string& csv_path, std::optional<double> eta_d_base,
              std::optional<double> u_floor) {
  double base = 0.0;
  double floor = u_floor.value_or(0.0);
  if (eta_d_base) {
    base = *eta_d_base;
  } else {
    const fs::path manifest_path = fs::path(csv_path).parent_path() / "manifest.json";
    if (!fs::exists(manifest_path)) {
      throw ConfigError("no manifest.json next to " + csv_path +
                        "; pass --eta-d-base");
    }
    const RunManifest m = read_manifest(manifest_path);
    const FscoConfig cfg = parse_config_text(m.config_text, manifest_path.string());
    base = cfg.eta_d_base;
    if (!u_floor) floor = cfg.u_floor;
  }

  const auto records = read_telemetry(csv_path);
  const CheckReport report = check_records(records, base, floor);
  for (const auto& v : report.violations) {
    std::cerr << csv_path << ": " << v.message << "\n";
  }
  if (!report.ok()) {
    std::cerr << csv_path << ": " << report.violations.size() << " violation(s) over "
              << report.rows_checked << " rows\n";
    return 1;
  }
  std::cout << "checked " << report.rows_checked << " rows: ok\n";
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"GAN training with a learned discriminator step-size controller"};
  app.require_subcommand(1);

  CommonOpts train_opts;
  CLI::App* train = app.add_subcommand(
      "train", "run the controller-driven training loop");
  add_common(train, train_opts);

  CommonOpts baseline_opts;
  CLI::App* baseline = app.add_subcommand(
      "baseline", "run fixed-rate training (no controller, u = 1)");
  add_common(baseline, baseline_opts);

  CommonOpts sweep_opts;
  std::string seeds;
  bool sweep_baseline = false;
  CLI::App* sweep = app.add_subcommand("sweep", "run a range of seeds and aggregate");
  add_common(sweep, sweep_opts);
  sweep->add_option("--seeds", seeds, "seed range A..B (inclusive) or single seed")
      ->required();
  sweep->add_flag("--baseline", sweep_baseline, "sweep in fixed-rate mode");

  std::string check_csv;
  std::optional<double> check_base;
  std::optional<double> check_floor;
  CLI::App* check = app.add_subcommand(
      "check", "audit a telemetry CSV's reward and step-size identities");
  check->add_option("csv", check_csv, "telemetry CSV to audit")->required();
  check->add_option("--eta-d-base", check_base,
                    "base discriminator rate (default: from manifest.json)");
  check->add_option("--u-floor", check_floor,
                    "action lower bound (default: from manifest.json)");

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("fsco");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (train->parsed()) return cmd_run(train_opts, false);
    if (baseline->parsed()) return cmd_run(baseline_opts, true);
    if (sweep->parsed()) return cmd_sweep(sweep_opts, seeds, sweep_baseline);
    if (check->parsed()) return cmd_check(check_csv, check_base, check_floor);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace fsco::cli
