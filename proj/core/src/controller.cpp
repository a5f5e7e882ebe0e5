#include "fsco/controller.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "fsco/errors.hpp"
#include "fsco/serialize.hpp"
#include "fsco/telemetry.hpp"

namespace fsco {

EmaTracker::EmaTracker(std::size_t window) {
  if (window == 0) throw ArgumentError("ema window must be positive");
  alpha_ = 2.0 / (static_cast<double>(window) + 1.0);
}

double EmaTracker::update(double x) {
  if (!std::isfinite(x)) {
    throw ArgumentError("non-finite value " + format_double(x) + " fed to ema");
  }
  if (!seeded_) {
    value_ = x;
    seeded_ = true;
  } else {
    value_ = alpha_ * x + (1.0 - alpha_) * value_;
  }
  return value_;
}

double EmaTracker::value() const { return value_; }

std::vector<double> ControlState::to_vector() const {
  return {g_loss_ema, d_loss_ema, loss_gap, prev_action, d_real_mean, d_fake_mean};
}

double compute_reward(double g_loss, double d_loss) {
  if (!std::isfinite(g_loss) || !std::isfinite(d_loss)) {
    throw ArgumentError("compute_reward needs finite losses, got g=" +
                        format_double(g_loss) + " d=" + format_double(d_loss));
  }
  return -std::fabs(g_loss - d_loss);
}

double modulate_step_size(double eta_d_base, double u, double u_floor) {
  if (!(eta_d_base > 0.0)) {
    throw ArgumentError("eta_d_base must be positive, got " +
                        format_double(eta_d_base));
  }
  if (!(u_floor > 0.0 && u_floor < 1.0)) {
    throw ArgumentError("u_floor must lie in (0,1), got " + format_double(u_floor));
  }
  if (!(u >= 0.0 && u <= 1.0)) {
    throw ArgumentError("action u = " + format_double(u) +
                        " outside [0,1]; upstream clamping failed");
  }
  return eta_d_base * std::max(u, u_floor);
}

ControlState build_state(const GanStepReport& report, double prev_action,
                         EmaTracker& g_ema, EmaTracker& d_ema) {
  ControlState s;
  s.g_loss_ema = g_ema.update(report.g_loss);
  s.d_loss_ema = d_ema.update(report.d_loss);
  s.loss_gap = s.g_loss_ema - s.d_loss_ema;
  s.prev_action = prev_action;
  s.d_real_mean = report.d_real_mean;
  s.d_fake_mean = report.d_fake_mean;
  return s;
}

namespace {

DdpgAgent make_agent(const DdpgParams& params, std::uint64_t master_seed) {
  Rng init = Rng::derive(master_seed, streams::kAgentInit);
  return DdpgAgent(params, init);
}

}  // namespace

DdpgPolicy::DdpgPolicy(const DdpgParams& params, std::uint64_t master_seed)
    : agent_(make_agent(params, master_seed)),
      explore_rng_(Rng::derive(master_seed, streams::kAgentExplore)),
      replay_rng_(Rng::derive(master_seed, streams::kReplay)) {}

double DdpgPolicy::select(const ControlState& state, bool explore) {
  return agent_.select_action(state.to_vector(), explore, explore_rng_);
}

void DdpgPolicy::observe(const Transition& t) {
  agent_.store(t);
  if (agent_.buffer().size() >= agent_.params().batch) {
    agent_.update(replay_rng_);
  }
}

DdpgParams ddpg_params_from(const FscoConfig& cfg) {
  DdpgParams p;
  p.state_dim = ControlState::kDim;
  p.action_dim = 1;
  p.actor_hidden = cfg.actor_hidden;
  p.critic_hidden = cfg.critic_hidden;
  p.gamma = cfg.gamma;
  p.tau = cfg.tau;
  p.actor_lr = cfg.actor_lr;
  p.critic_lr = cfg.critic_lr;
  p.noise_sigma = cfg.noise_sigma;
  p.action_floor = cfg.u_floor;
  p.batch = cfg.ddpg_batch;
  p.buffer_capacity = cfg.buffer_capacity;
  return p;
}

CycleRecord run_cycle(GanPair& gan, ActionPolicy& policy, const FscoConfig& cfg,
                      const Tensor& real_batch, long long cycle_index,
                      LoopState& loop, Rng& noise_rng) {
  if (real_batch.rows() == 0) throw ArgumentError("empty real batch");
  const auto t0 = std::chrono::steady_clock::now();
  const std::string prefix = "cycle " + std::to_string(cycle_index) + ": ";
  try {
    const ControlState prev = loop.observation;
    const double u_raw = policy.select(prev, true);
    const double eta_d = modulate_step_size(cfg.eta_d_base, u_raw, cfg.u_floor);
    const double u = std::max(u_raw, cfg.u_floor);

    discriminator_step(gan, real_batch, eta_d, noise_rng);
    generator_step(gan, real_batch.rows(), cfg.eta_g, noise_rng);
    const GanStepReport report = evaluate_losses(gan, real_batch, noise_rng);

    const double reward = compute_reward(report.g_loss, report.d_loss);
    const ControlState next = build_state(report, u, loop.g_ema, loop.d_ema);
    policy.observe(Transition{prev.to_vector(), u, reward, next.to_vector()});
    loop.observation = next;

    CycleRecord rec;
    rec.step = cycle_index;
    rec.g_loss = report.g_loss;
    rec.d_loss = report.d_loss;
    rec.action_u = u;
    rec.eta_fsco_d = eta_d;
    rec.reward = reward;
    rec.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return rec;
  } catch (const NumericError& e) {
    throw NumericError(prefix + e.what());
  } catch (const DimensionError& e) {
    throw DimensionError(prefix + e.what());
  } catch (const StateError& e) {
    throw StateError(prefix + e.what());
  } catch (const ArgumentError& e) {
    throw ArgumentError(prefix + e.what());
  }
}

namespace {

std::filesystem::path resolve_mnist_path(const std::string& configured,
                                         const char* fallback_name) {
  if (!configured.empty()) return configured;
  const char* dir = std::getenv("FSCO_DATA_DIR");
  if (dir == nullptr || *dir == '\0') {
    throw ConfigError(std::string("mnist file not configured and FSCO_DATA_DIR "
                                  "not set (wanted ") +
                      fallback_name + ")");
  }
  return std::filesystem::path(dir) / fallback_name;
}

/// Per-cycle real-data source. Image datasets are walked in sequential
/// minibatches (short final batch per epoch); the synthetic mixture is
/// sampled fresh every cycle.
class BatchFeed {
 public:
  explicit BatchFeed(const FscoConfig& cfg)
      : synthetic_(cfg.dataset == "synthetic"),
        batch_(cfg.batch),
        rng_(Rng::derive(cfg.seed, streams::kData)) {
    if (synthetic_) {
      spec_.modes = cfg.mixture_modes;
      spec_.sigma = cfg.mixture_sigma;
      spec_.ring_radius = cfg.mixture_radius;
    } else {
      dataset_ = load_mnist(
          resolve_mnist_path(cfg.mnist_images, "train-images-idx3-ubyte"),
          resolve_mnist_path(cfg.mnist_labels, "train-labels-idx1-ubyte"));
      cycles_per_epoch_ = static_cast<long long>(
          (dataset_.size() + batch_ - 1) / batch_);
    }
  }

  const MixtureSpec& spec() const { return spec_; }
  std::size_t data_dim() const { return synthetic_ ? 2 : dataset_.data_dim; }
  bool synthetic() const { return synthetic_; }

  Tensor next(long long cycle) {
    if (synthetic_) return sample_mixture_points(spec_, batch_, rng_);

    const std::size_t n = dataset_.size();
    const std::size_t pos =
        static_cast<std::size_t>(cycle % cycles_per_epoch_) * batch_;
    const std::size_t len = std::min(batch_, n - pos);
    Tensor out = Tensor::matrix(len, dataset_.data_dim);
    const double* src = dataset_.samples.row(pos);
    std::copy(src, src + len * dataset_.data_dim, out.data());
    return out;
  }

 private:
  bool synthetic_;
  MixtureSpec spec_;
  Dataset dataset_;
  std::size_t batch_;
  long long cycles_per_epoch_ = 0;
  Rng rng_;
};

std::string cycle_tag(long long completed) {
  std::ostringstream os;
  os << std::setw(6) << std::setfill('0') << completed;
  return os.str();
}

/// Writes the periodic and final run artifacts: sample grids for image
/// data, coverage reports for the synthetic mixture, and the action
/// histogram. Disabled when the output directory is empty.
class ArtifactSink {
 public:
  ArtifactSink(const FscoConfig& cfg, const BatchFeed& feed,
               std::filesystem::path dir)
      : dir_(std::move(dir)),
        enabled_(!dir_.empty()),
        synthetic_(feed.synthetic()),
        spec_(feed.spec()),
        sample_count_(cfg.sample_count),
        noise_dim_(cfg.noise_dim),
        rng_(Rng::derive(cfg.seed, streams::kSamples)) {
    if (enabled_) std::filesystem::create_directories(dir_);
  }

  void periodic(GanPair& gan, long long completed, RunResult& result) {
    emit(gan, "cycle" + cycle_tag(completed), completed, result);
  }

  void final_samples(GanPair& gan, long long completed, RunResult& result) {
    emit(gan, "final", completed, result, /*store_final=*/true);
  }

  void finish(const std::vector<CycleRecord>& records, RunResult& result) {
    if (!enabled_) return;
    if (synthetic_ && !coverage_lines_.empty()) {
      const auto path = dir_ / "coverage.csv";
      std::ofstream out(path, std::ios::binary);
      if (!out) throw IoError("cannot open " + path.string() + " for writing");
      out << "cycle,covered_modes,high_quality_fraction\n";
      for (const auto& line : coverage_lines_) out << line << "\n";
      result.artifacts.push_back("coverage.csv");
    }
    write_histogram(records, result);
  }

 private:
  void emit(GanPair& gan, const std::string& tag, long long completed,
            RunResult& result, bool store_final = false) {
    const Tensor noise = sample_noise(sample_count_, noise_dim_, rng_);
    const Tensor samples = gan.generator.forward(noise);
    if (synthetic_) {
      const CoverageReport cov = mode_coverage(samples, spec_, 3.0);
      coverage_lines_.push_back(std::to_string(completed) + "," +
                                std::to_string(cov.covered_modes) + "," +
                                format_double(cov.high_quality_fraction));
      if (store_final) {
        result.final_coverage = cov;
        result.has_coverage = true;
      }
      if (!enabled_) return;
      if (store_final) {
        const std::string name = "points-" + tag + ".csv";
        const auto path = dir_ / name;
        std::ofstream out(path, std::ios::binary);
        if (!out) throw IoError("cannot open " + path.string() + " for writing");
        out << "x,y\n";
        for (std::size_t i = 0; i < samples.rows(); ++i) {
          out << format_double(samples.at(i, 0)) << ','
              << format_double(samples.at(i, 1)) << "\n";
        }
        result.artifacts.push_back(name);
      }
    } else {
      if (!enabled_) return;
      const std::string name = "samples-" + tag + ".pgm";
      write_image_grid(samples, dir_ / name);
      result.artifacts.push_back(name);
    }
  }

  void write_histogram(const std::vector<CycleRecord>& records,
                       RunResult& result) {
    constexpr int kBins = 20;
    std::vector<long long> counts(kBins, 0);
    long long low = 0;
    for (const auto& r : records) {
      int bin = static_cast<int>(r.action_u * kBins);
      bin = std::clamp(bin, 0, kBins - 1);
      ++counts[static_cast<std::size_t>(bin)];
      if (r.action_u < 0.05) ++low;
    }
    const auto path = dir_ / "u_histogram.csv";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << "bin_lo,bin_hi,count\n";
    for (int b = 0; b < kBins; ++b) {
      out << format_double(b / static_cast<double>(kBins)) << ','
          << format_double((b + 1) / static_cast<double>(kBins)) << ','
          << counts[static_cast<std::size_t>(b)] << "\n";
    }
    out << "# fraction(u < 0.05) = "
        << format_double(records.empty()
                             ? 0.0
                             : static_cast<double>(low) /
                                   static_cast<double>(records.size()))
        << "\n";
    result.artifacts.push_back("u_histogram.csv");
  }

  std::filesystem::path dir_;
  bool enabled_;
  bool synthetic_;
  MixtureSpec spec_;
  std::size_t sample_count_;
  std::size_t noise_dim_;
  Rng rng_;
  std::vector<std::string> coverage_lines_;
};

void summarize_actions(RunResult& result) {
  if (result.records.empty()) return;
  long long low = 0;
  for (const auto& r : result.records) {
    if (r.action_u < 0.05) ++low;
  }
  result.low_action_fraction =
      static_cast<double>(low) / static_cast<double>(result.records.size());
}

}  // namespace

RunResult run_experiment(const FscoConfig& cfg, ActionPolicy& policy,
                         const std::filesystem::path& out_dir) {
  validate_config(cfg);
  BatchFeed feed(cfg);

  Rng init_rng = Rng::derive(cfg.seed, streams::kGanInit);
  GanPair gan = make_gan(cfg.noise_dim, cfg.g_hidden, feed.data_dim(),
                         cfg.d_hidden, GanOptions{cfg.d_loss_halved, cfg.g_loss_form},
                         init_rng);
  Rng noise_rng = Rng::derive(cfg.seed, streams::kGanNoise);
  LoopState loop(cfg.ema_window);

  RunResult result;
  if (cfg.total_cycles == 0) return result;

  ArtifactSink sink(cfg, feed, out_dir);
  result.records.reserve(static_cast<std::size_t>(cfg.total_cycles));
  for (long long i = 0; i < cfg.total_cycles; ++i) {
    const Tensor real = feed.next(i);
    try {
      result.records.push_back(run_cycle(gan, policy, cfg, real, i, loop, noise_rng));
    } catch (const NumericError& e) {
      result.status = RunStatus::kNumericAbort;
      result.diagnostic = e.what();
      break;
    }
    result.last_completed_cycle = i;
    if (cfg.sample_every > 0 && (i + 1) % cfg.sample_every == 0 &&
        i + 1 < cfg.total_cycles) {
      sink.periodic(gan, i + 1, result);
    }
  }

  sink.final_samples(gan, result.last_completed_cycle + 1, result);
  if (!out_dir.empty()) {
    write_telemetry(result.records, out_dir / "telemetry.csv");
    result.artifacts.push_back("telemetry.csv");
    sink.finish(result.records, result);
  }
  summarize_actions(result);
  return result;
}

RunResult run_fixed_rate(const FscoConfig& cfg,
                         const std::filesystem::path& out_dir) {
  validate_config(cfg);
  BatchFeed feed(cfg);

  Rng init_rng = Rng::derive(cfg.seed, streams::kGanInit);
  GanPair gan = make_gan(cfg.noise_dim, cfg.g_hidden, feed.data_dim(),
                         cfg.d_hidden, GanOptions{cfg.d_loss_halved, cfg.g_loss_form},
                         init_rng);
  Rng noise_rng = Rng::derive(cfg.seed, streams::kGanNoise);

  RunResult result;
  if (cfg.total_cycles == 0) return result;

  ArtifactSink sink(cfg, feed, out_dir);
  result.records.reserve(static_cast<std::size_t>(cfg.total_cycles));
  const double eta_d = modulate_step_size(cfg.eta_d_base, 1.0, cfg.u_floor);
  for (long long i = 0; i < cfg.total_cycles; ++i) {
    const Tensor real = feed.next(i);
    const auto t0 = std::chrono::steady_clock::now();
    try {
      discriminator_step(gan, real, eta_d, noise_rng);
      generator_step(gan, real.rows(), cfg.eta_g, noise_rng);
      const GanStepReport report = evaluate_losses(gan, real, noise_rng);

      CycleRecord rec;
      rec.step = i;
      rec.g_loss = report.g_loss;
      rec.d_loss = report.d_loss;
      rec.action_u = 1.0;
      rec.eta_fsco_d = eta_d;
      rec.reward = compute_reward(report.g_loss, report.d_loss);
      rec.wall_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
              .count();
      result.records.push_back(rec);
    } catch (const NumericError& e) {
      result.status = RunStatus::kNumericAbort;
      result.diagnostic = "cycle " + std::to_string(i) + ": " + e.what();
      break;
    }
    result.last_completed_cycle = i;
    if (cfg.sample_every > 0 && (i + 1) % cfg.sample_every == 0 &&
        i + 1 < cfg.total_cycles) {
      sink.periodic(gan, i + 1, result);
    }
  }

  sink.final_samples(gan, result.last_completed_cycle + 1, result);
  if (!out_dir.empty()) {
    write_telemetry(result.records, out_dir / "telemetry.csv");
    result.artifacts.push_back("telemetry.csv");
    sink.finish(result.records, result);
  }
  summarize_actions(result);
  return result;
}

}  // namespace fsco
