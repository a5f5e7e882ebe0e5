#ifndef FSCO_CONTROLLER_HPP
#define FSCO_CONTROLLER_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fsco/config.hpp"
#include "fsco/data.hpp"
#include "fsco/ddpg.hpp"
#include "fsco/gan.hpp"
#include "fsco/rng.hpp"

namespace fsco {

/// Exponential moving average with alpha = 2/(window+1), seeded by the first
/// observation.
class EmaTracker {
 public:
  explicit EmaTracker(std::size_t window);

  /// Folds in x and returns the new average.
  double update(double x);

  double value() const;
  bool seeded() const { return seeded_; }

 private:
  double alpha_;
  double value_ = 0.0;
  bool seeded_ = false;
};

/// The six features the controller observes each cycle: smoothed losses,
/// their gap, the previous action, and the raw mean discriminator scores.
struct ControlState {
  static constexpr std::size_t kDim = 6;

  double g_loss_ema = 0.0;
  double d_loss_ema = 0.0;
  double loss_gap = 0.0;  // g_loss_ema - d_loss_ema
  double prev_action = 1.0;
  double d_real_mean = 0.0;
  double d_fake_mean = 0.0;

  std::vector<double> to_vector() const;
};

/// One training cycle's telemetry row (wall time is recorded but not
/// serialized to CSV).
struct CycleRecord {
  long long step = 0;
  double g_loss = 0.0;
  double d_loss = 0.0;
  double action_u = 0.0;
  double eta_fsco_d = 0.0;
  double reward = 0.0;
  double wall_seconds = 0.0;
};

/// -|g_loss - d_loss|; rewards closer generator/discriminator losses.
double compute_reward(double g_loss, double d_loss);

/// eta_d_base * max(u, u_floor). The floor is enforced on the agent side
/// already; re-applying it here keeps the bound even if the policy is
/// swapped out. u outside [0,1] signals a clamping bug and is an argument
/// error.
double modulate_step_size(double eta_d_base, double u, double u_floor);

/// Folds the post-update evaluation report into the trackers and assembles
/// the next observation.
ControlState build_state(const GanStepReport& report, double prev_action,
                         EmaTracker& g_ema, EmaTracker& d_ema);

/// Source of the per-cycle action. DdpgPolicy is the real controller; the
/// constant stub exists for fixed-rate equivalence regression tests.
class ActionPolicy {
 public:
  virtual ~ActionPolicy() = default;

  virtual double select(const ControlState& state, bool explore) = 0;

  /// Offered once per cycle; learning policies store and train here.
  virtual void observe(const Transition& t) { (void)t; }
};

class DdpgPolicy : public ActionPolicy {
 public:
  DdpgPolicy(const DdpgParams& params, std::uint64_t master_seed);

  double select(const ControlState& state, bool explore) override;
  void observe(const Transition& t) override;

  DdpgAgent& agent() { return agent_; }
  const DdpgAgent& agent() const { return agent_; }

 private:
  DdpgAgent agent_;
  Rng explore_rng_;
  Rng replay_rng_;
};

class ConstantPolicy : public ActionPolicy {
 public:
  explicit ConstantPolicy(double u) : u_(u) {}

  double select(const ControlState&, bool) override { return u_; }

 private:
  double u_;
};

/// Agent hyperparameters as configured for a run.
DdpgParams ddpg_params_from(const FscoConfig& cfg);

/// Mutable loop state threaded through run_cycle.
struct LoopState {
  ControlState observation;
  EmaTracker g_ema;
  EmaTracker d_ema;

  explicit LoopState(std::size_t ema_window)
      : g_ema(ema_window), d_ema(ema_window) {}
};

/// One full cycle: select action, modulate the discriminator step size, one
/// D update then one G update, post-update loss evaluation, reward, state
/// hand-off to the policy. Numeric failures are rethrown with the cycle
/// index attached.
CycleRecord run_cycle(GanPair& gan, ActionPolicy& policy, const FscoConfig& cfg,
                      const Tensor& real_batch, long long cycle_index,
                      LoopState& loop, Rng& noise_rng);

enum class RunStatus { kCompleted, kNumericAbort };

struct RunResult {
  std::vector<CycleRecord> records;
  RunStatus status = RunStatus::kCompleted;
  long long last_completed_cycle = -1;
  std::string diagnostic;  // empty unless aborted

  std::vector<std::string> artifacts;  // paths written under out_dir
  CoverageReport final_coverage;       // synthetic runs only
  bool has_coverage = false;
  double low_action_fraction = 0.0;  // share of cycles with u < 0.05
};

/// Full training run driven by the given policy: builds the dataset and the
/// GAN from cfg, loops run_cycle for total_cycles, and (when out_dir is
/// nonempty and cycles were run) writes telemetry.csv plus periodic sample
/// grids (image data) or coverage reports (synthetic) and the action
/// histogram. Deterministic per master seed.
RunResult run_experiment(const FscoConfig& cfg, ActionPolicy& policy,
                         const std::filesystem::path& out_dir);

/// Standalone fixed-rate loop: identical data and noise consumption but no
/// controller anywhere, discriminator always at eta_d_base. The regression
/// target for constant-action equivalence.
RunResult run_fixed_rate(const FscoConfig& cfg,
                         const std::filesystem::path& out_dir);

}  // namespace fsco

#endif  // FSCO_CONTROLLER_HPP
