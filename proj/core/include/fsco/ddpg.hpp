#ifndef FSCO_DDPG_HPP
#define FSCO_DDPG_HPP

#include <cstddef>
#include <vector>

#include "fsco/network.hpp"
#include "fsco/rng.hpp"

namespace fsco {

/// One (state, action, reward, next-state) record. The training loop is one
/// unbounded episode, so there is no terminal flag and TD targets always
/// bootstrap.
struct Transition {
  std::vector<double> state;
  double action = 0.0;
  double reward = 0.0;
  std::vector<double> next_state;
};

/// Fixed-capacity FIFO ring with uniform sampling (with replacement).
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return storage_.size(); }

  /// Appends; once full the oldest transition is evicted.
  void store(Transition t);

  const Transition& at(std::size_t i) const;

  /// Index of a uniformly drawn stored transition.
  std::size_t sample_index(Rng& rng) const;

  /// Oldest-first snapshot (for FIFO tests).
  std::vector<Transition> ordered() const;

 private:
  std::size_t capacity_;
  std::vector<Transition> storage_;
  std::size_t cursor_ = 0;  // next slot to overwrite once full
};

/// theta_target <- tau * theta_eval + (1 - tau) * theta_target, elementwise
/// over all weights and biases. tau in [0,1].
void soft_update(const Network& eval, Network& target, double tau);

struct DdpgParams {
  std::size_t state_dim = 6;
  std::size_t action_dim = 1;
  std::vector<std::size_t> actor_hidden = {64, 64};
  std::vector<std::size_t> critic_hidden = {64, 64};
  double gamma = 0.99;
  double tau = 0.005;
  double actor_lr = 0.0001;
  double critic_lr = 0.0001;
  double noise_sigma = 0.1;
  double action_floor = 0.001;  // lower clamp on emitted actions
  std::size_t batch = 64;
  std::size_t buffer_capacity = 10000;
};

/// Deterministic-policy actor-critic with eval/target copies of both
/// networks, soft target tracking and experience replay. The actor ends in a
/// sigmoid so the raw policy output lies in (0,1); emitted actions are
/// clamped into [action_floor, 1].
class DdpgAgent {
 public:
  DdpgAgent(DdpgParams params, Rng& init_rng);

  const DdpgParams& params() const { return params_; }
  ReplayBuffer& buffer() { return buffer_; }
  const ReplayBuffer& buffer() const { return buffer_; }

  Network& actor_eval() { return actor_eval_; }
  Network& actor_target() { return actor_target_; }
  Network& critic_eval() { return critic_eval_; }
  Network& critic_target() { return critic_target_; }

  /// u = clamp(mu(state) + sigma * N(0,1) * [explore], action_floor, 1).
  double select_action(const std::vector<double>& state, bool explore, Rng& rng);

  void store(Transition t);

  struct UpdateResult {
    double critic_loss = 0.0;
    double actor_objective = 0.0;  // mean Q under the current policy
  };

  /// One minibatch update: critic regresses toward
  ///   y = r + gamma * Q_target(s', mu_target(s'))
  /// with squared error, the actor ascends Q_eval(s, mu_eval(s)) with the
  /// critic's parameters frozen, then both target nets take a soft update.
  /// Requires buffer size >= batch.
  UpdateResult update(Rng& rng);

 private:
  Tensor policy_actions(Network& actor, const Tensor& states);

  DdpgParams params_;
  Network actor_eval_, actor_target_;
  Network critic_eval_, critic_target_;
  ReplayBuffer buffer_;
};

}  // namespace fsco

#endif  // FSCO_DDPG_HPP
