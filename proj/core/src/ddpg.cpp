#include "fsco/ddpg.hpp"

#include <algorithm>
#include <cmath>

#include "fsco/errors.hpp"

namespace fsco {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw ArgumentError("replay buffer capacity must be positive");
  storage_.reserve(std::min<std::size_t>(capacity, 1 << 16));
}

void ReplayBuffer::store(Transition t) {
  if (storage_.size() < capacity_) {
    storage_.push_back(std::move(t));
  } else {
    storage_[cursor_] = std::move(t);
    cursor_ = (cursor_ + 1) % capacity_;
  }
}

const Transition& ReplayBuffer::at(std::size_t i) const {
  if (i >= storage_.size()) throw ArgumentError("replay buffer index out of range");
  return storage_[i];
}

std::size_t ReplayBuffer::sample_index(Rng& rng) const {
  if (storage_.empty()) throw StateError("cannot sample from an empty replay buffer");
  return rng.uniform_index(storage_.size());
}

std::vector<Transition> ReplayBuffer::ordered() const {
  std::vector<Transition> out;
  out.reserve(storage_.size());
  // cursor_ points at the oldest element once the ring has wrapped
  const std::size_t start = storage_.size() < capacity_ ? 0 : cursor_;
  for (std::size_t k = 0; k < storage_.size(); ++k) {
    out.push_back(storage_[(start + k) % storage_.size()]);
  }
  return out;
}

void soft_update(const Network& eval, Network& target, double tau) {
  if (tau < 0.0 || tau > 1.0) {
    throw ArgumentError("soft update mixing factor must be in [0,1], got " +
                        std::to_string(tau));
  }
  if (eval.layer_count() != target.layer_count()) {
    throw DimensionError("soft update requires shape-congruent networks");
  }
  for (std::size_t l = 0; l < target.layer_count(); ++l) {
    const DenseLayer& src = eval.layer(l);
    DenseLayer& dst = target.layer(l);
    if (!src.weights.same_shape(dst.weights) || !src.biases.same_shape(dst.biases)) {
      throw DimensionError("soft update networks differ at layer " + std::to_string(l));
    }
    for (std::size_t i = 0; i < dst.weights.size(); ++i) {
      dst.weights[i] = tau * src.weights[i] + (1.0 - tau) * dst.weights[i];
    }
    for (std::size_t i = 0; i < dst.biases.size(); ++i) {
      dst.biases[i] = tau * src.biases[i] + (1.0 - tau) * dst.biases[i];
    }
  }
}

DdpgAgent::DdpgAgent(DdpgParams params, Rng& init_rng)
    : params_(std::move(params)), buffer_(params_.buffer_capacity) {
  actor_eval_ = Network::mlp(params_.state_dim, params_.actor_hidden,
                             params_.action_dim, Activation::kRelu,
                             Activation::kSigmoid);
  critic_eval_ = Network::mlp(params_.state_dim + params_.action_dim,
                              params_.critic_hidden, 1, Activation::kRelu,
                              Activation::kIdentity);
  actor_eval_.init(init_rng);
  critic_eval_.init(init_rng);
  // At construction the target nets are exact copies of the eval nets.
  actor_target_ = actor_eval_;
  critic_target_ = critic_eval_;
}

double DdpgAgent::select_action(const std::vector<double>& state, bool explore,
                                Rng& rng) {
  if (state.size() != params_.state_dim) {
    throw ArgumentError("state has dimension " + std::to_string(state.size()) +
                        ", expected " + std::to_string(params_.state_dim));
  }
  for (double v : state) {
    if (!std::isfinite(v)) throw ArgumentError("non-finite state entry");
  }
  Tensor s({1, params_.state_dim}, std::vector<double>(state.begin(), state.end()));
  double u = actor_eval_.forward(s)[0];
  if (explore) u += params_.noise_sigma * rng.normal();
  return std::clamp(u, params_.action_floor, 1.0);
}

void DdpgAgent::store(Transition t) {
  if (t.state.size() != params_.state_dim || t.next_state.size() != params_.state_dim) {
    throw ArgumentError("transition state dimension mismatch");
  }
  buffer_.store(std::move(t));
}

Tensor DdpgAgent::policy_actions(Network& actor, const Tensor& states) {
  return actor.forward(states);
}

DdpgAgent::UpdateResult DdpgAgent::update(Rng& rng) {
  const std::size_t batch = params_.batch;
  if (buffer_.size() < batch) {
    throw StateError("replay buffer holds " + std::to_string(buffer_.size()) +
                     " transitions, update needs " + std::to_string(batch));
  }
  const std::size_t sd = params_.state_dim;

  Tensor states({batch, sd});
  Tensor next_states({batch, sd});
  Tensor actions({batch, 1});
  std::vector<double> rewards(batch);
  for (std::size_t b = 0; b < batch; ++b) {
    const Transition& t = buffer_.at(buffer_.sample_index(rng));
    for (std::size_t j = 0; j < sd; ++j) {
      states.at(b, j) = t.state[j];
      next_states.at(b, j) = t.next_state[j];
    }
    actions[b] = t.action;
    rewards[b] = t.reward;
  }

  // TD target from the target nets.
  const Tensor next_actions = policy_actions(actor_target_, next_states);
  Tensor critic_target_in({batch, sd + 1});
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t j = 0; j < sd; ++j) critic_target_in.at(b, j) = next_states.at(b, j);
    critic_target_in.at(b, sd) = next_actions[b];
  }
  const Tensor next_q = critic_target_.forward(critic_target_in);
  Tensor targets({batch, 1});
  for (std::size_t b = 0; b < batch; ++b) {
    targets[b] = rewards[b] + params_.gamma * next_q[b];
  }

  // Critic regression on the stored (s, a) pairs.
  Tensor critic_in({batch, sd + 1});
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t j = 0; j < sd; ++j) critic_in.at(b, j) = states.at(b, j);
    critic_in.at(b, sd) = actions[b];
  }
  const Tensor q = critic_eval_.forward(critic_in);
  double critic_loss = 0.0;
  Tensor dq({batch, 1});
  const double inv_batch = 1.0 / static_cast<double>(batch);
  for (std::size_t b = 0; b < batch; ++b) {
    const double diff = q[b] - targets[b];
    critic_loss += diff * diff;
    dq[b] = 2.0 * diff * inv_batch;
  }
  critic_loss *= inv_batch;
  if (!std::isfinite(critic_loss)) throw NumericError("non-finite critic loss");
  critic_eval_.apply_update(critic_eval_.backward(dq).grads, params_.critic_lr);

  // Actor ascends mean Q(s, mu(s)); the critic only routes the gradient.
  const Tensor policy = policy_actions(actor_eval_, states);
  Tensor actor_critic_in({batch, sd + 1});
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t j = 0; j < sd; ++j) actor_critic_in.at(b, j) = states.at(b, j);
    actor_critic_in.at(b, sd) = policy[b];
  }
  const Tensor q_policy = critic_eval_.forward(actor_critic_in);
  double actor_objective = 0.0;
  for (std::size_t b = 0; b < batch; ++b) actor_objective += q_policy[b];
  actor_objective *= inv_batch;
  if (!std::isfinite(actor_objective)) throw NumericError("non-finite actor objective");

  // Differentiate -mean(Q) so that the descent update ascends Q.
  Tensor dneg_q({batch, 1});
  dneg_q.fill(-inv_batch);
  const Tensor critic_input_grad = critic_eval_.backward(dneg_q).input_grad;
  Tensor daction({batch, 1});
  for (std::size_t b = 0; b < batch; ++b) daction[b] = critic_input_grad.at(b, sd);
  actor_eval_.apply_update(actor_eval_.backward(daction).grads, params_.actor_lr);

  soft_update(actor_eval_, actor_target_, params_.tau);
  soft_update(critic_eval_, critic_target_, params_.tau);

  return UpdateResult{critic_loss, actor_objective};
}

}  // namespace fsco
