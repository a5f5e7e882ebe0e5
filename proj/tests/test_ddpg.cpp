#include <cmath>
#include <vector>

#include <doctest.h>

#include "fsco/ddpg.hpp"
#include "fsco/errors.hpp"
#include "fsco/network.hpp"
#include "fsco/rng.hpp"

using namespace fsco;

namespace {

Transition make_transition(double tag) {
  return Transition{{tag, 0, 0, 0, 0, 0}, 0.5, -0.1, {tag, 0, 0, 0, 0, 0}};
}

DdpgParams small_params() {
  DdpgParams p;
  p.actor_hidden = {16, 16};
  p.critic_hidden = {16, 16};
  p.batch = 16;
  p.buffer_capacity = 256;
  return p;
}

}  // namespace

TEST_CASE("replay buffer is a FIFO ring") {
  ReplayBuffer buf(3);
  for (int i = 0; i < 4; ++i) buf.store(make_transition(i));
  CHECK(buf.size() == 3);
  const auto ordered = buf.ordered();
  CHECK(ordered[0].state[0] == 1.0);
  CHECK(ordered[1].state[0] == 2.0);
  CHECK(ordered[2].state[0] == 3.0);

  ReplayBuffer big(10000);
  for (int i = 0; i < 100000; ++i) {
    big.store(make_transition(i));
    CHECK(big.size() <= big.capacity());
  }
  CHECK(big.size() == 10000);
  CHECK(big.ordered().front().state[0] == 90000.0);

  CHECK_THROWS_AS(ReplayBuffer(0), ArgumentError);
}

TEST_CASE("replay sampling is uniform within a 3-sigma chi-square bound") {
  const std::size_t slots = 10000;
  ReplayBuffer buf(slots);
  for (std::size_t i = 0; i < slots; ++i) buf.store(make_transition(0));

  Rng rng = Rng::derive(7, streams::kReplay);
  std::vector<long long> counts(slots, 0);
  const std::size_t draws = 100000;
  for (std::size_t i = 0; i < draws; ++i) ++counts[buf.sample_index(rng)];

  const double expected = static_cast<double>(draws) / static_cast<double>(slots);
  double chi2 = 0.0;
  for (long long c : counts) {
    const double d = static_cast<double>(c) - expected;
    chi2 += d * d / expected;
  }
  // chi-square with slots-1 dof: mean 9999, sd sqrt(2*9999) = 141.41
  CHECK(chi2 > 9999.0 - 424.243);
  CHECK(chi2 < 9999.0 + 424.243);
}

TEST_CASE("soft update endpoint and closed-form cases") {
  Rng rng(3);
  Network eval = Network::mlp(2, {4}, 1, Activation::kRelu, Activation::kIdentity);
  eval.init(rng);

  Network target = Network::mlp(2, {4}, 1, Activation::kRelu, Activation::kIdentity);
  target.init(rng);
  soft_update(eval, target, 1.0);
  CHECK(Network::max_parameter_delta(eval, target) == 0.0);

  Network frozen = Network::mlp(2, {4}, 1, Activation::kRelu, Activation::kIdentity);
  frozen.init(rng);
  const std::vector<double> before = frozen.flatten_parameters();
  soft_update(eval, frozen, 0.0);
  CHECK(frozen.flatten_parameters() == before);

  // theta = 1, theta' = 0: after k updates theta'_k = 1 - (1 - tau)^k.
  Network ones = Network::mlp(2, {4}, 1, Activation::kRelu, Activation::kIdentity);
  Network zeros = Network::mlp(2, {4}, 1, Activation::kRelu, Activation::kIdentity);
  for (std::size_t l = 0; l < ones.layer_count(); ++l) {
    ones.layer(l).weights.fill(1.0);
    ones.layer(l).biases.fill(1.0);
  }
  const double tau = 0.005;
  int applied = 0;
  for (int k : {1, 10, 1000}) {
    while (applied < k) {
      soft_update(ones, zeros, tau);
      ++applied;
    }
    const double expected = 1.0 - std::pow(1.0 - tau, k);
    const std::vector<double> params = zeros.flatten_parameters();
    for (double v : params) CHECK(std::fabs(v - expected) < 1e-10);
  }

  Network mismatched = Network::mlp(3, {4}, 1, Activation::kRelu, Activation::kIdentity);
  CHECK_THROWS_AS(soft_update(eval, mismatched, 0.5), DimensionError);
  CHECK_THROWS_AS(soft_update(eval, target, 1.5), ArgumentError);
}

TEST_CASE("select_action determinism, range, and sigmoid midpoint") {
  Rng init(5);
  DdpgAgent agent(small_params(), init);
  const std::vector<double> state = {0.7, 0.6, 0.1, 1.0, 0.5, 0.4};

  Rng rng(6);
  const double a1 = agent.select_action(state, false, rng);
  const double a2 = agent.select_action(state, false, rng);
  CHECK(a1 == a2);

  DdpgParams wild = small_params();
  wild.noise_sigma = 2.0;  // force frequent clamping at both ends
  Rng init2(7);
  DdpgAgent noisy(wild, init2);
  Rng rng2(8);
  for (int i = 0; i < 2000; ++i) {
    const double u = noisy.select_action(state, true, rng2);
    CHECK(u >= 0.001);
    CHECK(u <= 1.0);
  }

  Rng init3(9);
  DdpgAgent mid(small_params(), init3);
  auto& head = mid.actor_eval().layer(mid.actor_eval().layer_count() - 1);
  head.weights.fill(0.0);
  head.biases.fill(0.0);
  Rng rng3(10);
  CHECK(mid.select_action(state, false, rng3) == 0.5);
  CHECK(mid.select_action({1, 2, 3, 4, 5, 6}, false, rng3) == 0.5);

  const std::vector<double> bad = {0.0, std::nan(""), 0, 0, 0, 0};
  CHECK_THROWS_AS(agent.select_action(bad, false, rng), ArgumentError);
  CHECK_THROWS_AS(agent.select_action({1.0, 2.0}, false, rng), ArgumentError);
}

TEST_CASE("store validates shapes and update needs a warm buffer") {
  Rng init(11);
  DdpgAgent agent(small_params(), init);
  CHECK_THROWS_AS(agent.store(Transition{{1.0, 2.0}, 0.5, 0.0, {1, 2, 3, 4, 5, 6}}),
                  ArgumentError);

  Rng rng(12);
  CHECK_THROWS_AS(agent.update(rng), StateError);
}

TEST_CASE("gamma zero and constant reward drive the critic to the target") {
  DdpgParams params = small_params();
  params.gamma = 0.0;
  params.critic_lr = 0.01;
  params.actor_lr = 0.001;
  Rng init(13);
  DdpgAgent agent(params, init);

  Rng env(14);
  const std::vector<double> state = {0.2, 0.4, -0.2, 1.0, 0.5, 0.5};
  for (std::size_t i = 0; i < params.buffer_capacity; ++i) {
    const double u = env.uniform();
    agent.store(Transition{state, u, 1.0, state});
  }

  Rng rng(15);
  double last_loss = 1e9;
  for (int i = 0; i < 2000; ++i) last_loss = agent.update(rng).critic_loss;
  CHECK(last_loss < 1e-3);

  Tensor probe({1, 7}, {0.2, 0.4, -0.2, 1.0, 0.5, 0.5, 0.3});
  const Tensor q = agent.critic_eval().forward(probe);
  CHECK(q[0] == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("critic loss trends down on a buffer of identical transitions") {
  DdpgParams params = small_params();
  Rng init(16);
  DdpgAgent agent(params, init);
  const std::vector<double> state = {0.5, 0.5, 0.0, 1.0, 0.5, 0.5};
  for (std::size_t i = 0; i < params.batch; ++i) {
    agent.store(Transition{state, 0.4, -0.3, state});
  }

  Rng rng(17);
  double prev_window = 1e100;
  for (int w = 0; w < 5; ++w) {
    double sum = 0.0;
    for (int i = 0; i < 100; ++i) sum += agent.update(rng).critic_loss;
    const double window = sum / 100.0;
    CHECK(window <= prev_window);
    prev_window = window;
  }
}

TEST_CASE("one update moves targets by at most tau times the eval gap") {
  DdpgParams params = small_params();
  Rng init(18);
  DdpgAgent agent(params, init);
  Rng env(19);
  for (std::size_t i = 0; i < params.batch; ++i) {
    const double u = env.uniform();
    agent.store(Transition{{u, 0.1, 0.2, 1.0, 0.5, 0.5}, u, -u, {u, 0.1, 0.2, 1, 0.5, 0.5}});
  }

  Network actor_target_before = agent.actor_target();
  Network critic_target_before = agent.critic_target();
  Rng rng(20);
  agent.update(rng);

  const double actor_moved =
      Network::max_parameter_delta(agent.actor_target(), actor_target_before);
  const double actor_gap =
      Network::max_parameter_delta(agent.actor_eval(), actor_target_before);
  CHECK(actor_moved <= params.tau * actor_gap + 1e-15);

  const double critic_moved =
      Network::max_parameter_delta(agent.critic_target(), critic_target_before);
  const double critic_gap =
      Network::max_parameter_delta(agent.critic_eval(), critic_target_before);
  CHECK(critic_moved <= params.tau * critic_gap + 1e-15);
}

TEST_CASE("agent trajectories are bit-reproducible from one master seed") {
  auto run = [](std::uint64_t master) {
    Rng init = Rng::derive(master, streams::kAgentInit);
    DdpgAgent agent(small_params(), init);
    Rng explore = Rng::derive(master, streams::kAgentExplore);
    Rng replay = Rng::derive(master, streams::kReplay);
    std::vector<double> actions;
    std::vector<double> state = {0.6, 0.7, -0.1, 1.0, 0.5, 0.5};
    for (int i = 0; i < 100; ++i) {
      const double u = agent.select_action(state, true, explore);
      actions.push_back(u);
      agent.store(Transition{state, u, -std::fabs(u - 0.3), state});
      if (agent.buffer().size() >= agent.params().batch) agent.update(replay);
      state[3] = u;
    }
    return actions;
  };
  CHECK(run(404) == run(404));
  CHECK(run(404) != run(405));
}

TEST_CASE("bandit smoke: the deterministic policy drifts toward the optimum") {
  DdpgParams params;
  params.actor_hidden = {64, 64};
  params.critic_hidden = {64, 64};
  params.gamma = 0.0;
  params.actor_lr = 0.01;
  params.critic_lr = 0.01;
  params.batch = 64;
  params.buffer_capacity = 2000;

  Rng init = Rng::derive(1001, streams::kAgentInit);
  DdpgAgent agent(params, init);
  Rng explore = Rng::derive(1001, streams::kAgentExplore);
  Rng replay = Rng::derive(1001, streams::kReplay);

  const std::vector<double> state(6, 0.0);
  const double initial_gap =
      std::fabs(agent.select_action(state, false, explore) - 0.3);
  for (int i = 0; i < 1500; ++i) {
    const double u = agent.select_action(state, true, explore);
    agent.store(Transition{state, u, -std::fabs(u - 0.3), state});
    if (agent.buffer().size() >= params.batch) agent.update(replay);
  }
  const double final_gap =
      std::fabs(agent.select_action(state, false, explore) - 0.3);
  CHECK(final_gap < initial_gap);
  CHECK(final_gap < 0.15);
}
