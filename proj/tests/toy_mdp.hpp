#pragma once

// Four-state chain MDP with a known optimal policy, used to check that both
// learners recover an optimum from interaction alone. Action 1 walks right
// toward a large reward at the end of the chain; action 0 stays put and only
// pays off in state 0. With gamma = 0.5 the optimal policy is [0, 1, 1, 1].

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "ratsteer/baselines.hpp"
#include "ratsteer/rl.hpp"
#include "ratsteer/rng.hpp"

namespace ratsteer::toymdp {

inline constexpr int kStates = 4;
inline constexpr int kActions = 2;
inline constexpr double kGamma = 0.5;
inline constexpr int kMaxSteps = 5000;
inline constexpr int kEpisodeLen = 25;

inline int next_state(int s, int a) {
  return a == 0 ? s : std::min(s + 1, kStates - 1);
}

inline double reward(int s, int a) {
  if (s == 0 && a == 0) return 0.4;
  if (s == kStates - 1 && a == 1) return 1.0;
  return 0.0;
}

using QValues = std::array<std::array<double, kActions>, kStates>;

// Value iteration to a fixed point; the reference the learners must match.
inline QValues optimal_q() {
  QValues q{};
  for (;;) {
    QValues next{};
    double delta = 0.0;
    for (int s = 0; s < kStates; ++s) {
      for (int a = 0; a < kActions; ++a) {
        const int ns = next_state(s, a);
        const double best =
            *std::max_element(q[ns].begin(), q[ns].end());
        next[s][a] = reward(s, a) + kGamma * best;
        delta = std::max(delta, std::abs(next[s][a] - q[s][a]));
      }
    }
    q = next;
    if (delta < 1e-13) return q;
  }
}

inline std::array<int, kStates> optimal_policy() {
  const QValues q = optimal_q();
  std::array<int, kStates> pi{};
  for (int s = 0; s < kStates; ++s)
    pi[s] = q[s][1] > q[s][0] ? 1 : 0;
  return pi;
}

inline std::vector<double> one_hot(int s) {
  std::vector<double> v(kStates, 0.0);
  v[static_cast<std::size_t>(s)] = 1.0;
  return v;
}

// Episodes restart on a rotating start state so every state keeps being
// visited even after exploration decays.
inline int restart_state(int step) { return (step / kEpisodeLen) % kStates; }

inline bool tabular_reaches_optimum(std::uint64_t seed) {
  TabularConfig cfg;
  cfg.alpha = 0.2;
  cfg.gamma = kGamma;
  cfg.epsilon.decay_steps = kMaxSteps / 2;
  cfg.epsilon.end = 0.1;
  TabularAgent agent(cfg, make_rng(seed, RngStream::kAgentExplore));
  int s = 0;
  for (int step = 0; step < kMaxSteps; ++step) {
    const int a = agent.act(s);
    const double r = reward(s, a);
    const int ns = next_state(s, a);
    agent.learn(s, a, r, ns);
    s = (step + 1) % kEpisodeLen == 0 ? restart_state(step + 1) : ns;
  }
  const std::array<int, kStates> pi = optimal_policy();
  for (int state = 0; state < kStates; ++state)
    if (agent.act_greedy(state) != pi[state]) return false;
  return true;
}

inline bool dqn_reaches_optimum(std::uint64_t seed) {
  AgentConfig cfg;
  cfg.hidden_layers = {16};
  cfg.gamma = kGamma;
  cfg.learning_rate = 0.02;
  cfg.minibatch_size = 16;
  cfg.replay_capacity = 2000;
  cfg.warmup_experiences = 64;
  cfg.target_sync_period = 50;
  cfg.epsilon.decay_steps = kMaxSteps / 2;
  cfg.epsilon.end = 0.1;
  DqnAgent agent(kStates, kActions, cfg, make_rng(seed, RngStream::kAgentInit),
                 make_rng(seed, RngStream::kAgentExplore),
                 make_rng(seed, RngStream::kAgentSample));
  int s = 0;
  for (int step = 0; step < kMaxSteps; ++step) {
    const std::vector<double> state = one_hot(s);
    const int a = agent.act(state);
    const double r = reward(s, a);
    const int ns = next_state(s, a);
    agent.observe(Experience{state, a, r, one_hot(ns), false});
    agent.train_tick();
    s = (step + 1) % kEpisodeLen == 0 ? restart_state(step + 1) : ns;
  }
  const std::array<int, kStates> pi = optimal_policy();
  for (int state = 0; state < kStates; ++state)
    if (agent.act_greedy(one_hot(state)) != pi[state]) return false;
  return true;
}

}  // namespace ratsteer::toymdp
