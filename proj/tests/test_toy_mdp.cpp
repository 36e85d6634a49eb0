#include "toy_mdp.hpp"

#include <gtest/gtest.h>

namespace ratsteer {
namespace {

// Closed-form solution of the chain: solving the Bellman equations by hand
// gives V = [0.8, 0.5, 1, 2] and the Q values below.
TEST(ToyMdp, ValueIterationMatchesClosedForm) {
  const toymdp::QValues q = toymdp::optimal_q();
  EXPECT_NEAR(q[0][0], 0.8, 1e-12);
  EXPECT_NEAR(q[0][1], 0.25, 1e-12);
  EXPECT_NEAR(q[1][0], 0.25, 1e-12);
  EXPECT_NEAR(q[1][1], 0.5, 1e-12);
  EXPECT_NEAR(q[2][0], 0.5, 1e-12);
  EXPECT_NEAR(q[2][1], 1.0, 1e-12);
  EXPECT_NEAR(q[3][0], 1.0, 1e-12);
  EXPECT_NEAR(q[3][1], 2.0, 1e-12);
  const std::array<int, 4> pi = toymdp::optimal_policy();
  EXPECT_EQ(pi, (std::array<int, 4>{0, 1, 1, 1}));
}

TEST(ToyMdp, TabularRecoversOptimumOnAllSeeds) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed)
    EXPECT_TRUE(toymdp::tabular_reaches_optimum(seed)) << "seed " << seed;
}

TEST(ToyMdp, DqnRecoversOptimumOnAllSeeds) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed)
    EXPECT_TRUE(toymdp::dqn_reaches_optimum(seed)) << "seed " << seed;
}

// The tabular learner converges to the true fixed point, not merely the
// right argmax: deterministic dynamics with constant alpha contract onto
// the Bellman solution at every sufficiently visited pair.
TEST(ToyMdp, TabularQValuesConvergeNumerically) {
  TabularConfig cfg;
  cfg.alpha = 0.2;
  cfg.gamma = toymdp::kGamma;
  cfg.epsilon.start = 1.0;
  cfg.epsilon.end = 1.0;  // pure exploration: uniform visits
  TabularAgent agent(cfg, make_rng(77, RngStream::kAgentExplore));
  int s = 0;
  for (int step = 0; step < 40000; ++step) {
    const int a = agent.act(s);
    agent.learn(s, a, toymdp::reward(s, a), toymdp::next_state(s, a));
    s = (step + 1) % 20 == 0 ? toymdp::restart_state(step + 1) : toymdp::next_state(s, a);
  }
  const toymdp::QValues q = toymdp::optimal_q();
  for (int state = 0; state < toymdp::kStates; ++state)
    for (int a = 0; a < toymdp::kActions; ++a)
      EXPECT_NEAR(agent.table().at(state, a), q[state][a], 1e-6)
          << "state " << state << " action " << a;
}

}  // namespace
}  // namespace ratsteer
