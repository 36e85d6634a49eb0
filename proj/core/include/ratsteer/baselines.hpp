#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "ratsteer/observation.hpp"
#include "ratsteer/rl.hpp"

namespace ratsteer {

// Weighted sum of four binary indicators: eNB load, gNB load, gNB channel
// quality, service type. Steer to NR when the score clears the threshold.
struct HeuristicWeights {
  double alpha = 0.25;  // eNB load
  double beta = 0.25;   // gNB load
  double gamma = 0.25;  // gNB channel quality
  double delta = 0.25;  // service type
};

// Cutoffs that binarize the raw observation into the four indicators.
struct HeuristicCutoffs {
  double queue_cutoff_packets = 50.0;  // load bit trips above this backlog
  double sinr_cutoff_db = 10.0;        // channel bit trips above this SINR
};

double heuristic_score(int enb_loaded, int gnb_loaded, int gnb_channel_good,
                       int delay_sensitive, const HeuristicWeights& w);

// Decision threshold: the mean score over all 2^4 indicator combinations,
// so roughly half the lattice steers each way under default weights.
double heuristic_threshold(const HeuristicWeights& w);

SteeringAction heuristic_decide(double score, double threshold);

// Binarization of one flow observation: load bits trip above the queue
// cutoff, the channel bit above the SINR cutoff, and the service bit is 1
// for the throughput-heavy classes (video, gaming).
struct HeuristicPolicy {
  HeuristicWeights weights;
  HeuristicCutoffs cutoffs;

  double score(const FlowObservation& obs) const;
  SteeringAction decide(const FlowObservation& obs) const;
};

// Bucket edges for the tabular state space: 3 classes x 4 eNB SINR x
// 4 gNB SINR x 3 eNB queue x 3 gNB queue = 432 states.
struct StateBuckets {
  std::array<double, 3> sinr_edges_db = {0.0, 10.0, 20.0};
  std::array<double, 2> queue_edges_packets = {50.0, 500.0};
};

inline constexpr int kSinrBucketCount = 4;
inline constexpr int kQueueBucketCount = 3;
inline constexpr int kDiscreteStateCount =
    kTrafficClassCount * kSinrBucketCount * kSinrBucketCount *
    kQueueBucketCount * kQueueBucketCount;

// Row-major key over (class, eNB SINR bucket, gNB SINR bucket, eNB queue
// bucket, gNB queue bucket), in [0, kDiscreteStateCount).
int discretize_state(const FlowObservation& obs, const StateBuckets& buckets);

// Dense state x action table, zero-initialized; unvisited states therefore
// read as zero.
class QTable {
 public:
  QTable(int state_count, int action_count);

  double at(int state, int action) const {
    return values_[index(state, action)];
  }
  double& at(int state, int action) { return values_[index(state, action)]; }

  int state_count() const { return state_count_; }
  int action_count() const { return action_count_; }

  // Ties go to the lowest action index, so a fresh table prefers action 0.
  int greedy(int state) const;
  double max_value(int state) const;

  // One-step Q-learning backup.
  void update(int state, int action, double reward, int next_state,
              double alpha, double gamma);

 private:
  std::size_t index(int state, int action) const {
    return static_cast<std::size_t>(state) * action_count_ +
           static_cast<std::size_t>(action);
  }
  int state_count_;
  int action_count_;
  std::vector<double> values_;
};

struct TabularConfig {
  double alpha = 0.1;
  double gamma = 0.9;
  StateBuckets buckets;
  EpsilonSchedule epsilon;
};

// Epsilon-greedy tabular Q-learning over the discretized state space; the
// non-generalizing counterpart to the DQN.
class TabularAgent {
 public:
  TabularAgent(TabularConfig cfg, std::mt19937_64 explore_rng);

  int act(int state);
  int act_greedy(int state) const { return table_.greedy(state); }
  void learn(int state, int action, double reward, int next_state);

  void freeze() { frozen_ = true; }
  double current_epsilon() const {
    return frozen_ ? 0.0 : cfg_.epsilon.at(decision_steps_);
  }
  long decision_steps() const { return decision_steps_; }
  const QTable& table() const { return table_; }
  QTable& table() { return table_; }
  const TabularConfig& config() const { return cfg_; }

 private:
  TabularConfig cfg_;
  QTable table_;
  std::mt19937_64 explore_rng_;
  long decision_steps_ = 0;
  bool frozen_ = false;
};

}  // namespace ratsteer
