#include "ratsteer/baselines.hpp"

#include <cassert>

#include "ratsteer/rng.hpp"

namespace ratsteer {

double heuristic_score(int enb_loaded, int gnb_loaded, int gnb_channel_good,
                       int delay_sensitive, const HeuristicWeights& w) {
  return w.alpha * enb_loaded + w.beta * gnb_loaded +
         w.gamma * gnb_channel_good + w.delta * delay_sensitive;
}

double heuristic_threshold(const HeuristicWeights& w) {
  double sum = 0.0;
  for (int mask = 0; mask < 16; ++mask)
    sum += heuristic_score(mask & 1, (mask >> 1) & 1, (mask >> 2) & 1,
                           (mask >> 3) & 1, w);
  return sum / 16.0;
}

SteeringAction heuristic_decide(double score, double threshold) {
  return score > threshold ? SteeringAction::kNr : SteeringAction::kLte;
}

double HeuristicPolicy::score(const FlowObservation& obs) const {
  const int enb_loaded = obs.queue_enb_packets > cutoffs.queue_cutoff_packets;
  const int gnb_loaded = obs.queue_gnb_packets > cutoffs.queue_cutoff_packets;
  const int gnb_good = obs.sinr_gnb_db > cutoffs.sinr_cutoff_db;
  const int heavy_service = obs.cls != TrafficClass::kVoice;
  return heuristic_score(enb_loaded, gnb_loaded, gnb_good, heavy_service,
                         weights);
}

SteeringAction HeuristicPolicy::decide(const FlowObservation& obs) const {
  return heuristic_decide(score(obs), heuristic_threshold(weights));
}

int discretize_state(const FlowObservation& obs, const StateBuckets& b) {
  auto sinr_bucket = [&](double sinr_db) {
    int k = 0;
    for (double edge : b.sinr_edges_db)
      if (sinr_db >= edge) ++k;
    return k;
  };
  auto queue_bucket = [&](double packets) {
    int k = 0;
    for (double edge : b.queue_edges_packets)
      if (packets >= edge) ++k;
    return k;
  };
  int key = static_cast<int>(obs.cls);
  key = key * kSinrBucketCount + sinr_bucket(obs.sinr_enb_db);
  key = key * kSinrBucketCount + sinr_bucket(obs.sinr_gnb_db);
  key = key * kQueueBucketCount + queue_bucket(obs.queue_enb_packets);
  key = key * kQueueBucketCount + queue_bucket(obs.queue_gnb_packets);
  return key;
}

QTable::QTable(int state_count, int action_count)
    : state_count_(state_count),
      action_count_(action_count),
      values_(static_cast<std::size_t>(state_count) * action_count, 0.0) {
  assert(state_count > 0 && action_count > 0);
}

int QTable::greedy(int state) const {
  int best = 0;
  for (int a = 1; a < action_count_; ++a)
    if (at(state, a) > at(state, best)) best = a;
  return best;
}

double QTable::max_value(int state) const {
  double best = at(state, 0);
  for (int a = 1; a < action_count_; ++a) best = std::max(best, at(state, a));
  return best;
}

void QTable::update(int state, int action, double reward, int next_state,
                    double alpha, double gamma) {
  double& q = at(state, action);
  q += alpha * (reward + gamma * max_value(next_state) - q);
}

TabularAgent::TabularAgent(TabularConfig cfg, std::mt19937_64 explore_rng)
    : cfg_(cfg),
      table_(kDiscreteStateCount, kSteeringActionCount),
      explore_rng_(explore_rng) {}

int TabularAgent::act(int state) {
  if (frozen_) return table_.greedy(state);
  const double eps = cfg_.epsilon.at(decision_steps_);
  ++decision_steps_;
  if (uniform_unit(explore_rng_) < eps)
    return static_cast<int>(
        uniform_index(explore_rng_, static_cast<std::uint64_t>(
                                        table_.action_count())));
  return table_.greedy(state);
}

void TabularAgent::learn(int state, int action, double reward,
                         int next_state) {
  if (frozen_) return;
  table_.update(state, action, reward, next_state, cfg_.alpha, cfg_.gamma);
}

}  // namespace ratsteer
