#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "ratsteer/baselines.hpp"
#include "ratsteer/config.hpp"
#include "ratsteer/metrics.hpp"
#include "ratsteer/net_model.hpp"
#include "ratsteer/observation.hpp"
#include "ratsteer/rl.hpp"
#include "ratsteer/rng.hpp"
#include "ratsteer/traffic.hpp"

namespace ratsteer {

// One pending steering decision: scored by the flow's deliveries inside
// [decided_tti, close_tti), then turned into an experience / table update.
struct RewardWindow {
  long decided_tti = 0;
  long close_tti = 0;
  std::vector<double> state;  // encoded input (DQN path)
  int discrete_state = 0;     // bucket key (tabular path)
  int action = 0;
  double delivered_bits = 0.0;
  double delay_sum_s = 0.0;
  long delivered_packets = 0;
};

struct FlowState {
  FlowSource src;
  SteeringAction steering = SteeringAction::kLte;
  std::deque<RewardWindow> open;
};

struct DecisionRecord {
  long tti = 0;
  int flow_id = -1;
  SteeringAction action = SteeringAction::kLte;
  SteeringAction previous = SteeringAction::kLte;
};

struct RunTotals {
  long generated = 0;
  long delivered = 0;
  long dropped = 0;
  long queued = 0;
};

// One run of the TTI loop: fixed topology, one steering algorithm, one seed,
// one offered load. Deterministic given those four; traffic and channel
// streams are independent of the algorithm choice so runs pair up.
class Simulation {
 public:
  Simulation(const ExperimentConfig& cfg, Algorithm algo, std::uint64_t seed,
             double load_bps);

  void step_tti();
  void run_ttis(long n);
  // Steps until the configured horizon (no-op once reached or diverged).
  void run_to_end();

  long tti() const { return tti_; }
  bool diverged() const { return diverged_; }
  Algorithm algorithm() const { return algo_; }

  const std::vector<KpiRow>& rows() const { return rows_; }
  std::vector<KpiRow> take_rows() { return std::move(rows_); }

  // Stops exploration and learning on the active agent.
  void freeze_policy();

  void set_decision_log(bool on) { log_decisions_ = on; }
  const std::vector<DecisionRecord>& decision_log() const {
    return decision_log_;
  }

  // Drops `count` synthetic packets of `cls` into the (bs, ue) queue right
  // now; they count as generated traffic but belong to no flow.
  void inject_packets(int bs_id, int ue_id, TrafficClass cls, int count);

  const std::vector<BaseStation>& base_stations() const { return bss_; }
  const std::vector<UserEquipment>& user_equipment() const { return ues_; }
  const std::vector<FlowState>& flows() const { return flows_; }
  const ExperimentConfig& config() const { return cfg_; }

  int queue_packets(int bs_id, int ue_id) const {
    return queues_[static_cast<std::size_t>(bs_id)]
                  [static_cast<std::size_t>(ue_id)]
                      .size();
  }
  long bs_queue_packets(int bs_id) const;
  double last_sinr_db(int ue_id, Rat rat) const;
  RunTotals totals() const;
  long capacity_violations() const { return capacity_violations_total_; }

  DqnAgent* dqn() { return dqn_ ? &*dqn_ : nullptr; }
  const DqnAgent* dqn() const { return dqn_ ? &*dqn_ : nullptr; }
  TabularAgent* tabular() { return tabular_ ? &*tabular_ : nullptr; }

 private:
  struct ReportAccum {
    double delivered_bits = 0.0;
    double delay_sum_s = 0.0;
    std::array<double, kTrafficClassCount> class_delay_sum_s{};
    std::array<long, kTrafficClassCount> class_packets{};
    long packets = 0;
    long dropped = 0;
    std::array<double, kTrafficClassCount> bytes_enb{};
    std::array<double, kTrafficClassCount> bytes_gnb{};
    double reward_sum = 0.0;
    long reward_count = 0;
    long capacity_violations = 0;
  };

  FlowObservation observe(const FlowState& flow) const;
  void decide_all();
  void transmit();
  void update_measurements();
  void close_windows();
  void record_delivery(const BaseStation& bs, const Packet& packet,
                       double delay_s);
  void close_window(FlowState& flow, RewardWindow& window);
  void flush_report_window();
  void mark_diverged();
  int serving_bs(const FlowState& flow) const;

  ExperimentConfig cfg_;
  Algorithm algo_;
  std::uint64_t seed_ = 0;
  double load_bps_ = 0.0;

  std::vector<BaseStation> bss_;
  std::vector<UserEquipment> ues_;
  std::vector<FlowState> flows_;
  ChannelModel channel_;
  ChannelRealization chan_;
  std::vector<RbgAllocation> alloc_;
  std::vector<RoundRobinScheduler> sched_;
  std::vector<std::vector<PacketQueue>> queues_;  // [bs][ue]
  std::vector<double> sinr_enb_db_;
  std::vector<double> sinr_gnb_db_;

  std::mt19937_64 traffic_rng_;
  std::mt19937_64 fading_rng_;

  std::optional<DqnAgent> dqn_;
  std::optional<TabularAgent> tabular_;
  HeuristicPolicy heuristic_;

  long tti_ = 0;
  bool diverged_ = false;
  long generated_ = 0;
  long delivered_ = 0;
  long capacity_violations_total_ = 0;

  ReportAccum accum_;
  long window_index_ = 0;
  std::vector<KpiRow> rows_;

  bool log_decisions_ = false;
  std::vector<DecisionRecord> decision_log_;

  // scratch buffers reused across TTIs
  std::vector<int> rbgs_per_ue_;
  std::vector<std::vector<InterfererRef>> interferers_;
};

struct RunResult {
  std::vector<KpiRow> rows;
  bool diverged = false;
};

// Convenience wrapper: build, run to the horizon, collect rows.
RunResult run_episode(const ExperimentConfig& cfg, Algorithm algo,
                      std::uint64_t seed, double load_bps);

}  // namespace ratsteer
