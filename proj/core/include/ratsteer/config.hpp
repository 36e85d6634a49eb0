#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ratsteer/baselines.hpp"
#include "ratsteer/net_model.hpp"
#include "ratsteer/observation.hpp"
#include "ratsteer/qos.hpp"
#include "ratsteer/rl.hpp"
#include "ratsteer/traffic.hpp"

namespace ratsteer {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Algorithm : int { kDqn = 0, kQLearning = 1, kHeuristic = 2 };

std::string_view to_string(Algorithm algo);
std::optional<Algorithm> algorithm_from_string(std::string_view name);

// Cell layout: one LTE macro cell at the origin, gNBs on a ring around it,
// UEs dropped uniformly in the macro disk.
struct TopologyConfig {
  int ue_count = 30;
  int gnb_count = 4;
  double cell_radius_m = 3200.0;
  double gnb_ring_radius_m = 1600.0;
  double enb_tx_power_w = 40.0;
  double gnb_tx_power_w = 20.0;
  double enb_bandwidth_hz = 10e6;
  double gnb_bandwidth_hz = 20e6;
  double macro_carrier_hz = 3.5e9;
  double small_carrier_hz = 0.8e9;
  // Assigns the macro carrier to the small cells and vice versa; the stock
  // assignment above is kept verbatim even though it reads swapped.
  bool swap_carriers = false;
  double rbg_bandwidth_hz = 180e3;
  double usable_bandwidth_fraction = 0.9;
};

struct TimingConfig {
  double tti_s = 1e-3;
  long total_ttis = 50000;
  int decision_period_ttis = 10;
  int reward_window_ttis = 50;
  long report_window_ttis = 1000;
  int queue_capacity_packets = 1000;
};

// Ratio cap plus per-class delay/throughput weighting of the reward metric.
struct QosConfig {
  double ratio_cap = 2.0;
  std::array<QosWeights, kTrafficClassCount> class_weights{};
};

struct SweepConfig {
  std::vector<double> loads_bps = {5e6, 6e6, 7e6, 8e6, 9e6, 10e6};
  std::vector<std::uint64_t> seeds = {1, 2, 3};
  std::vector<Algorithm> algorithms = {Algorithm::kDqn, Algorithm::kQLearning,
                                       Algorithm::kHeuristic};
};

struct ExperimentConfig {
  TopologyConfig topology;
  ChannelModelConfig channel;
  TimingConfig timing;
  TrafficTable traffic = default_traffic_table();
  QosConfig qos;
  StateEncoder encoder;
  AgentConfig agent;
  TabularConfig tabular;
  HeuristicWeights heuristic_weights;
  HeuristicCutoffs heuristic_cutoffs;
  SweepConfig sweep;
};

// Strict JSON parse: every field optional (defaults above), unknown keys
// rejected so typos fail loudly instead of silently running the defaults.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

// Canonical JSON with every knob spelled out; parse_config round-trips it.
std::string serialize_config(const ExperimentConfig& cfg);

// Sanity checks across fields; throws ConfigError with the offending key.
void validate_config(const ExperimentConfig& cfg);

}  // namespace ratsteer
