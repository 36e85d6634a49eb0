#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace ratsteer {

enum class TrafficClass : int { kVoice = 0, kVideo = 1, kGaming = 2 };

inline constexpr int kTrafficClassCount = 3;

std::string_view to_string(TrafficClass cls);

// Per-class traffic profile: fixed packet size, QoS targets and share of the
// total offered load.
struct TrafficClassSpec {
  TrafficClass cls = TrafficClass::kVoice;
  int packet_bytes = 0;
  double throughput_qos_bps = 0.0;
  double delay_qos_s = 0.0;
  double mix_fraction = 0.0;

  int packet_bits() const { return packet_bytes * 8; }
};

using TrafficTable = std::array<TrafficClassSpec, kTrafficClassCount>;

// Voice 30 B / 0.1 Mb/s / 100 ms, video 250 B / 10 Mb/s / 80 ms,
// gaming 120 B / 5 Mb/s / 40 ms, mixed 20/50/30.
TrafficTable default_traffic_table();

struct Packet {
  int flow_id = -1;
  TrafficClass cls = TrafficClass::kVoice;
  int size_bits = 0;
  long enqueue_tti = -1;
};

// One downlink flow: a (UE, class) pair with a fixed offered rate. Arrivals
// are Poisson batches per TTI with mean lambda_per_tti packets.
struct FlowSource {
  int id = -1;
  int ue_id = -1;
  TrafficClass cls = TrafficClass::kVoice;
  double offered_bps = 0.0;
  int packet_bits = 0;
  double lambda_per_tti = 0.0;
};

FlowSource make_flow_source(int id, int ue_id, const TrafficClassSpec& spec,
                            double offered_bps, double tti_s);

// Packets arriving for `src` during one TTI. A zero-rate flow never draws
// from the engine, so disabling a class does not shift other flows' arrivals.
std::vector<Packet> generate_arrivals(const FlowSource& src, long tti,
                                      std::mt19937_64& rng);

// Splits `total_load_bps` across classes by mix fraction, then evenly across
// that class's flows. Flow slot j maps to UE (j mod ue_count) and to the
// j-th active class in round-robin; with slots = max(ue_count, classes) every
// UE gets at least one flow and every active class at least one UE.
std::vector<FlowSource> build_traffic_mix(double total_load_bps,
                                          const TrafficTable& table,
                                          int ue_count, double tti_s);

}  // namespace ratsteer
