#include "ratsteer/traffic.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace ratsteer {

std::string_view to_string(TrafficClass cls) {
  switch (cls) {
    case TrafficClass::kVoice: return "voice";
    case TrafficClass::kVideo: return "video";
    case TrafficClass::kGaming: return "gaming";
  }
  return "unknown";
}

TrafficTable default_traffic_table() {
  return TrafficTable{{
      {TrafficClass::kVoice, 30, 0.1e6, 100e-3, 0.20},
      {TrafficClass::kVideo, 250, 10e6, 80e-3, 0.50},
      {TrafficClass::kGaming, 120, 5e6, 40e-3, 0.30},
  }};
}

FlowSource make_flow_source(int id, int ue_id, const TrafficClassSpec& spec,
                            double offered_bps, double tti_s) {
  FlowSource src;
  src.id = id;
  src.ue_id = ue_id;
  src.cls = spec.cls;
  src.offered_bps = offered_bps;
  src.packet_bits = spec.packet_bits();
  src.lambda_per_tti = offered_bps * tti_s / spec.packet_bits();
  return src;
}

std::vector<Packet> generate_arrivals(const FlowSource& src, long tti,
                                      std::mt19937_64& rng) {
  if (src.lambda_per_tti <= 0.0) return {};
  std::poisson_distribution<int> batch(src.lambda_per_tti);
  const int count = batch(rng);
  std::vector<Packet> packets(static_cast<std::size_t>(count));
  for (auto& p : packets) {
    p.flow_id = src.id;
    p.cls = src.cls;
    p.size_bits = src.packet_bits;
    p.enqueue_tti = tti;
  }
  return packets;
}

std::vector<FlowSource> build_traffic_mix(double total_load_bps,
                                          const TrafficTable& table,
                                          int ue_count, double tti_s) {
  if (ue_count <= 0) throw std::invalid_argument("ue_count must be positive");
  if (total_load_bps < 0.0)
    throw std::invalid_argument("total load must be non-negative");

  std::vector<const TrafficClassSpec*> active;
  for (const auto& spec : table)
    if (spec.mix_fraction > 0.0) active.push_back(&spec);
  if (active.empty()) return {};

  const int slots =
      std::max(ue_count, static_cast<int>(active.size()));

  // First pass: count flows per class so each class's load share can be
  // split evenly among exactly its own flows.
  std::vector<int> flows_per_class(active.size(), 0);
  for (int j = 0; j < slots; ++j)
    ++flows_per_class[static_cast<std::size_t>(j) % active.size()];

  std::vector<FlowSource> flows;
  flows.reserve(static_cast<std::size_t>(slots));
  for (int j = 0; j < slots; ++j) {
    const std::size_t k = static_cast<std::size_t>(j) % active.size();
    const TrafficClassSpec& spec = *active[k];
    const double class_load = total_load_bps * spec.mix_fraction;
    const double flow_load = class_load / flows_per_class[k];
    flows.push_back(
        make_flow_source(j, j % ue_count, spec, flow_load, tti_s));
  }
  return flows;
}

}  // namespace ratsteer
