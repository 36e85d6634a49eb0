#pragma once

#include <algorithm>
#include <vector>

#include "ratsteer/traffic.hpp"

namespace ratsteer {

// The two radio legs a flow can be steered onto.
enum class SteeringAction : int { kLte = 0, kNr = 1 };

inline constexpr int kSteeringActionCount = 2;

// Raw per-flow observation at a decision boundary: traffic class, last
// measured wideband SINR toward each candidate cell, and the total queue
// backlog (packets) at each cell.
struct FlowObservation {
  TrafficClass cls = TrafficClass::kVoice;
  double sinr_enb_db = 0.0;
  double sinr_gnb_db = 0.0;
  double queue_enb_packets = 0.0;
  double queue_gnb_packets = 0.0;
};

// Maps an observation to the network input: one-hot class (3), both SINRs
// scaled from [sinr_min, sinr_max] dB into [0, 1] with clamping (2), both
// queue levels as a fraction of queue_scale, capped at 1 (2).
struct StateEncoder {
  double sinr_min_db = -10.0;
  double sinr_max_db = 40.0;
  double queue_scale_packets = 1000.0;

  static constexpr int kDim = kTrafficClassCount + 4;

  double scale_sinr(double sinr_db) const {
    const double t = (sinr_db - sinr_min_db) / (sinr_max_db - sinr_min_db);
    return std::clamp(t, 0.0, 1.0);
  }
  double scale_queue(double packets) const {
    return std::min(packets / queue_scale_packets, 1.0);
  }

  std::vector<double> encode(const FlowObservation& obs) const {
    std::vector<double> s(kDim, 0.0);
    s[static_cast<std::size_t>(obs.cls)] = 1.0;
    s[kTrafficClassCount + 0] = scale_sinr(obs.sinr_enb_db);
    s[kTrafficClassCount + 1] = scale_sinr(obs.sinr_gnb_db);
    s[kTrafficClassCount + 2] = scale_queue(obs.queue_enb_packets);
    s[kTrafficClassCount + 3] = scale_queue(obs.queue_gnb_packets);
    return s;
  }
};

}  // namespace ratsteer
