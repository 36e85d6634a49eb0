#pragma once

#include "ratsteer/traffic.hpp"

namespace ratsteer {

// Relative weighting of the delay and throughput ratios in the steering
// metric. w1 + w2 == 1.
struct QosWeights {
  double w1 = 0.5;
  double w2 = 0.5;
};

// One flow's measured KPIs over a reward window, used to score a steering
// decision after the fact.
struct KpiSample {
  TrafficClass cls = TrafficClass::kVoice;
  double delay_s = 0.0;
  double throughput_bps = 0.0;
};

// QoS-target / measured delay, capped at r_cap. Lower measured delay is
// better, so the ratio grows as the flow beats its budget. A window with no
// measurable delay scores the cap (nothing waited).
double delay_ratio(double delay_s, double delay_qos_s, double r_cap);

// Measured / QoS-target throughput, capped at r_cap.
double throughput_ratio(double throughput_bps, double throughput_qos_bps,
                        double r_cap);

// Weighted blend of the two (already capped) ratios.
double steering_metric(double r_delay, double r_throughput, QosWeights w);

// Squashes the metric into (0, 1); the per-decision reward signal.
double reward_from_metric(double metric);

}  // namespace ratsteer
