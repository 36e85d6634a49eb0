#include "ratsteer/qos.hpp"

#include <algorithm>
#include <cmath>

namespace ratsteer {

double delay_ratio(double delay_s, double delay_qos_s, double r_cap) {
  if (delay_s <= 0.0) return r_cap;
  return std::min(delay_qos_s / delay_s, r_cap);
}

double throughput_ratio(double throughput_bps, double throughput_qos_bps,
                        double r_cap) {
  if (throughput_qos_bps <= 0.0) return r_cap;
  return std::min(throughput_bps / throughput_qos_bps, r_cap);
}

double steering_metric(double r_delay, double r_throughput, QosWeights w) {
  return w.w1 * r_delay + w.w2 * r_throughput;
}

double reward_from_metric(double metric) {
  return 1.0 / (1.0 + std::exp(-metric));
}

}  // namespace ratsteer
