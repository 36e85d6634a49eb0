#pragma once

#include <cstdint>
#include <deque>
#include <random>
#include <span>
#include <vector>

#include "ratsteer/traffic.hpp"

namespace ratsteer {

enum class Rat : int { kLte = 0, kNr = 1 };

std::string_view to_string(Rat rat);

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

double distance_m(Vec2 a, Vec2 b);

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);
double db_to_linear(double db);
double linear_to_db(double linear);

// Carrier-dependent log-distance path loss in dB. The LTE macro curve takes
// distance in km and ignores the carrier; the NR curve takes distance in m
// plus the carrier in GHz. Distances are clamped to min_distance_m first.
double path_loss_db(Rat rat, double dist_m, double carrier_hz,
                    double min_distance_m = 1.0);

// Number of equal-width resource block groups carved out of a nominal
// bandwidth; the remainder is control/guard overhead, not user capacity.
int rbg_count_for_bandwidth(double bandwidth_hz, double rbg_bandwidth_hz,
                            double usable_fraction);

// FIFO of fixed-size packets for one (base station, UE) pair. The head
// packet may be partially served across TTIs; head_bits_served tracks how
// far. Overflow drops the arriving packet (drop-newest).
class PacketQueue {
 public:
  PacketQueue() = default;
  explicit PacketQueue(int capacity_packets) : capacity_(capacity_packets) {}

  // False when full: the packet was dropped and counted, not enqueued.
  bool push(const Packet& p);
  const Packet& head() const { return packets_.front(); }
  void pop_head();

  bool empty() const { return packets_.empty(); }
  int size() const { return static_cast<int>(packets_.size()); }
  int capacity() const { return capacity_; }
  long total_bits_queued() const { return bits_queued_; }

  double head_bits_served = 0.0;

  long enqueued_count() const { return enqueued_; }
  long dequeued_count() const { return dequeued_; }
  long dropped_count() const { return dropped_; }

 private:
  std::deque<Packet> packets_;
  int capacity_ = 1000;
  long bits_queued_ = 0;
  long enqueued_ = 0;
  long dequeued_ = 0;
  long dropped_ = 0;
};

struct BaseStation {
  int id = -1;
  Rat rat = Rat::kLte;
  Vec2 pos;
  double tx_power_w = 0.0;
  double carrier_hz = 0.0;
  double bandwidth_hz = 0.0;
  double rbg_bandwidth_hz = 180e3;
  int rbg_count = 0;

  double tx_power_per_rbg_w() const { return tx_power_w / rbg_count; }
};

struct UserEquipment {
  int id = -1;
  Vec2 pos;
  int enb_id = -1;  // serving LTE cell
  int gnb_id = -1;  // nearest NR cell
};

// Which UE owns each RBG of one base station this TTI (-1 = idle). One owner
// per RBG by construction, which is exactly the per-BS exclusivity rule.
struct RbgAllocation {
  int bs_id = -1;
  std::vector<int> owner;

  void reset(int bs, int rbg_count) {
    bs_id = bs;
    owner.assign(static_cast<std::size_t>(rbg_count), -1);
  }
};

// Snapshot of all link gains for one TTI plus the noise floor. Gains are
// linear power gains indexed by (bs, ue, rbg).
class ChannelRealization {
 public:
  void reset(std::span<const BaseStation> bss, int ue_count,
             double noise_w_per_hz);

  double gain(int bs_id, int ue_id, int rbg) const {
    return gains_[static_cast<std::size_t>(bs_id)]
                 [static_cast<std::size_t>(ue_id) * strides_[bs_id] + rbg];
  }
  double& gain(int bs_id, int ue_id, int rbg) {
    return gains_[static_cast<std::size_t>(bs_id)]
                 [static_cast<std::size_t>(ue_id) * strides_[bs_id] + rbg];
  }
  double noise_w_per_hz() const { return noise_w_per_hz_; }
  int ue_count() const { return ue_count_; }

 private:
  std::vector<std::vector<double>> gains_;  // [bs][ue * rbg_count + rbg]
  std::vector<std::size_t> strides_;        // rbg_count per bs
  double noise_w_per_hz_ = 0.0;
  int ue_count_ = 0;
};

struct ChannelModelConfig {
  double shadowing_sigma_db = 8.0;
  bool fast_fading = true;
  double noise_dbm_per_hz = -174.0;
  double noise_figure_db = 7.0;
  double min_distance_m = 1.0;
};

// Large-scale gain (path loss + shadowing) is frozen per run; fast fading is
// redrawn per (bs, ue, rbg) each TTI as a unit-mean exponential power gain
// (Rayleigh amplitude).
class ChannelModel {
 public:
  ChannelModel() = default;
  ChannelModel(std::span<const BaseStation> bss,
               std::span<const UserEquipment> ues, ChannelModelConfig cfg,
               std::mt19937_64& shadowing_rng);

  // Frozen large-scale linear gain for one link.
  double mean_gain(int bs_id, int ue_id) const {
    return mean_gain_[static_cast<std::size_t>(bs_id)]
                     [static_cast<std::size_t>(ue_id)];
  }

  // One link, one RBG: mean gain times a fresh fading draw.
  double instant_gain(int bs_id, int ue_id, std::mt19937_64& fading_rng) const;

  // Draws every (bs, ue, rbg) gain for the coming TTI, in a fixed order.
  void realize(std::span<const BaseStation> bss, ChannelRealization& out,
               std::mt19937_64& fading_rng) const;

  double noise_w_per_hz() const { return noise_w_per_hz_; }
  const ChannelModelConfig& config() const { return cfg_; }

 private:
  std::vector<std::vector<double>> mean_gain_;  // [bs][ue]
  ChannelModelConfig cfg_;
  double noise_w_per_hz_ = 0.0;
};

// Reference to one potential interferer: a co-RAT cell and its current
// allocation (interference only flows from RBGs that are actually assigned).
struct InterfererRef {
  const BaseStation* bs = nullptr;
  const RbgAllocation* alloc = nullptr;
};

// SINR on one RBG as seen by `ue_id` from `serving`. Interference sums
// tx-per-RBG power over interferers whose RBG `rbg` is busy; noise is
// N0 * RBG bandwidth.
double compute_sinr(int rbg, int ue_id, const BaseStation& serving,
                    std::span<const InterfererRef> interferers,
                    const ChannelRealization& chan);

// Shannon capacity of the serving link in bit/s summed over the RBGs that
// `alloc` assigns to `ue_id`.
double link_capacity(int ue_id, const BaseStation& serving,
                     const RbgAllocation& alloc,
                     std::span<const InterfererRef> interferers,
                     const ChannelRealization& chan);

// True when the aggregate offered rate of the flows steered onto a link
// stays within its instantaneous capacity.
bool check_capacity_constraint(std::span<const double> demand_bps,
                               double capacity_bps);

// Air-time for one packet at a given link rate; +inf when the link carries
// nothing (capacity 0 means "not scheduled", not an error).
double transmission_delay(double packet_bits, double capacity_bps);

// Queueing delay (in whole TTIs) plus transmission delay, in seconds.
double packet_total_delay(long enqueue_tti, long deliver_tti, double tti_s,
                          double transmission_s);

// Round-robin over UEs with queued data, one RBG per grant, cursor kept
// across TTIs so short queues are not starved by allocation order.
class RoundRobinScheduler {
 public:
  // Fills `alloc` for `bs`; `has_data(ue_id)` gates participation.
  template <typename HasData>
  void allocate(const BaseStation& bs, int ue_count, HasData&& has_data,
                RbgAllocation& alloc) {
    alloc.reset(bs.id, bs.rbg_count);
    active_.clear();
    for (int u = 0; u < ue_count; ++u)
      if (has_data(u)) active_.push_back(u);
    if (active_.empty()) return;

    // First active UE at or after the cursor, wrapping.
    std::size_t start = 0;
    while (start < active_.size() && active_[start] < cursor_) ++start;
    if (start == active_.size()) start = 0;

    for (int h = 0; h < bs.rbg_count; ++h)
      alloc.owner[static_cast<std::size_t>(h)] =
          active_[(start + static_cast<std::size_t>(h)) % active_.size()];

    // Next TTI resumes after the last-served UE.
    const int last =
        active_[(start + static_cast<std::size_t>(bs.rbg_count) - 1) %
                active_.size()];
    cursor_ = last + 1;
  }

  int cursor() const { return cursor_; }

 private:
  int cursor_ = 0;
  std::vector<int> active_;
};

}  // namespace ratsteer
