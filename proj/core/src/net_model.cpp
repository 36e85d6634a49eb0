#include "ratsteer/net_model.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

namespace ratsteer {

std::string_view to_string(Rat rat) {
  return rat == Rat::kLte ? "lte" : "nr";
}

double distance_m(Vec2 a, Vec2 b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }
double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

double path_loss_db(Rat rat, double dist_m, double carrier_hz,
                    double min_distance_m) {
  const double d = std::max(dist_m, min_distance_m);
  if (rat == Rat::kLte) {
    return 128.1 + 37.6 * std::log10(d / 1000.0);
  }
  return 32.4 + 21.0 * std::log10(d) + 20.0 * std::log10(carrier_hz / 1e9);
}

int rbg_count_for_bandwidth(double bandwidth_hz, double rbg_bandwidth_hz,
                            double usable_fraction) {
  return static_cast<int>(
      std::floor(bandwidth_hz * usable_fraction / rbg_bandwidth_hz));
}

bool PacketQueue::push(const Packet& p) {
  if (static_cast<int>(packets_.size()) >= capacity_) {
    ++dropped_;
    return false;
  }
  packets_.push_back(p);
  bits_queued_ += p.size_bits;
  ++enqueued_;
  return true;
}

void PacketQueue::pop_head() {
  assert(!packets_.empty());
  bits_queued_ -= packets_.front().size_bits;
  packets_.pop_front();
  head_bits_served = 0.0;
  ++dequeued_;
}

void ChannelRealization::reset(std::span<const BaseStation> bss, int ue_count,
                               double noise_w_per_hz) {
  gains_.resize(bss.size());
  strides_.resize(bss.size());
  for (std::size_t b = 0; b < bss.size(); ++b) {
    strides_[b] = static_cast<std::size_t>(bss[b].rbg_count);
    gains_[b].assign(static_cast<std::size_t>(ue_count) * strides_[b], 0.0);
  }
  noise_w_per_hz_ = noise_w_per_hz;
  ue_count_ = ue_count;
}

ChannelModel::ChannelModel(std::span<const BaseStation> bss,
                           std::span<const UserEquipment> ues,
                           ChannelModelConfig cfg,
                           std::mt19937_64& shadowing_rng)
    : cfg_(cfg) {
  noise_w_per_hz_ =
      dbm_to_watts(cfg_.noise_dbm_per_hz + cfg_.noise_figure_db);
  mean_gain_.resize(bss.size());
  std::normal_distribution<double> shadow(0.0, 1.0);
  for (std::size_t b = 0; b < bss.size(); ++b) {
    mean_gain_[b].resize(ues.size());
    for (std::size_t u = 0; u < ues.size(); ++u) {
      const double pl = path_loss_db(bss[b].rat,
                                     distance_m(bss[b].pos, ues[u].pos),
                                     bss[b].carrier_hz, cfg_.min_distance_m);
      const double shadow_db = cfg_.shadowing_sigma_db * shadow(shadowing_rng);
      mean_gain_[b][u] = db_to_linear(-(pl + shadow_db));
    }
  }
}

double ChannelModel::instant_gain(int bs_id, int ue_id,
                                  std::mt19937_64& fading_rng) const {
  double fading = 1.0;
  if (cfg_.fast_fading) {
    std::exponential_distribution<double> exp1(1.0);
    fading = std::max(exp1(fading_rng), 1e-12);
  }
  return mean_gain(bs_id, ue_id) * fading;
}

void ChannelModel::realize(std::span<const BaseStation> bss,
                           ChannelRealization& out,
                           std::mt19937_64& fading_rng) const {
  const int ue_count = static_cast<int>(mean_gain_.empty()
                                            ? 0
                                            : mean_gain_[0].size());
  out.reset(bss, ue_count, noise_w_per_hz_);
  std::exponential_distribution<double> exp1(1.0);
  for (std::size_t b = 0; b < bss.size(); ++b) {
    for (int u = 0; u < ue_count; ++u) {
      const double mean = mean_gain_[b][static_cast<std::size_t>(u)];
      for (int h = 0; h < bss[b].rbg_count; ++h) {
        double fading = 1.0;
        if (cfg_.fast_fading) fading = std::max(exp1(fading_rng), 1e-12);
        out.gain(static_cast<int>(b), u, h) = mean * fading;
      }
    }
  }
}

double compute_sinr(int rbg, int ue_id, const BaseStation& serving,
                    std::span<const InterfererRef> interferers,
                    const ChannelRealization& chan) {
  const double signal_w = serving.tx_power_per_rbg_w() *
                          chan.gain(serving.id, ue_id, rbg);
  double interference_w = 0.0;
  for (const auto& ref : interferers) {
    if (ref.bs->id == serving.id || ref.bs->rat != serving.rat) continue;
    if (rbg >= ref.bs->rbg_count) continue;
    if (ref.alloc->owner[static_cast<std::size_t>(rbg)] < 0) continue;
    interference_w +=
        ref.bs->tx_power_per_rbg_w() * chan.gain(ref.bs->id, ue_id, rbg);
  }
  const double noise_w = chan.noise_w_per_hz() * serving.rbg_bandwidth_hz;
  return signal_w / (noise_w + interference_w);
}

double link_capacity(int ue_id, const BaseStation& serving,
                     const RbgAllocation& alloc,
                     std::span<const InterfererRef> interferers,
                     const ChannelRealization& chan) {
  double capacity = 0.0;
  for (int h = 0; h < serving.rbg_count; ++h) {
    if (alloc.owner[static_cast<std::size_t>(h)] != ue_id) continue;
    const double sinr = compute_sinr(h, ue_id, serving, interferers, chan);
    capacity += serving.rbg_bandwidth_hz * std::log2(1.0 + sinr);
  }
  return capacity;
}

bool check_capacity_constraint(std::span<const double> demand_bps,
                               double capacity_bps) {
  double total = 0.0;
  for (double d : demand_bps) total += d;
  return total <= capacity_bps;
}

double transmission_delay(double packet_bits, double capacity_bps) {
  if (capacity_bps <= 0.0) return std::numeric_limits<double>::infinity();
  return packet_bits / capacity_bps;
}

double packet_total_delay(long enqueue_tti, long deliver_tti, double tti_s,
                          double transmission_s) {
  return static_cast<double>(deliver_tti - enqueue_tti) * tti_s +
         transmission_s;
}

}  // namespace ratsteer
