#include "ratsteer/sim.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>

namespace ratsteer {

namespace {

// Uniform position in a disk of radius R: inverse-CDF radius, then angle.
Vec2 uniform_in_disk(double radius, std::mt19937_64& rng) {
  const double r = radius * std::sqrt(uniform_unit(rng));
  const double theta = 2.0 * std::numbers::pi * uniform_unit(rng);
  return {r * std::cos(theta), r * std::sin(theta)};
}

}  // namespace

Simulation::Simulation(const ExperimentConfig& cfg, Algorithm algo,
                       std::uint64_t seed, double load_bps)
    : cfg_(cfg), algo_(algo), seed_(seed), load_bps_(load_bps) {
  validate_config(cfg_);
  const auto& topo = cfg_.topology;

  double macro_carrier = topo.macro_carrier_hz;
  double small_carrier = topo.small_carrier_hz;
  if (topo.swap_carriers) std::swap(macro_carrier, small_carrier);

  BaseStation enb;
  enb.id = 0;
  enb.rat = Rat::kLte;
  enb.pos = {0.0, 0.0};
  enb.tx_power_w = topo.enb_tx_power_w;
  enb.carrier_hz = macro_carrier;
  enb.bandwidth_hz = topo.enb_bandwidth_hz;
  enb.rbg_bandwidth_hz = topo.rbg_bandwidth_hz;
  enb.rbg_count = rbg_count_for_bandwidth(topo.enb_bandwidth_hz,
                                          topo.rbg_bandwidth_hz,
                                          topo.usable_bandwidth_fraction);
  bss_.push_back(enb);

  for (int k = 0; k < topo.gnb_count; ++k) {
    BaseStation gnb;
    gnb.id = 1 + k;
    gnb.rat = Rat::kNr;
    const double angle = 2.0 * std::numbers::pi * k / topo.gnb_count;
    gnb.pos = {topo.gnb_ring_radius_m * std::cos(angle),
               topo.gnb_ring_radius_m * std::sin(angle)};
    gnb.tx_power_w = topo.gnb_tx_power_w;
    gnb.carrier_hz = small_carrier;
    gnb.bandwidth_hz = topo.gnb_bandwidth_hz;
    gnb.rbg_bandwidth_hz = topo.rbg_bandwidth_hz;
    gnb.rbg_count = rbg_count_for_bandwidth(topo.gnb_bandwidth_hz,
                                            topo.rbg_bandwidth_hz,
                                            topo.usable_bandwidth_fraction);
    bss_.push_back(gnb);
  }

  auto topology_rng = make_rng(seed_, RngStream::kTopology);
  ues_.resize(static_cast<std::size_t>(topo.ue_count));
  for (int u = 0; u < topo.ue_count; ++u) {
    auto& ue = ues_[static_cast<std::size_t>(u)];
    ue.id = u;
    ue.pos = uniform_in_disk(topo.cell_radius_m, topology_rng);
    ue.enb_id = 0;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& bs : bss_) {
      if (bs.rat != Rat::kNr) continue;
      const double d = distance_m(bs.pos, ue.pos);
      if (d < best) {
        best = d;
        ue.gnb_id = bs.id;
      }
    }
  }

  auto shadowing_rng = make_rng(seed_, RngStream::kShadowing);
  channel_ = ChannelModel(bss_, ues_, cfg_.channel, shadowing_rng);

  const auto flow_sources = build_traffic_mix(load_bps_, cfg_.traffic,
                                              topo.ue_count, cfg_.timing.tti_s);
  flows_.resize(flow_sources.size());
  for (std::size_t i = 0; i < flow_sources.size(); ++i)
    flows_[i].src = flow_sources[i];

  queues_.resize(bss_.size());
  for (auto& per_bs : queues_)
    per_bs.assign(static_cast<std::size_t>(topo.ue_count),
                  PacketQueue(cfg_.timing.queue_capacity_packets));

  alloc_.resize(bss_.size());
  sched_.resize(bss_.size());
  rbgs_per_ue_.assign(static_cast<std::size_t>(topo.ue_count), 0);

  // Fixed interferer lists: co-RAT cells other than the serving one.
  interferers_.resize(bss_.size());
  for (const auto& bs : bss_) {
    for (const auto& other : bss_) {
      if (other.id == bs.id || other.rat != bs.rat) continue;
      interferers_[static_cast<std::size_t>(bs.id)].push_back(
          {&bss_[static_cast<std::size_t>(other.id)],
           &alloc_[static_cast<std::size_t>(other.id)]});
    }
  }

  // Attach-time SINR estimate from the frozen large-scale gains: no fading,
  // no interference. Decisions at TTI 0 run off these.
  sinr_enb_db_.resize(static_cast<std::size_t>(topo.ue_count));
  sinr_gnb_db_.resize(static_cast<std::size_t>(topo.ue_count));
  for (int u = 0; u < topo.ue_count; ++u) {
    const auto& ue = ues_[static_cast<std::size_t>(u)];
    auto pilot = [&](const BaseStation& bs) {
      const double signal =
          bs.tx_power_per_rbg_w() * channel_.mean_gain(bs.id, u);
      const double noise = channel_.noise_w_per_hz() * bs.rbg_bandwidth_hz;
      return linear_to_db(signal / noise);
    };
    sinr_enb_db_[static_cast<std::size_t>(u)] =
        pilot(bss_[static_cast<std::size_t>(ue.enb_id)]);
    sinr_gnb_db_[static_cast<std::size_t>(u)] =
        pilot(bss_[static_cast<std::size_t>(ue.gnb_id)]);
  }

  traffic_rng_ = make_rng(seed_, RngStream::kTraffic);
  fading_rng_ = make_rng(seed_, RngStream::kFading);

  switch (algo_) {
    case Algorithm::kDqn:
      dqn_.emplace(StateEncoder::kDim, kSteeringActionCount, cfg_.agent,
                   make_rng(seed_, RngStream::kAgentInit),
                   make_rng(seed_, RngStream::kAgentExplore),
                   make_rng(seed_, RngStream::kAgentSample));
      break;
    case Algorithm::kQLearning:
      tabular_.emplace(cfg_.tabular,
                       make_rng(seed_, RngStream::kAgentExplore));
      break;
    case Algorithm::kHeuristic:
      heuristic_.weights = cfg_.heuristic_weights;
      heuristic_.cutoffs = cfg_.heuristic_cutoffs;
      break;
  }
}

int Simulation::serving_bs(const FlowState& flow) const {
  const auto& ue = ues_[static_cast<std::size_t>(flow.src.ue_id)];
  return flow.steering == SteeringAction::kLte ? ue.enb_id : ue.gnb_id;
}

long Simulation::bs_queue_packets(int bs_id) const {
  long total = 0;
  for (const auto& q : queues_[static_cast<std::size_t>(bs_id)])
    total += q.size();
  return total;
}

double Simulation::last_sinr_db(int ue_id, Rat rat) const {
  return rat == Rat::kLte ? sinr_enb_db_[static_cast<std::size_t>(ue_id)]
                          : sinr_gnb_db_[static_cast<std::size_t>(ue_id)];
}

RunTotals Simulation::totals() const {
  RunTotals t;
  t.generated = generated_;
  t.delivered = delivered_;
  for (const auto& per_bs : queues_) {
    for (const auto& q : per_bs) {
      t.dropped += q.dropped_count();
      t.queued += q.size();
    }
  }
  return t;
}

FlowObservation Simulation::observe(const FlowState& flow) const {
  const auto& ue = ues_[static_cast<std::size_t>(flow.src.ue_id)];
  FlowObservation obs;
  obs.cls = flow.src.cls;
  obs.sinr_enb_db = sinr_enb_db_[static_cast<std::size_t>(ue.id)];
  obs.sinr_gnb_db = sinr_gnb_db_[static_cast<std::size_t>(ue.id)];
  obs.queue_enb_packets = static_cast<double>(bs_queue_packets(ue.enb_id));
  obs.queue_gnb_packets = static_cast<double>(bs_queue_packets(ue.gnb_id));
  return obs;
}

void Simulation::decide_all() {
  const bool learning = algo_ != Algorithm::kHeuristic;
  for (auto& flow : flows_) {
    const FlowObservation obs = observe(flow);
    SteeringAction action = SteeringAction::kLte;
    RewardWindow window;
    switch (algo_) {
      case Algorithm::kDqn: {
        window.state = cfg_.encoder.encode(obs);
        action = static_cast<SteeringAction>(dqn_->act(window.state));
        break;
      }
      case Algorithm::kQLearning: {
        window.discrete_state = discretize_state(obs, cfg_.tabular.buckets);
        action = static_cast<SteeringAction>(
            tabular_->act(window.discrete_state));
        break;
      }
      case Algorithm::kHeuristic:
        action = heuristic_.decide(obs);
        break;
    }
    if (log_decisions_)
      decision_log_.push_back({tti_, flow.src.id, action, flow.steering});
    flow.steering = action;
    if (learning) {
      window.decided_tti = tti_;
      window.close_tti = tti_ + cfg_.timing.reward_window_ttis;
      window.action = static_cast<int>(action);
      flow.open.push_back(std::move(window));
    }
  }
}

void Simulation::record_delivery(const BaseStation& bs, const Packet& packet,
                                 double delay_s) {
  ++delivered_;
  const auto k = static_cast<std::size_t>(packet.cls);
  const double bytes = packet.size_bits / 8.0;
  accum_.delivered_bits += packet.size_bits;
  accum_.delay_sum_s += delay_s;
  ++accum_.packets;
  accum_.class_delay_sum_s[k] += delay_s;
  ++accum_.class_packets[k];
  if (bs.rat == Rat::kLte)
    accum_.bytes_enb[k] += bytes;
  else
    accum_.bytes_gnb[k] += bytes;

  if (packet.flow_id < 0) return;  // injected packets score no window
  auto& flow = flows_[static_cast<std::size_t>(packet.flow_id)];
  for (auto& w : flow.open) {
    w.delivered_bits += packet.size_bits;
    w.delay_sum_s += delay_s;
    ++w.delivered_packets;
  }
}

void Simulation::transmit() {
  for (const auto& bs : bss_) {
    const auto b = static_cast<std::size_t>(bs.id);
    auto& alloc = alloc_[b];
    std::fill(rbgs_per_ue_.begin(), rbgs_per_ue_.end(), 0);
    bool any = false;
    for (int owner : alloc.owner) {
      if (owner >= 0) {
        ++rbgs_per_ue_[static_cast<std::size_t>(owner)];
        any = true;
      }
    }
    if (!any) continue;

    const std::span<const InterfererRef> interferers(interferers_[b]);
    for (int u = 0; u < cfg_.topology.ue_count; ++u) {
      if (rbgs_per_ue_[static_cast<std::size_t>(u)] == 0) continue;
      const double capacity =
          link_capacity(u, bs, alloc, interferers, chan_);

      // Offered-rate sum of the flows currently steered onto this link; a
      // bookkeeping check, steering is the only control.
      double demand = 0.0;
      for (const auto& flow : flows_)
        if (flow.src.ue_id == u && serving_bs(flow) == bs.id)
          demand += flow.src.offered_bps;
      if (demand > capacity) {
        ++accum_.capacity_violations;
        ++capacity_violations_total_;
      }

      auto& q = queues_[b][static_cast<std::size_t>(u)];
      double budget_bits = capacity * cfg_.timing.tti_s;
      while (budget_bits > 0.0 && !q.empty()) {
        const Packet& head = q.head();
        const double remaining_bits = head.size_bits - q.head_bits_served;
        if (remaining_bits <= budget_bits) {
          budget_bits -= remaining_bits;
          const double trx_s = transmission_delay(head.size_bits, capacity);
          const double delay_s = packet_total_delay(
              head.enqueue_tti, tti_, cfg_.timing.tti_s, trx_s);
          const Packet delivered = head;
          q.pop_head();
          record_delivery(bs, delivered, delay_s);
        } else {
          q.head_bits_served += budget_bits;
          budget_bits = 0.0;
        }
      }
    }
  }
}

void Simulation::update_measurements() {
  for (int u = 0; u < cfg_.topology.ue_count; ++u) {
    const auto& ue = ues_[static_cast<std::size_t>(u)];
    auto wideband = [&](const BaseStation& bs) {
      const auto b = static_cast<std::size_t>(bs.id);
      const std::span<const InterfererRef> interferers(interferers_[b]);
      double signal = 0.0;
      double noise_plus_interf = 0.0;
      const double noise_per_rbg =
          chan_.noise_w_per_hz() * bs.rbg_bandwidth_hz;
      for (int h = 0; h < bs.rbg_count; ++h) {
        signal += bs.tx_power_per_rbg_w() * chan_.gain(bs.id, u, h);
        double interference = 0.0;
        for (const auto& ref : interferers) {
          if (h >= ref.bs->rbg_count) continue;
          if (ref.alloc->owner[static_cast<std::size_t>(h)] < 0) continue;
          interference +=
              ref.bs->tx_power_per_rbg_w() * chan_.gain(ref.bs->id, u, h);
        }
        noise_plus_interf += noise_per_rbg + interference;
      }
      return linear_to_db(signal / noise_plus_interf);
    };
    sinr_enb_db_[static_cast<std::size_t>(u)] =
        wideband(bss_[static_cast<std::size_t>(ue.enb_id)]);
    sinr_gnb_db_[static_cast<std::size_t>(u)] =
        wideband(bss_[static_cast<std::size_t>(ue.gnb_id)]);
  }
}

void Simulation::close_window(FlowState& flow, RewardWindow& window) {
  const double window_s =
      cfg_.timing.reward_window_ttis * cfg_.timing.tti_s;
  const double throughput =
      window.delivered_bits / window_s;
  const double delay =
      window.delivered_packets > 0
          ? window.delay_sum_s / window.delivered_packets
          : 0.0;
  const auto k = static_cast<std::size_t>(flow.src.cls);
  const TrafficClassSpec& spec = cfg_.traffic[k];
  const QosWeights weights = cfg_.qos.class_weights[k];
  const double r_delay =
      delay_ratio(delay, spec.delay_qos_s, cfg_.qos.ratio_cap);
  const double r_throughput = throughput_ratio(
      throughput, spec.throughput_qos_bps, cfg_.qos.ratio_cap);
  const double reward = reward_from_metric(
      steering_metric(r_delay, r_throughput, weights));

  accum_.reward_sum += reward;
  ++accum_.reward_count;

  const FlowObservation next_obs = observe(flow);
  if (algo_ == Algorithm::kDqn) {
    Experience e;
    e.state = std::move(window.state);
    e.action = window.action;
    e.reward = reward;
    e.next_state = cfg_.encoder.encode(next_obs);
    e.terminal = false;
    dqn_->observe(std::move(e));
  } else if (algo_ == Algorithm::kQLearning) {
    tabular_->learn(window.discrete_state, window.action, reward,
                    discretize_state(next_obs, cfg_.tabular.buckets));
  }
}

void Simulation::close_windows() {
  for (auto& flow : flows_) {
    while (!flow.open.empty() && flow.open.front().close_tti == tti_ + 1) {
      close_window(flow, flow.open.front());
      flow.open.pop_front();
    }
  }
}

void Simulation::flush_report_window() {
  const double window_s =
      cfg_.timing.report_window_ttis * cfg_.timing.tti_s;
  KpiRow row;
  row.algorithm = algo_;
  row.seed = seed_;
  row.load_bps = load_bps_;
  row.window = window_index_;
  row.throughput_bps = accum_.delivered_bits / window_s;
  row.delay_s = accum_.packets > 0 ? accum_.delay_sum_s / accum_.packets : 0.0;
  for (int k = 0; k < kTrafficClassCount; ++k) {
    const auto i = static_cast<std::size_t>(k);
    row.class_delay_s[i] = accum_.class_packets[i] > 0
                               ? accum_.class_delay_sum_s[i] /
                                     accum_.class_packets[i]
                               : 0.0;
    row.bytes_enb[i] = accum_.bytes_enb[i];
    row.bytes_gnb[i] = accum_.bytes_gnb[i];
  }
  row.packets_delivered = accum_.packets;
  row.packets_dropped = accum_.dropped;
  row.mean_reward =
      accum_.reward_count > 0 ? accum_.reward_sum / accum_.reward_count : 0.0;
  row.capacity_violations = accum_.capacity_violations;
  row.diverged = false;
  rows_.push_back(std::move(row));
  accum_ = ReportAccum{};
  ++window_index_;
}

void Simulation::mark_diverged() {
  diverged_ = true;
  KpiRow row;
  row.algorithm = algo_;
  row.seed = seed_;
  row.load_bps = load_bps_;
  row.window = window_index_;
  row.diverged = true;
  rows_.push_back(std::move(row));
}

void Simulation::step_tti() {
  if (diverged_) return;

  // Arrivals join the queue of the flow's currently steered cell.
  for (const auto& flow : flows_) {
    const auto packets = generate_arrivals(flow.src, tti_, traffic_rng_);
    if (packets.empty()) continue;
    const auto bs = static_cast<std::size_t>(serving_bs(flow));
    auto& q = queues_[bs][static_cast<std::size_t>(flow.src.ue_id)];
    for (const auto& p : packets) {
      ++generated_;
      if (!q.push(p)) ++accum_.dropped;
    }
  }

  // Steering decisions on the period boundary, off last TTI's measurements.
  if (tti_ % cfg_.timing.decision_period_ttis == 0) decide_all();

  channel_.realize(bss_, chan_, fading_rng_);

  for (const auto& bs : bss_) {
    const auto b = static_cast<std::size_t>(bs.id);
    sched_[b].allocate(
        bs, cfg_.topology.ue_count,
        [&](int u) { return !queues_[b][static_cast<std::size_t>(u)].empty(); },
        alloc_[b]);
  }

  transmit();
  update_measurements();
  close_windows();

  if (dqn_) {
    try {
      dqn_->train_tick();
    } catch (const DivergenceError&) {
      mark_diverged();
      return;
    }
  }

  if ((tti_ + 1) % cfg_.timing.report_window_ttis == 0)
    flush_report_window();

  ++tti_;
}

void Simulation::run_ttis(long n) {
  for (long i = 0; i < n && !diverged_; ++i) step_tti();
}

void Simulation::run_to_end() {
  while (tti_ < cfg_.timing.total_ttis && !diverged_) step_tti();
}

void Simulation::freeze_policy() {
  if (dqn_) dqn_->freeze();
  if (tabular_) tabular_->freeze();
}

void Simulation::inject_packets(int bs_id, int ue_id, TrafficClass cls,
                                int count) {
  const TrafficClassSpec& spec = cfg_.traffic[static_cast<std::size_t>(cls)];
  auto& q = queues_[static_cast<std::size_t>(bs_id)]
                   [static_cast<std::size_t>(ue_id)];
  for (int i = 0; i < count; ++i) {
    Packet p;
    p.flow_id = -1;
    p.cls = cls;
    p.size_bits = spec.packet_bits();
    p.enqueue_tti = tti_;
    ++generated_;
    if (!q.push(p)) ++accum_.dropped;
  }
}

RunResult run_episode(const ExperimentConfig& cfg, Algorithm algo,
                      std::uint64_t seed, double load_bps) {
  Simulation sim(cfg, algo, seed, load_bps);
  sim.run_to_end();
  RunResult result;
  result.diverged = sim.diverged();
  result.rows = sim.take_rows();
  return result;
}

}  // namespace ratsteer
