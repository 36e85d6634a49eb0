// Acceptance gate for the steering simulator. Each criterion prints exactly
// one [PASS]/[FAIL] line; the process exits 0 only when every criterion
// passes. Thresholds and the benchmark scenario are pinned here on purpose:
// editing them is an explicit, reviewable act.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ratsteer/baselines.hpp"
#include "ratsteer/config.hpp"
#include "ratsteer/metrics.hpp"
#include "ratsteer/net_model.hpp"
#include "ratsteer/qos.hpp"
#include "ratsteer/rl.hpp"
#include "ratsteer/rng.hpp"
#include "ratsteer/sim.hpp"
#include "ratsteer/sweep.hpp"
#include "toy_mdp.hpp"

namespace ratsteer {
namespace {

// --- pinned tolerances ------------------------------------------------------
constexpr double kEqRelTol = 1e-9;           // closed-form equation checks
constexpr double kGradRelTol = 1e-5;         // finite-difference gradient
// Headline KPI bars: the mean gain across the load grid vs each baseline.
// Direction (better throughput AND lower delay) must additionally hold at
// every single load.
constexpr double kMinThroughputGainPct = 3.0;
constexpr double kMaxDelayDeltaPct = -10.0;
constexpr double kMajorityShare = 0.5;         // class-to-RAT byte share
constexpr double kEquationTimeLimitS = 1.0;
constexpr double kGradientTimeLimitS = 10.0;
constexpr double kToyMdpTimeLimitS = 30.0;
constexpr double kSweepPerAlgoLimitS = 900.0;  // 15 min per algorithm
constexpr int kSwitchWithinPeriods = 2;        // reaction deadline (criterion 6)
constexpr long kFuzzTtis = 100000;             // conservation fuzz horizon

struct Outcome {
  bool pass = true;
  std::string detail;
};

// The benchmark scenario every KPI criterion runs on.  The macro radius and
// queue depth are pinned so the macro cell is a scarce resource: wide enough
// that misrouted heavy flows overflow their queues, shallow enough that the
// overflow shows up inside a report window.  With the stock 3.2 km /
// 1000-packet defaults the macro absorbs every placement mistake and all
// policies tie.
ExperimentConfig acceptance_config() {
  ExperimentConfig cfg;
  cfg.topology.ue_count = 10;
  cfg.topology.gnb_count = 2;
  cfg.topology.cell_radius_m = 5300.0;
  cfg.timing.total_ttis = 50000;
  cfg.timing.queue_capacity_packets = 26;
  cfg.sweep.loads_bps = {5e6, 6e6, 7e6, 8e6, 9e6, 10e6};
  cfg.sweep.seeds = {1, 2, 3};
  cfg.sweep.algorithms = {Algorithm::kDqn, Algorithm::kQLearning,
                          Algorithm::kHeuristic};
  return cfg;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// --- criterion 1: closed-form equations -------------------------------------

Outcome check_equations() {
  Outcome out;
  auto chk = [&](const char* name, double got, double want) {
    const double scale = std::max({1.0, std::abs(got), std::abs(want)});
    if (!(std::abs(got - want) <= kEqRelTol * scale)) {
      out.pass = false;
      std::ostringstream os;
      os << "\n    " << name << ": got " << got << ", want " << want;
      out.detail += os.str();
    }
  };

  chk("macro path loss", path_loss_db(Rat::kLte, 500.0, 2.1e9),
      128.1 + 37.6 * std::log10(0.5));
  chk("small-cell path loss", path_loss_db(Rat::kNr, 150.0, 3.5e9),
      32.4 + 21.0 * std::log10(150.0) + 20.0 * std::log10(3.5));
  chk("distance clamp", path_loss_db(Rat::kNr, 0.2, 3.5e9),
      32.4 + 20.0 * std::log10(3.5));
  chk("dbm to watts", dbm_to_watts(46.0), std::pow(10.0, 1.6));
  chk("db round trip", linear_to_db(db_to_linear(-7.3)), -7.3);
  chk("macro rbg count",
      rbg_count_for_bandwidth(10e6, 180e3, 0.9), 50.0);
  chk("small-cell rbg count",
      rbg_count_for_bandwidth(20e6, 180e3, 0.9), 100.0);

  // Two co-RAT cells, two RBGs, hand-set gains: SINR and capacity by hand.
  BaseStation serving;
  serving.id = 0;
  serving.rat = Rat::kNr;
  serving.tx_power_w = 4.0;
  serving.rbg_count = 2;
  BaseStation other = serving;
  other.id = 1;
  other.tx_power_w = 2.0;
  const std::vector<BaseStation> bss = {serving, other};
  const double noise_hz = 4e-21;
  ChannelRealization chan;
  chan.reset(bss, 1, noise_hz);
  chan.gain(0, 0, 0) = 1e-9;
  chan.gain(0, 0, 1) = 2e-9;
  chan.gain(1, 0, 0) = 3e-10;
  chan.gain(1, 0, 1) = 1e-10;
  RbgAllocation other_alloc;
  other_alloc.reset(1, 2);
  other_alloc.owner = {0, -1};  // RBG 0 busy, RBG 1 idle
  const std::vector<InterfererRef> refs = {{&bss[1], &other_alloc}};
  const double noise_rbg = noise_hz * serving.rbg_bandwidth_hz;
  const double sinr0 = (2.0 * 1e-9) / (noise_rbg + 1.0 * 3e-10);
  const double sinr1 = (2.0 * 2e-9) / noise_rbg;
  chk("sinr with interferer", compute_sinr(0, 0, bss[0], refs, chan), sinr0);
  chk("sinr noise limited", compute_sinr(1, 0, bss[0], refs, chan), sinr1);
  RbgAllocation own;
  own.reset(0, 2);
  own.owner = {0, 0};
  chk("link capacity", link_capacity(0, bss[0], own, refs, chan),
      180e3 * (std::log2(1.0 + sinr0) + std::log2(1.0 + sinr1)));

  chk("delay ratio", delay_ratio(0.08, 0.1, 2.0), 1.25);
  chk("delay ratio cap", delay_ratio(0.01, 0.1, 2.0), 2.0);
  chk("delay ratio idle window", delay_ratio(0.0, 0.1, 2.0), 2.0);
  chk("throughput ratio", throughput_ratio(3e6, 5e6, 2.0), 0.6);
  chk("throughput ratio cap", throughput_ratio(20e6, 5e6, 2.0), 2.0);
  chk("steering metric", steering_metric(1.25, 0.6, QosWeights{0.5, 0.5}),
      0.925);
  chk("reward squash", reward_from_metric(0.925),
      1.0 / (1.0 + std::exp(-0.925)));
  chk("air time", transmission_delay(12000.0, 1e6), 0.012);
  chk("total delay", packet_total_delay(3, 7, 1e-3, 0.002), 0.006);

  QNetwork target({3, 2});
  target.biases(0) = {0.5, -0.2};
  const std::vector<double> s = {0.1, 0.2, 0.3};
  chk("td target", td_target(0.7, s, false, target, 0.9), 0.7 + 0.9 * 0.5);
  chk("td target terminal", td_target(0.7, s, true, target, 0.9), 0.7);
  return out;
}

// --- criterion 2: analytic gradient vs finite differences --------------------

// Forward pass that reports the smallest |preactivation| across hidden
// units; cases too close to a ReLU kink are rejected so the central
// difference stays on one linear piece.
double min_abs_hidden_pre(const QNetwork& net, const std::vector<double>& in) {
  std::vector<double> x = in;
  double min_abs = std::numeric_limits<double>::infinity();
  for (int l = 0; l < net.layer_count(); ++l) {
    const auto& w = net.weights(l);
    const auto& b = net.biases(l);
    const std::size_t out_dim = b.size();
    const std::size_t in_dim = x.size();
    std::vector<double> y(out_dim);
    for (std::size_t o = 0; o < out_dim; ++o) {
      double acc = b[o];
      for (std::size_t i = 0; i < in_dim; ++i) acc += w[o * in_dim + i] * x[i];
      y[o] = acc;
    }
    if (l + 1 < net.layer_count()) {
      for (double v : y) min_abs = std::min(min_abs, std::abs(v));
      for (double& v : y) v = std::max(0.0, v);
    }
    x = std::move(y);
  }
  return min_abs;
}

Outcome check_gradient() {
  Outcome out;
  const std::vector<std::vector<int>> shapes = {
      {2, 4, 2}, {3, 6, 4, 2}, {7, 32, 32, 2}, {4, 5, 3}, {5, 8, 8, 3}};
  constexpr int kTrials = 20;
  constexpr int kBatch = 4;
  constexpr double kGamma = 0.9;
  std::mt19937_64 rng(0x9ade5u);
  auto jitter = [&](QNetwork& net) {
    net.init_weights(rng);
    for (int l = 0; l < net.layer_count(); ++l)
      for (double& b : net.biases(l)) b = uniform_unit(rng) * 0.6 - 0.3;
  };
  double worst = 0.0;
  for (int trial = 0; trial < kTrials; ++trial) {
    const auto& shape = shapes[static_cast<std::size_t>(trial) % shapes.size()];
    const int in_dim = shape.front();
    const int actions = shape.back();
    QNetwork net(shape);
    QNetwork target(shape);
    std::vector<Experience> batch;
    bool smooth = false;
    for (int attempt = 0; attempt < 200 && !smooth; ++attempt) {
      jitter(net);
      jitter(target);
      batch.clear();
      for (int k = 0; k < kBatch; ++k) {
        Experience e;
        for (int i = 0; i < in_dim; ++i)
          e.state.push_back(uniform_unit(rng) * 2.0 - 1.0);
        for (int i = 0; i < in_dim; ++i)
          e.next_state.push_back(uniform_unit(rng) * 2.0 - 1.0);
        e.action = static_cast<int>(uniform_index(
            rng, static_cast<std::uint64_t>(actions)));
        e.reward = uniform_unit(rng) * 2.0 - 1.0;
        e.terminal = uniform_index(rng, 4) == 0;
        batch.push_back(std::move(e));
      }
      smooth = true;
      for (const Experience& e : batch)
        smooth = smooth && min_abs_hidden_pre(net, e.state) >= 1e-4;
    }
    if (!smooth) {
      out.pass = false;
      out.detail += "\n    could not draw a kink-free case";
      return out;
    }
    std::vector<const Experience*> ptrs;
    for (const Experience& e : batch) ptrs.push_back(&e);

    QNetwork stepped = net;  // lr = 1: weight delta IS the gradient
    train_step(stepped, target, ptrs, kGamma, 1.0);

    for (int l = 0; l < net.layer_count(); ++l) {
      for (int which = 0; which < 2; ++which) {
        const std::size_t n =
            which == 0 ? net.weights(l).size() : net.biases(l).size();
        for (std::size_t i = 0; i < n; ++i) {
          auto param = [&](QNetwork& q) -> double& {
            return which == 0 ? q.weights(l)[i] : q.biases(l)[i];
          };
          const double analytic = param(net) - param(stepped);
          const double h = 1e-5 * std::max(1.0, std::abs(param(net)));
          QNetwork probe = net;
          param(probe) += h;
          const double up = batch_loss(probe, target, ptrs, kGamma);
          param(probe) -= 2.0 * h;
          const double down = batch_loss(probe, target, ptrs, kGamma);
          const double fd = (up - down) / (2.0 * h);
          const double rel = std::abs(fd - analytic) /
                             std::max({std::abs(fd), std::abs(analytic), 1e-8});
          worst = std::max(worst, rel);
        }
      }
    }
  }
  if (worst >= kGradRelTol) {
    out.pass = false;
    std::ostringstream os;
    os << "\n    worst relative error " << worst << " >= " << kGradRelTol;
    out.detail += os.str();
  }
  return out;
}

// --- criterion 3: both learners solve a reference MDP -----------------------

Outcome check_toy_mdp() {
  Outcome out;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    if (!toymdp::tabular_reaches_optimum(seed)) {
      out.pass = false;
      out.detail += "\n    tabular missed the optimum on seed " +
                    std::to_string(seed);
    }
    if (!toymdp::dqn_reaches_optimum(seed)) {
      out.pass = false;
      out.detail +=
          "\n    dqn missed the optimum on seed " + std::to_string(seed);
    }
  }
  return out;
}

// --- criteria 4, 5, 7: the benchmark sweep ----------------------------------

struct SweepRun {
  std::vector<KpiRow> rows;
  std::vector<double> algo_seconds;
  bool any_diverged = false;
};

SweepRun run_benchmark_sweep() {
  const ExperimentConfig cfg = acceptance_config();
  SweepRun run;
  for (Algorithm algo : cfg.sweep.algorithms) {
    const auto t0 = std::chrono::steady_clock::now();
    SweepResult part = run_sweep(cfg, algo);
    run.algo_seconds.push_back(seconds_since(t0));
    run.any_diverged = run.any_diverged || part.any_diverged;
    run.rows.insert(run.rows.end(),
                    std::make_move_iterator(part.rows.begin()),
                    std::make_move_iterator(part.rows.end()));
  }
  sort_rows(run.rows);
  return run;
}

std::string csv_text(const std::vector<KpiRow>& rows) {
  std::string text = csv_header();
  text.push_back('\n');
  for (const KpiRow& row : rows) {
    text += to_csv_row(row);
    text.push_back('\n');
  }
  return text;
}

Outcome check_kpi_margins(const SweepRun& run, const Summary& summary) {
  Outcome out;
  const ExperimentConfig cfg = acceptance_config();
  for (std::size_t a = 0; a < run.algo_seconds.size(); ++a) {
    if (run.algo_seconds[a] > kSweepPerAlgoLimitS) {
      out.pass = false;
      std::ostringstream os;
      os << "\n    " << to_string(cfg.sweep.algorithms[a]) << " sweep took "
         << run.algo_seconds[a] << " s (limit " << kSweepPerAlgoLimitS << ")";
      out.detail += os.str();
    }
  }
  if (run.any_diverged || summary.diverged_runs != 0) {
    out.pass = false;
    out.detail += "\n    a run diverged";
  }
  const std::size_t expected_deltas =
      2 * cfg.sweep.loads_bps.size();  // two baselines per load
  if (summary.deltas.size() != expected_deltas) {
    out.pass = false;
    out.detail += "\n    incomplete delta grid";
    return out;
  }
  // DQN must be strictly better on both KPIs at every load; the magnitude
  // bars apply to the mean delta across the grid, per baseline.
  std::map<Algorithm, std::array<double, 2>> delta_sums;
  std::map<Algorithm, int> delta_counts;
  for (const SummaryDelta& d : summary.deltas) {
    if (!(d.throughput_delta_pct > 0.0) || !(d.delay_delta_pct < 0.0)) {
      out.pass = false;
      std::ostringstream os;
      os.precision(3);
      os << "\n    not ahead at load " << d.load_bps / 1e6 << " Mb/s vs "
         << to_string(d.baseline) << ": throughput "
         << (d.throughput_delta_pct >= 0 ? "+" : "") << d.throughput_delta_pct
         << "%, delay " << (d.delay_delta_pct >= 0 ? "+" : "")
         << d.delay_delta_pct << "%";
      out.detail += os.str();
    }
    delta_sums[d.baseline][0] += d.throughput_delta_pct;
    delta_sums[d.baseline][1] += d.delay_delta_pct;
    ++delta_counts[d.baseline];
  }
  for (const auto& [baseline, sums] : delta_sums) {
    const double n = delta_counts[baseline];
    const double tp_mean = sums[0] / n;
    const double delay_mean = sums[1] / n;
    const bool ok =
        tp_mean >= kMinThroughputGainPct && delay_mean <= kMaxDelayDeltaPct;
    if (!ok) out.pass = false;
    std::ostringstream os;
    os.precision(3);
    os << "\n    vs " << to_string(baseline) << " over the load grid: throughput "
       << (tp_mean >= 0 ? "+" : "") << tp_mean << "% (need >= +"
       << kMinThroughputGainPct << "%), delay " << (delay_mean >= 0 ? "+" : "")
       << delay_mean << "% (need <= " << kMaxDelayDeltaPct << "%)";
    out.detail += os.str();
  }
  return out;
}

Outcome check_byte_steering(const Summary& summary) {
  Outcome out;
  std::size_t dqn_idx = summary.byte_algorithms.size();
  for (std::size_t i = 0; i < summary.byte_algorithms.size(); ++i)
    if (summary.byte_algorithms[i] == Algorithm::kDqn) dqn_idx = i;
  if (dqn_idx == summary.byte_algorithms.size()) {
    out.pass = false;
    out.detail = "\n    no dqn rows in the sweep";
    return out;
  }
  const auto& bytes = summary.class_rat_bytes[dqn_idx];
  struct Want {
    TrafficClass cls;
    int rat;  // 0 = eNB, 1 = gNB
    const char* label;
  };
  const Want wants[] = {{TrafficClass::kVoice, 0, "voice on the macro cell"},
                        {TrafficClass::kVideo, 1, "video on the small cells"},
                        {TrafficClass::kGaming, 1, "gaming on the small cells"}};
  for (const Want& w : wants) {
    const auto k = static_cast<std::size_t>(w.cls);
    const double total = bytes[k][0] + bytes[k][1];
    const double share =
        total > 0.0 ? bytes[k][static_cast<std::size_t>(w.rat)] / total : 0.0;
    if (!(share > kMajorityShare)) {
      out.pass = false;
      std::ostringstream os;
      os.precision(3);
      os << "\n    " << w.label << ": share " << share * 100.0 << "% <= 50%";
      out.detail += os.str();
    }
  }
  return out;
}

// --- criterion 6: frozen policy reroutes around a queue surge ----------------

Outcome check_overload_reaction() {
  Outcome out;
  ExperimentConfig cfg = acceptance_config();
  cfg.timing.total_ttis = 40000;
  // The surge must cross the 50-packet steering cutoff and still be standing
  // at the next decision instant, which the benchmark's 26-packet queues make
  // impossible; this scripted scenario keeps the stock depth instead.
  cfg.timing.queue_capacity_packets = 1000;
  Simulation sim(cfg, Algorithm::kDqn, 1, 7e6);
  sim.run_ttis(30000);
  sim.freeze_policy();
  // Land just after a decision instant so the surge is visible before the
  // next one.
  while (sim.tti() % cfg.timing.decision_period_ttis != 1) sim.step_tti();
  sim.set_decision_log(true);

  // Surge the RAT currently carrying the most flows.
  int on_lte = 0;
  for (const auto& f : sim.flows())
    if (f.steering == SteeringAction::kLte) ++on_lte;
  const bool surge_lte =
      on_lte * 2 >= static_cast<int>(sim.flows().size());
  const SteeringAction crowded =
      surge_lte ? SteeringAction::kLte : SteeringAction::kNr;
  for (const auto& ue : sim.user_equipment())
    sim.inject_packets(surge_lte ? ue.enb_id : ue.gnb_id, ue.id,
                       TrafficClass::kVideo, 400);

  const long surge_tti = sim.tti();
  const long deadline =
      surge_tti + kSwitchWithinPeriods * cfg.timing.decision_period_ttis;
  sim.run_ttis(deadline - sim.tti() + 1);

  int switches = 0;
  for (const DecisionRecord& d : sim.decision_log())
    if (d.tti > surge_tti && d.tti <= deadline && d.previous == crowded &&
        d.action != d.previous)
      ++switches;
  if (switches < 1) {
    out.pass = false;
    std::ostringstream os;
    os << "\n    no flow left the " << (surge_lte ? "macro" : "small")
       << " cell within " << kSwitchWithinPeriods << " decision periods ("
       << on_lte << "/" << sim.flows().size() << " flows were on the macro)";
    out.detail += os.str();
  }
  return out;
}

// --- criterion 8: conservation and replay bounds under fuzz ------------------

Outcome check_fuzz() {
  Outcome out;
  long ttis_done = 0;
  struct Case {
    Algorithm algo;
    double load;
    int queue_cap;
    std::uint64_t seed;
  };
  const Case cases[] = {
      {Algorithm::kDqn, 40e6, 80, 101},
      {Algorithm::kQLearning, 40e6, 120, 202},
      {Algorithm::kHeuristic, 55e6, 60, 303},
      {Algorithm::kDqn, 6e6, 1000, 404},
  };
  for (const Case& c : cases) {
    ExperimentConfig cfg;
    cfg.topology.ue_count = 4;
    cfg.topology.gnb_count = 2;
    cfg.timing.total_ttis = kFuzzTtis / 4;
    cfg.timing.queue_capacity_packets = c.queue_cap;
    Simulation sim(cfg, c.algo, c.seed, c.load);
    while (sim.tti() < cfg.timing.total_ttis && !sim.diverged()) {
      sim.step_tti();
      ++ttis_done;
      const RunTotals t = sim.totals();
      if (t.generated != t.delivered + t.dropped + t.queued) {
        out.pass = false;
        std::ostringstream os;
        os << "\n    conservation broke: " << to_string(c.algo) << " seed "
           << c.seed << " tti " << sim.tti() << " (" << t.generated << " != "
           << t.delivered << " + " << t.dropped << " + " << t.queued << ")";
        out.detail += os.str();
        break;
      }
    }
    if (sim.diverged()) {
      out.pass = false;
      out.detail += "\n    unexpected divergence in the fuzz run";
    }
  }
  if (ttis_done < kFuzzTtis) {
    // A broken case above already failed; otherwise the horizon math is off.
    if (out.pass) {
      out.pass = false;
      out.detail += "\n    fuzz horizon not reached";
    }
  }

  // Replay ring vs a plain deque reference model, 100k pushes.
  constexpr std::size_t kCap = 1000;
  ReplayMemory replay(kCap);
  std::deque<double> model;
  std::mt19937_64 rng(0xF0220u);
  for (long i = 0; i < 100000 && out.pass; ++i) {
    Experience e;
    e.state = {0.0};
    e.next_state = {0.0};
    e.reward = static_cast<double>(i);
    replay.push(std::move(e));
    model.push_back(static_cast<double>(i));
    if (model.size() > kCap) model.pop_front();
    if (replay.size() != model.size()) {
      out.pass = false;
      out.detail += "\n    replay size drifted from the reference model";
      break;
    }
    if (i % 977 == 0) {
      if (replay.at(0).reward != model.front() ||
          replay.at(replay.size() - 1).reward != model.back()) {
        out.pass = false;
        out.detail += "\n    replay eviction order broke at push " +
                      std::to_string(i);
      }
      auto batch = replay.sample(32, rng);
      if (replay.size() >= 32) {
        if (!batch) {
          out.pass = false;
          out.detail += "\n    sample refused with a full buffer";
        } else {
          std::vector<double> tags;
          for (const Experience* p : *batch) tags.push_back(p->reward);
          std::sort(tags.begin(), tags.end());
          if (std::adjacent_find(tags.begin(), tags.end()) != tags.end()) {
            out.pass = false;
            out.detail += "\n    sample returned a duplicate experience";
          }
          for (double tag : tags)
            if (tag < model.front() || tag > model.back()) {
              out.pass = false;
              out.detail += "\n    sample returned an evicted experience";
            }
        }
      }
    }
  }
  return out;
}

}  // namespace
}  // namespace ratsteer

int main() {
  using namespace ratsteer;
  std::setvbuf(stdout, nullptr, _IONBF, 0);

  struct Line {
    std::string name;
    Outcome outcome;
    double seconds = 0.0;
  };
  std::vector<Line> lines;
  auto record = [&](const std::string& name, Outcome (*fn)(),
                    double time_limit_s) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o = fn();
    const double dt = seconds_since(t0);
    if (time_limit_s > 0.0 && dt > time_limit_s) {
      o.pass = false;
      std::ostringstream os;
      os << "\n    took " << dt << " s (limit " << time_limit_s << " s)";
      o.detail += os.str();
    }
    std::printf("[%s] %s (%.1f s)%s\n", o.pass ? "PASS" : "FAIL", name.c_str(),
                dt, o.detail.c_str());
    lines.push_back({name, std::move(o), dt});
  };

  record("1. closed-form channel, queueing and reward equations",
         check_equations, kEquationTimeLimitS);
  record("2. training gradient matches finite differences", check_gradient,
         kGradientTimeLimitS);
  record("3. both learners solve a reference mdp", check_toy_mdp,
         kToyMdpTimeLimitS);

  // Criteria 4, 5 and 7 share one benchmark sweep.
  const auto sweep_t0 = std::chrono::steady_clock::now();
  SweepRun first = run_benchmark_sweep();
  const double sweep_s = seconds_since(sweep_t0);
  Summary summary;
  bool summarized = false;
  std::string summarize_error;
  try {
    summary = summarize(first.rows);
    summarized = true;
  } catch (const std::exception& e) {
    summarize_error = e.what();
  }

  {
    Outcome o;
    if (!summarized) {
      o.pass = false;
      o.detail = "\n    summarize failed: " + summarize_error;
    } else {
      o = check_kpi_margins(first, summary);
    }
    std::printf("[%s] %s (%.1f s)%s\n", o.pass ? "PASS" : "FAIL",
                "4. dqn beats both baselines at every load", sweep_s,
                o.detail.c_str());
    lines.push_back({"4", std::move(o), sweep_s});
  }
  {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    if (!summarized) {
      o.pass = false;
      o.detail = "\n    summarize failed: " + summarize_error;
    } else {
      o = check_byte_steering(summary);
    }
    std::printf("[%s] %s (%.1f s)%s\n", o.pass ? "PASS" : "FAIL",
                "5. traffic classes steer to their preferred rat",
                seconds_since(t0), o.detail.c_str());
    lines.push_back({"5", std::move(o), 0.0});
  }

  record("6. frozen policy reroutes around a queue surge",
         check_overload_reaction, 0.0);

  {
    const auto t0 = std::chrono::steady_clock::now();
    SweepRun second = run_benchmark_sweep();
    Outcome o;
    if (csv_text(first.rows) != csv_text(second.rows)) {
      o.pass = false;
      o.detail = "\n    repeated sweep produced different bytes";
    }
    std::printf("[%s] %s (%.1f s)%s\n", o.pass ? "PASS" : "FAIL",
                "7. sweep output is byte-reproducible", seconds_since(t0),
                o.detail.c_str());
    lines.push_back({"7", std::move(o), 0.0});
  }

  record("8. packet conservation and replay bounds under fuzz", check_fuzz,
         0.0);

  int passed = 0;
  for (const Line& l : lines)
    if (l.outcome.pass) ++passed;
  std::printf("acceptance: %d/%zu passed\n", passed, lines.size());
  return passed == static_cast<int>(lines.size()) ? 0 : 1;
}
