#include "ratsteer/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ratsteer {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ConfigError("config: " + path + ": " + msg);
}

// One JSON object level: fields are fetched by name and remembered, then
// check_unknown() rejects anything that was never asked for.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_, "expected an object");
  }

  const json* find(const char* key) {
    seen_.push_back(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &it.value();
  }

  void get(const char* key, double& out) {
    if (const json* v = find(key)) out = number(*v, key);
  }
  void get(const char* key, bool& out) {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) fail(path_, std::string(key) + ": expected bool");
      out = v->get<bool>();
    }
  }
  void get(const char* key, int& out) {
    if (const json* v = find(key)) out = static_cast<int>(integer(*v, key));
  }
  void get(const char* key, long& out) {
    if (const json* v = find(key)) out = static_cast<long>(integer(*v, key));
  }
  void get(const char* key, std::size_t& out) {
    if (const json* v = find(key)) {
      const std::int64_t n = integer(*v, key);
      if (n < 0) fail(path_, std::string(key) + ": expected non-negative");
      out = static_cast<std::size_t>(n);
    }
  }

  std::optional<Section> section(const char* key) {
    if (const json* v = find(key))
      return Section(*v, path_ + "." + key);
    return std::nullopt;
  }

  void check_unknown() const {
    for (const auto& item : j_.items()) {
      if (std::find(seen_.begin(), seen_.end(), item.key()) == seen_.end())
        fail(path_, "unknown key '" + item.key() + "'");
    }
  }

  double number(const json& v, const char* key) const {
    if (!v.is_number()) fail(path_, std::string(key) + ": expected a number");
    return v.get<double>();
  }
  std::int64_t integer(const json& v, const char* key) const {
    if (!v.is_number_integer())
      fail(path_, std::string(key) + ": expected an integer");
    return v.get<std::int64_t>();
  }

  const json& raw() const { return j_; }
  const std::string& path() const { return path_; }

 private:
  const json& j_;
  std::string path_;
  std::vector<std::string> seen_;
};

std::vector<double> number_array(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) fail(path, "expected an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

void parse_traffic_class(Section& parent, const char* name,
                         TrafficClassSpec& spec) {
  if (auto s = parent.section(name)) {
    s->get("packet_bytes", spec.packet_bytes);
    s->get("throughput_qos_bps", spec.throughput_qos_bps);
    s->get("delay_qos_s", spec.delay_qos_s);
    s->get("mix_fraction", spec.mix_fraction);
    s->check_unknown();
  }
}

void parse_qos_weights(Section& parent, const char* name, QosWeights& w) {
  if (auto s = parent.section(name)) {
    s->get("delay_weight", w.w1);
    s->get("throughput_weight", w.w2);
    s->check_unknown();
  }
}

void parse_epsilon(Section& parent, EpsilonSchedule& eps) {
  if (auto s = parent.section("epsilon")) {
    s->get("start", eps.start);
    s->get("end", eps.end);
    s->get("decay_steps", eps.decay_steps);
    s->check_unknown();
  }
}

}  // namespace

std::string_view to_string(Algorithm algo) {
  switch (algo) {
    case Algorithm::kDqn: return "dqn";
    case Algorithm::kQLearning: return "qlearning";
    case Algorithm::kHeuristic: return "heuristic";
  }
  return "unknown";
}

std::optional<Algorithm> algorithm_from_string(std::string_view name) {
  if (name == "dqn") return Algorithm::kDqn;
  if (name == "qlearning") return Algorithm::kQLearning;
  if (name == "heuristic") return Algorithm::kHeuristic;
  return std::nullopt;
}

ExperimentConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }

  ExperimentConfig cfg;
  Section top(root, "$");

  if (auto s = top.section("topology")) {
    auto& t = cfg.topology;
    s->get("ue_count", t.ue_count);
    s->get("gnb_count", t.gnb_count);
    s->get("cell_radius_m", t.cell_radius_m);
    s->get("gnb_ring_radius_m", t.gnb_ring_radius_m);
    s->get("enb_tx_power_w", t.enb_tx_power_w);
    s->get("gnb_tx_power_w", t.gnb_tx_power_w);
    s->get("enb_bandwidth_hz", t.enb_bandwidth_hz);
    s->get("gnb_bandwidth_hz", t.gnb_bandwidth_hz);
    s->get("macro_carrier_hz", t.macro_carrier_hz);
    s->get("small_carrier_hz", t.small_carrier_hz);
    s->get("swap_carriers", t.swap_carriers);
    s->get("rbg_bandwidth_hz", t.rbg_bandwidth_hz);
    s->get("usable_bandwidth_fraction", t.usable_bandwidth_fraction);
    s->check_unknown();
  }

  if (auto s = top.section("channel")) {
    auto& c = cfg.channel;
    s->get("shadowing_sigma_db", c.shadowing_sigma_db);
    s->get("fast_fading", c.fast_fading);
    s->get("noise_dbm_per_hz", c.noise_dbm_per_hz);
    s->get("noise_figure_db", c.noise_figure_db);
    s->get("min_distance_m", c.min_distance_m);
    s->check_unknown();
  }

  if (auto s = top.section("timing")) {
    auto& t = cfg.timing;
    s->get("tti_s", t.tti_s);
    s->get("total_ttis", t.total_ttis);
    s->get("decision_period_ttis", t.decision_period_ttis);
    s->get("reward_window_ttis", t.reward_window_ttis);
    s->get("report_window_ttis", t.report_window_ttis);
    s->get("queue_capacity_packets", t.queue_capacity_packets);
    s->check_unknown();
  }

  if (auto s = top.section("traffic")) {
    parse_traffic_class(*s, "voice", cfg.traffic[0]);
    parse_traffic_class(*s, "video", cfg.traffic[1]);
    parse_traffic_class(*s, "gaming", cfg.traffic[2]);
    s->check_unknown();
  }

  if (auto s = top.section("qos")) {
    s->get("ratio_cap", cfg.qos.ratio_cap);
    if (auto w = s->section("class_weights")) {
      parse_qos_weights(*w, "voice", cfg.qos.class_weights[0]);
      parse_qos_weights(*w, "video", cfg.qos.class_weights[1]);
      parse_qos_weights(*w, "gaming", cfg.qos.class_weights[2]);
      w->check_unknown();
    }
    s->check_unknown();
  }

  if (auto s = top.section("state")) {
    s->get("sinr_min_db", cfg.encoder.sinr_min_db);
    s->get("sinr_max_db", cfg.encoder.sinr_max_db);
    s->get("queue_scale_packets", cfg.encoder.queue_scale_packets);
    s->check_unknown();
  }

  if (auto s = top.section("agent")) {
    auto& a = cfg.agent;
    if (const json* v = s->find("hidden_layers")) {
      const auto nums = number_array(*v, s->path() + ".hidden_layers");
      a.hidden_layers.clear();
      for (double n : nums) a.hidden_layers.push_back(static_cast<int>(n));
    }
    s->get("gamma", a.gamma);
    s->get("learning_rate", a.learning_rate);
    s->get("minibatch_size", a.minibatch_size);
    s->get("replay_capacity", a.replay_capacity);
    s->get("warmup_experiences", a.warmup_experiences);
    s->get("target_sync_period", a.target_sync_period);
    parse_epsilon(*s, a.epsilon);
    s->check_unknown();
  }

  if (auto s = top.section("tabular")) {
    auto& t = cfg.tabular;
    s->get("alpha", t.alpha);
    s->get("gamma", t.gamma);
    parse_epsilon(*s, t.epsilon);
    if (const json* v = s->find("sinr_edges_db")) {
      const auto nums = number_array(*v, s->path() + ".sinr_edges_db");
      if (nums.size() != t.buckets.sinr_edges_db.size())
        fail(s->path(), "sinr_edges_db: expected 3 edges");
      std::copy(nums.begin(), nums.end(), t.buckets.sinr_edges_db.begin());
    }
    if (const json* v = s->find("queue_edges_packets")) {
      const auto nums = number_array(*v, s->path() + ".queue_edges_packets");
      if (nums.size() != t.buckets.queue_edges_packets.size())
        fail(s->path(), "queue_edges_packets: expected 2 edges");
      std::copy(nums.begin(), nums.end(),
                t.buckets.queue_edges_packets.begin());
    }
    s->check_unknown();
  }

  if (auto s = top.section("heuristic")) {
    auto& h = cfg.heuristic_weights;
    s->get("alpha", h.alpha);
    s->get("beta", h.beta);
    s->get("gamma", h.gamma);
    s->get("delta", h.delta);
    s->get("queue_cutoff_packets", cfg.heuristic_cutoffs.queue_cutoff_packets);
    s->get("sinr_cutoff_db", cfg.heuristic_cutoffs.sinr_cutoff_db);
    s->check_unknown();
  }

  if (auto s = top.section("sweep")) {
    if (const json* v = s->find("loads_bps"))
      cfg.sweep.loads_bps = number_array(*v, s->path() + ".loads_bps");
    if (const json* v = s->find("seeds")) {
      if (!v->is_array()) fail(s->path(), "seeds: expected an array");
      cfg.sweep.seeds.clear();
      for (const auto& e : *v) {
        if (!e.is_number_integer() || e.get<std::int64_t>() < 0)
          fail(s->path(), "seeds: expected non-negative integers");
        cfg.sweep.seeds.push_back(e.get<std::uint64_t>());
      }
    }
    if (const json* v = s->find("algorithms")) {
      if (!v->is_array()) fail(s->path(), "algorithms: expected an array");
      cfg.sweep.algorithms.clear();
      for (const auto& e : *v) {
        if (!e.is_string())
          fail(s->path(), "algorithms: expected algorithm names");
        const auto algo = algorithm_from_string(e.get<std::string>());
        if (!algo)
          fail(s->path(), "algorithms: unknown algorithm '" +
                              e.get<std::string>() + "'");
        cfg.sweep.algorithms.push_back(*algo);
      }
    }
    s->check_unknown();
  }

  top.check_unknown();
  validate_config(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
  json root;
  {
    const auto& t = cfg.topology;
    json j;
    j["ue_count"] = t.ue_count;
    j["gnb_count"] = t.gnb_count;
    j["cell_radius_m"] = t.cell_radius_m;
    j["gnb_ring_radius_m"] = t.gnb_ring_radius_m;
    j["enb_tx_power_w"] = t.enb_tx_power_w;
    j["gnb_tx_power_w"] = t.gnb_tx_power_w;
    j["enb_bandwidth_hz"] = t.enb_bandwidth_hz;
    j["gnb_bandwidth_hz"] = t.gnb_bandwidth_hz;
    j["macro_carrier_hz"] = t.macro_carrier_hz;
    j["small_carrier_hz"] = t.small_carrier_hz;
    j["swap_carriers"] = t.swap_carriers;
    j["rbg_bandwidth_hz"] = t.rbg_bandwidth_hz;
    j["usable_bandwidth_fraction"] = t.usable_bandwidth_fraction;
    root["topology"] = std::move(j);
  }
  {
    const auto& c = cfg.channel;
    json j;
    j["shadowing_sigma_db"] = c.shadowing_sigma_db;
    j["fast_fading"] = c.fast_fading;
    j["noise_dbm_per_hz"] = c.noise_dbm_per_hz;
    j["noise_figure_db"] = c.noise_figure_db;
    j["min_distance_m"] = c.min_distance_m;
    root["channel"] = std::move(j);
  }
  {
    const auto& t = cfg.timing;
    json j;
    j["tti_s"] = t.tti_s;
    j["total_ttis"] = t.total_ttis;
    j["decision_period_ttis"] = t.decision_period_ttis;
    j["reward_window_ttis"] = t.reward_window_ttis;
    j["report_window_ttis"] = t.report_window_ttis;
    j["queue_capacity_packets"] = t.queue_capacity_packets;
    root["timing"] = std::move(j);
  }
  {
    json j;
    const char* names[] = {"voice", "video", "gaming"};
    for (int k = 0; k < kTrafficClassCount; ++k) {
      const auto& spec = cfg.traffic[static_cast<std::size_t>(k)];
      json c;
      c["packet_bytes"] = spec.packet_bytes;
      c["throughput_qos_bps"] = spec.throughput_qos_bps;
      c["delay_qos_s"] = spec.delay_qos_s;
      c["mix_fraction"] = spec.mix_fraction;
      j[names[k]] = std::move(c);
    }
    root["traffic"] = std::move(j);
  }
  {
    json j;
    j["ratio_cap"] = cfg.qos.ratio_cap;
    json w;
    const char* names[] = {"voice", "video", "gaming"};
    for (int k = 0; k < kTrafficClassCount; ++k) {
      json c;
      c["delay_weight"] = cfg.qos.class_weights[static_cast<std::size_t>(k)].w1;
      c["throughput_weight"] =
          cfg.qos.class_weights[static_cast<std::size_t>(k)].w2;
      w[names[k]] = std::move(c);
    }
    j["class_weights"] = std::move(w);
    root["qos"] = std::move(j);
  }
  {
    json j;
    j["sinr_min_db"] = cfg.encoder.sinr_min_db;
    j["sinr_max_db"] = cfg.encoder.sinr_max_db;
    j["queue_scale_packets"] = cfg.encoder.queue_scale_packets;
    root["state"] = std::move(j);
  }
  {
    const auto& a = cfg.agent;
    json j;
    j["hidden_layers"] = a.hidden_layers;
    j["gamma"] = a.gamma;
    j["learning_rate"] = a.learning_rate;
    j["minibatch_size"] = a.minibatch_size;
    j["replay_capacity"] = a.replay_capacity;
    j["warmup_experiences"] = a.warmup_experiences;
    j["target_sync_period"] = a.target_sync_period;
    json e;
    e["start"] = a.epsilon.start;
    e["end"] = a.epsilon.end;
    e["decay_steps"] = a.epsilon.decay_steps;
    j["epsilon"] = std::move(e);
    root["agent"] = std::move(j);
  }
  {
    const auto& t = cfg.tabular;
    json j;
    j["alpha"] = t.alpha;
    j["gamma"] = t.gamma;
    json e;
    e["start"] = t.epsilon.start;
    e["end"] = t.epsilon.end;
    e["decay_steps"] = t.epsilon.decay_steps;
    j["epsilon"] = std::move(e);
    j["sinr_edges_db"] = t.buckets.sinr_edges_db;
    j["queue_edges_packets"] = t.buckets.queue_edges_packets;
    root["tabular"] = std::move(j);
  }
  {
    json j;
    j["alpha"] = cfg.heuristic_weights.alpha;
    j["beta"] = cfg.heuristic_weights.beta;
    j["gamma"] = cfg.heuristic_weights.gamma;
    j["delta"] = cfg.heuristic_weights.delta;
    j["queue_cutoff_packets"] = cfg.heuristic_cutoffs.queue_cutoff_packets;
    j["sinr_cutoff_db"] = cfg.heuristic_cutoffs.sinr_cutoff_db;
    root["heuristic"] = std::move(j);
  }
  {
    json j;
    j["loads_bps"] = cfg.sweep.loads_bps;
    j["seeds"] = cfg.sweep.seeds;
    std::vector<std::string> algos;
    for (Algorithm a : cfg.sweep.algorithms)
      algos.emplace_back(to_string(a));
    j["algorithms"] = algos;
    root["sweep"] = std::move(j);
  }
  return root.dump(2) + "\n";
}

namespace {

void require(bool ok, const std::string& key, const std::string& msg) {
  if (!ok) throw ConfigError("config: " + key + ": " + msg);
}

}  // namespace

void validate_config(const ExperimentConfig& cfg) {
  const auto& t = cfg.topology;
  require(t.ue_count >= 1, "topology.ue_count", "must be >= 1");
  require(t.gnb_count >= 1, "topology.gnb_count", "must be >= 1");
  require(t.cell_radius_m > 0, "topology.cell_radius_m", "must be > 0");
  require(t.gnb_ring_radius_m > 0, "topology.gnb_ring_radius_m",
          "must be > 0");
  require(t.enb_tx_power_w > 0, "topology.enb_tx_power_w", "must be > 0");
  require(t.gnb_tx_power_w > 0, "topology.gnb_tx_power_w", "must be > 0");
  require(t.macro_carrier_hz > 0, "topology.macro_carrier_hz", "must be > 0");
  require(t.small_carrier_hz > 0, "topology.small_carrier_hz", "must be > 0");
  require(t.rbg_bandwidth_hz > 0, "topology.rbg_bandwidth_hz", "must be > 0");
  require(t.usable_bandwidth_fraction > 0 && t.usable_bandwidth_fraction <= 1,
          "topology.usable_bandwidth_fraction", "must be in (0, 1]");
  require(rbg_count_for_bandwidth(t.enb_bandwidth_hz, t.rbg_bandwidth_hz,
                                  t.usable_bandwidth_fraction) >= 1,
          "topology.enb_bandwidth_hz", "yields zero resource block groups");
  require(rbg_count_for_bandwidth(t.gnb_bandwidth_hz, t.rbg_bandwidth_hz,
                                  t.usable_bandwidth_fraction) >= 1,
          "topology.gnb_bandwidth_hz", "yields zero resource block groups");

  const auto& c = cfg.channel;
  require(c.shadowing_sigma_db >= 0, "channel.shadowing_sigma_db",
          "must be >= 0");
  require(c.min_distance_m > 0, "channel.min_distance_m", "must be > 0");

  const auto& tm = cfg.timing;
  require(tm.tti_s > 0, "timing.tti_s", "must be > 0");
  require(tm.total_ttis >= 1, "timing.total_ttis", "must be >= 1");
  require(tm.decision_period_ttis >= 1, "timing.decision_period_ttis",
          "must be >= 1");
  require(tm.reward_window_ttis >= 1, "timing.reward_window_ttis",
          "must be >= 1");
  require(tm.report_window_ttis >= 1, "timing.report_window_ttis",
          "must be >= 1");
  require(tm.queue_capacity_packets >= 1, "timing.queue_capacity_packets",
          "must be >= 1");

  double mix_sum = 0.0;
  for (const auto& spec : cfg.traffic) {
    const std::string key =
        std::string("traffic.") + std::string(to_string(spec.cls));
    require(spec.packet_bytes > 0, key + ".packet_bytes", "must be > 0");
    require(spec.throughput_qos_bps > 0, key + ".throughput_qos_bps",
            "must be > 0");
    require(spec.delay_qos_s > 0, key + ".delay_qos_s", "must be > 0");
    require(spec.mix_fraction >= 0, key + ".mix_fraction", "must be >= 0");
    mix_sum += spec.mix_fraction;
  }
  require(std::abs(mix_sum - 1.0) < 1e-9, "traffic",
          "mix fractions must sum to 1");

  require(cfg.qos.ratio_cap > 0, "qos.ratio_cap", "must be > 0");
  for (int k = 0; k < kTrafficClassCount; ++k) {
    const auto& w = cfg.qos.class_weights[static_cast<std::size_t>(k)];
    const std::string key = std::string("qos.class_weights.") +
                            std::string(to_string(static_cast<TrafficClass>(k)));
    require(w.w1 >= 0 && w.w2 >= 0, key, "weights must be >= 0");
    require(std::abs(w.w1 + w.w2 - 1.0) < 1e-9, key,
            "weights must sum to 1");
  }

  require(cfg.encoder.sinr_max_db > cfg.encoder.sinr_min_db,
          "state.sinr_max_db", "must exceed sinr_min_db");
  require(cfg.encoder.queue_scale_packets > 0, "state.queue_scale_packets",
          "must be > 0");

  const auto& a = cfg.agent;
  require(!a.hidden_layers.empty(), "agent.hidden_layers",
          "must have at least one layer");
  for (int h : a.hidden_layers)
    require(h >= 1, "agent.hidden_layers", "layer sizes must be >= 1");
  require(a.gamma >= 0 && a.gamma < 1, "agent.gamma", "must be in [0, 1)");
  require(a.learning_rate > 0, "agent.learning_rate", "must be > 0");
  require(a.minibatch_size >= 1, "agent.minibatch_size", "must be >= 1");
  require(a.replay_capacity >= static_cast<std::size_t>(a.minibatch_size),
          "agent.replay_capacity", "must hold at least one minibatch");
  require(a.target_sync_period >= 1, "agent.target_sync_period",
          "must be >= 1");
  require(a.epsilon.start >= 0 && a.epsilon.start <= 1, "agent.epsilon.start",
          "must be in [0, 1]");
  require(a.epsilon.end >= 0 && a.epsilon.end <= 1, "agent.epsilon.end",
          "must be in [0, 1]");
  require(a.epsilon.decay_steps >= 1, "agent.epsilon.decay_steps",
          "must be >= 1");

  const auto& tb = cfg.tabular;
  require(tb.alpha > 0 && tb.alpha <= 1, "tabular.alpha",
          "must be in (0, 1]");
  require(tb.gamma >= 0 && tb.gamma < 1, "tabular.gamma",
          "must be in [0, 1)");
  require(std::is_sorted(tb.buckets.sinr_edges_db.begin(),
                         tb.buckets.sinr_edges_db.end()) &&
              std::adjacent_find(tb.buckets.sinr_edges_db.begin(),
                                 tb.buckets.sinr_edges_db.end()) ==
                  tb.buckets.sinr_edges_db.end(),
          "tabular.sinr_edges_db", "must be strictly increasing");
  require(std::is_sorted(tb.buckets.queue_edges_packets.begin(),
                         tb.buckets.queue_edges_packets.end()) &&
              std::adjacent_find(tb.buckets.queue_edges_packets.begin(),
                                 tb.buckets.queue_edges_packets.end()) ==
                  tb.buckets.queue_edges_packets.end(),
          "tabular.queue_edges_packets", "must be strictly increasing");
  require(tb.epsilon.start >= 0 && tb.epsilon.start <= 1,
          "tabular.epsilon.start", "must be in [0, 1]");
  require(tb.epsilon.end >= 0 && tb.epsilon.end <= 1, "tabular.epsilon.end",
          "must be in [0, 1]");
  require(tb.epsilon.decay_steps >= 1, "tabular.epsilon.decay_steps",
          "must be >= 1");

  const auto& h = cfg.heuristic_weights;
  require(h.alpha >= 0 && h.beta >= 0 && h.gamma >= 0 && h.delta >= 0,
          "heuristic", "weights must be >= 0");
  require(cfg.heuristic_cutoffs.queue_cutoff_packets >= 0,
          "heuristic.queue_cutoff_packets", "must be >= 0");

  require(!cfg.sweep.loads_bps.empty(), "sweep.loads_bps",
          "must not be empty");
  for (double l : cfg.sweep.loads_bps)
    require(l > 0, "sweep.loads_bps", "loads must be > 0");
  require(!cfg.sweep.seeds.empty(), "sweep.seeds", "must not be empty");
  require(!cfg.sweep.algorithms.empty(), "sweep.algorithms",
          "must not be empty");
}

}  // namespace ratsteer
