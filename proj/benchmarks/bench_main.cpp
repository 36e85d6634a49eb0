#include <benchmark/benchmark.h>

#include <vector>

#include "ratsteer/config.hpp"
#include "ratsteer/metrics.hpp"
#include "ratsteer/net_model.hpp"
#include "ratsteer/rl.hpp"
#include "ratsteer/rng.hpp"
#include "ratsteer/sim.hpp"

namespace {

using namespace ratsteer;

ExperimentConfig bench_config() {
  ExperimentConfig cfg;
  cfg.topology.ue_count = 10;
  cfg.topology.gnb_count = 2;
  cfg.timing.total_ttis = 1 << 26;  // stepped manually, never run to the end
  return cfg;
}

// Fresh per-TTI fading draw for every (bs, ue, rbg) triple: the inner loop
// of the channel model.
void BM_ChannelRealize(benchmark::State& state) {
  const ExperimentConfig cfg = bench_config();
  const Simulation sim(cfg, Algorithm::kHeuristic, 1, 6e6);
  auto shadow_rng = make_rng(1, RngStream::kShadowing);
  const ChannelModel model(sim.base_stations(), sim.user_equipment(),
                           cfg.channel, shadow_rng);
  ChannelRealization chan;
  auto fading_rng = make_rng(1, RngStream::kFading);
  for (auto _ : state) {
    model.realize(sim.base_stations(), chan, fading_rng);
    benchmark::DoNotOptimize(chan.gain(0, 0, 0));
  }
}
BENCHMARK(BM_ChannelRealize);

// One SGD step on a 32-sample minibatch with the production network shape.
void BM_TrainStep(benchmark::State& state) {
  auto rng = make_rng(7, RngStream::kAgentInit);
  QNetwork net({StateEncoder::kDim, 32, 32, kSteeringActionCount});
  net.init_weights(rng);
  QNetwork target = net;
  std::vector<Experience> pool;
  for (int i = 0; i < 32; ++i) {
    Experience e;
    for (int k = 0; k < StateEncoder::kDim; ++k) {
      e.state.push_back(uniform_unit(rng));
      e.next_state.push_back(uniform_unit(rng));
    }
    e.action = static_cast<int>(uniform_index(rng, kSteeringActionCount));
    e.reward = uniform_unit(rng);
    pool.push_back(std::move(e));
  }
  std::vector<const Experience*> batch;
  for (const Experience& e : pool) batch.push_back(&e);
  for (auto _ : state) {
    const double loss = train_step(net, target, batch, 0.9, 1e-3);
    benchmark::DoNotOptimize(loss);
  }
}
BENCHMARK(BM_TrainStep);

// Whole-system cost of one TTI, per steering algorithm.
void BM_StepTti(benchmark::State& state) {
  const auto algo = static_cast<Algorithm>(state.range(0));
  Simulation sim(bench_config(), algo, 1, 6e6);
  for (auto _ : state) {
    sim.step_tti();
    benchmark::DoNotOptimize(sim.tti());
  }
  state.SetLabel(std::string(to_string(algo)));
}
BENCHMARK(BM_StepTti)
    ->Arg(static_cast<int>(Algorithm::kDqn))
    ->Arg(static_cast<int>(Algorithm::kQLearning))
    ->Arg(static_cast<int>(Algorithm::kHeuristic));

// Shortest round-trip double formatting dominates CSV writes.
void BM_CsvRow(benchmark::State& state) {
  KpiRow row;
  row.algorithm = Algorithm::kDqn;
  row.seed = 3;
  row.load_bps = 7.5e6;
  row.window = 41;
  row.throughput_bps = 7.23456789e6;
  row.delay_s = 0.0123456789;
  row.class_delay_s = {0.001, 0.0201, 0.00303};
  row.packets_delivered = 123456;
  row.bytes_enb = {1.5e6, 2.5e6, 3.5e6};
  row.bytes_gnb = {0.5e6, 4.5e6, 6.5e6};
  row.mean_reward = 0.8765;
  for (auto _ : state) {
    const std::string text = to_csv_row(row);
    benchmark::DoNotOptimize(text.data());
  }
}
BENCHMARK(BM_CsvRow);

}  // namespace

BENCHMARK_MAIN();
