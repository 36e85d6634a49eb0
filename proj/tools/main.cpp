// Command-line front end: run steering experiments, summarize result CSVs,
// validate config files. Exit codes: 0 success, 1 bad config or usage,
// 2 a run diverged.

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ratsteer/config.hpp"
#include "ratsteer/metrics.hpp"
#include "ratsteer/rl.hpp"
#include "ratsteer/sim.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitDiverged = 2;

struct RunOptions {
  std::string config_path;
  std::string algo;
  std::optional<std::uint64_t> seed;
  std::string out_path;
  std::string save_net_path;
};

int cmd_run(const RunOptions& opt) {
  ratsteer::ExperimentConfig cfg = ratsteer::load_config(opt.config_path);

  if (!opt.algo.empty()) {
    const auto algo = ratsteer::algorithm_from_string(opt.algo);
    if (!algo) {
      std::cerr << "error: unknown algorithm '" << opt.algo
                << "' (expected dqn, qlearning or heuristic)\n";
      return kExitConfigError;
    }
    cfg.sweep.algorithms = {*algo};
  }
  if (opt.seed) cfg.sweep.seeds = {*opt.seed};
  if (!opt.save_net_path.empty() &&
      (cfg.sweep.algorithms.size() != 1 ||
       cfg.sweep.algorithms[0] != ratsteer::Algorithm::kDqn)) {
    std::cerr << "error: --save-net requires --algo dqn\n";
    return kExitConfigError;
  }

  std::vector<ratsteer::KpiRow> rows;
  bool any_diverged = false;
  std::optional<ratsteer::QNetwork> last_net;
  for (ratsteer::Algorithm algo : cfg.sweep.algorithms) {
    for (double load : cfg.sweep.loads_bps) {
      for (std::uint64_t seed : cfg.sweep.seeds) {
        ratsteer::Simulation sim(cfg, algo, seed, load);
        sim.run_to_end();
        any_diverged = any_diverged || sim.diverged();
        auto run_rows = sim.take_rows();
        rows.insert(rows.end(), std::make_move_iterator(run_rows.begin()),
                    std::make_move_iterator(run_rows.end()));
        if (!opt.save_net_path.empty() && sim.dqn())
          last_net = sim.dqn()->network();
      }
    }
  }
  ratsteer::sort_rows(rows);

  if (opt.out_path.empty()) {
    std::cout << ratsteer::csv_header() << '\n';
    for (const auto& row : rows) std::cout << ratsteer::to_csv_row(row) << '\n';
  } else {
    ratsteer::write_csv(opt.out_path, rows);
  }

  if (last_net) ratsteer::save_network(*last_net, opt.save_net_path);

  return any_diverged ? kExitDiverged : kExitOk;
}

int cmd_summarize(const std::string& in_path) {
  const auto rows = ratsteer::read_csv(in_path);
  const auto summary = ratsteer::summarize(rows);
  std::cout << ratsteer::format_summary(summary);
  return kExitOk;
}

int cmd_validate(const std::string& config_path) {
  ratsteer::load_config(config_path);
  std::cout << "config ok: " << config_path << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-RAT downlink traffic steering simulator"};
  app.require_subcommand(1);

  RunOptions run_opt;
  std::uint64_t seed_value = 0;
  auto* run = app.add_subcommand(
      "run", "run the configured sweep and emit per-window KPI rows as CSV");
  run->add_option("--config", run_opt.config_path, "experiment config (JSON)")
      ->required();
  run->add_option("--algo", run_opt.algo,
                  "run only this algorithm (dqn|qlearning|heuristic)");
  auto* seed_opt =
      run->add_option("--seed", seed_value, "run only this seed");
  run->add_option("--out", run_opt.out_path,
                  "output CSV path (default: stdout)");
  run->add_option("--save-net", run_opt.save_net_path,
                  "save the last trained network (requires --algo dqn)");

  std::string in_path;
  auto* summ = app.add_subcommand(
      "summarize", "aggregate a KPI CSV into steady-state comparisons");
  summ->add_option("--in", in_path, "KPI CSV produced by run")->required();

  std::string validate_path;
  auto* val = app.add_subcommand("validate", "parse and check a config file");
  val->add_option("--config", validate_path, "experiment config (JSON)")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (run->parsed()) {
      if (!seed_opt->empty()) run_opt.seed = seed_value;
      return cmd_run(run_opt);
    }
    if (summ->parsed()) return cmd_summarize(in_path);
    if (val->parsed()) return cmd_validate(validate_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfigError;
  }
  return kExitConfigError;
}
