#include "ratsteer/sweep.hpp"

#include <iterator>

namespace ratsteer {

SweepResult run_sweep(const ExperimentConfig& cfg,
                      std::optional<Algorithm> only_algo,
                      std::optional<std::uint64_t> only_seed) {
  SweepResult result;
  for (Algorithm algo : cfg.sweep.algorithms) {
    if (only_algo && algo != *only_algo) continue;
    for (double load : cfg.sweep.loads_bps) {
      for (std::uint64_t seed : cfg.sweep.seeds) {
        if (only_seed && seed != *only_seed) continue;
        RunResult run = run_episode(cfg, algo, seed, load);
        result.any_diverged = result.any_diverged || run.diverged;
        result.rows.insert(result.rows.end(),
                           std::make_move_iterator(run.rows.begin()),
                           std::make_move_iterator(run.rows.end()));
      }
    }
  }
  sort_rows(result.rows);
  return result;
}

}  // namespace ratsteer
