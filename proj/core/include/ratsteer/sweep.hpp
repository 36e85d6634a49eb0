#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ratsteer/config.hpp"
#include "ratsteer/metrics.hpp"
#include "ratsteer/sim.hpp"

namespace ratsteer {

struct SweepResult {
  std::vector<KpiRow> rows;  // sorted by (algorithm, load, seed, window)
  bool any_diverged = false;
};

// Runs every (algorithm, load, seed) combination of the configured sweep,
// optionally restricted to one algorithm and/or one seed. Each run is an
// independent episode, so the output is invariant to execution order.
SweepResult run_sweep(const ExperimentConfig& cfg,
                      std::optional<Algorithm> only_algo = std::nullopt,
                      std::optional<std::uint64_t> only_seed = std::nullopt);

}  // namespace ratsteer
