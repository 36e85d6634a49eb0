#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ratsteer/config.hpp"
#include "ratsteer/traffic.hpp"

namespace ratsteer {

class MetricsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One report window of one run. `window` indexes consecutive report windows;
// a run that aborts mid-way ends with a single "diverged" row instead of
// further windows.
struct KpiRow {
  Algorithm algorithm = Algorithm::kDqn;
  std::uint64_t seed = 0;
  double load_bps = 0.0;
  long window = 0;
  double throughput_bps = 0.0;   // delivered bits / window duration
  double delay_s = 0.0;          // mean over packets delivered in the window
  std::array<double, kTrafficClassCount> class_delay_s{};
  long packets_delivered = 0;
  long packets_dropped = 0;
  // Delivered bytes by (class, serving RAT); *_enb is LTE, *_gnb is NR.
  std::array<double, kTrafficClassCount> bytes_enb{};
  std::array<double, kTrafficClassCount> bytes_gnb{};
  double mean_reward = 0.0;  // over reward windows closed in this window
  long capacity_violations = 0;
  bool diverged = false;
};

// Stable column order; doubles printed via shortest round-trip formatting so
// identical runs produce byte-identical files.
std::string csv_header();
std::string to_csv_row(const KpiRow& row);
void write_csv(const std::filesystem::path& path,
               std::span<const KpiRow> rows);
std::vector<KpiRow> parse_csv(const std::string& text);
std::vector<KpiRow> read_csv(const std::filesystem::path& path);

// (algorithm, load, seed, window) ascending; the canonical output order.
void sort_rows(std::vector<KpiRow>& rows);

// Steady-state KPIs of one (algorithm, load) cell, pooled across seeds over
// the last quarter of each run's windows.
struct SummaryCell {
  Algorithm algorithm = Algorithm::kDqn;
  double load_bps = 0.0;
  double throughput_bps = 0.0;  // mean over steady windows
  double delay_s = 0.0;         // packet-weighted over steady windows
  long packets_delivered = 0;
  long packets_dropped = 0;
  int runs = 0;
};

// DQN versus one baseline at one load, in percent. Negative delay delta
// means the DQN is faster.
struct SummaryDelta {
  Algorithm baseline = Algorithm::kHeuristic;
  double load_bps = 0.0;
  double throughput_delta_pct = 0.0;
  double delay_delta_pct = 0.0;
};

struct Summary {
  std::vector<SummaryCell> cells;    // every (algorithm, load) seen
  std::vector<SummaryDelta> deltas;  // only when a DQN cell exists
  // Delivered bytes by class and RAT over steady windows, pooled per
  // algorithm: bytes[algo][class][0] = eNB, [1] = gNB.
  std::vector<std::array<std::array<double, 2>, kTrafficClassCount>>
      class_rat_bytes;
  std::vector<Algorithm> byte_algorithms;
  long diverged_runs = 0;
};

// Pools rows into steady-state cells. Throws MetricsError when the rows are
// not a full grid (an algorithm missing some load another one has), since
// deltas would silently compare different conditions.
Summary summarize(std::span<const KpiRow> rows);

std::string format_summary(const Summary& summary);

}  // namespace ratsteer
