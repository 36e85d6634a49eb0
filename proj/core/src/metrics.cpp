#include "ratsteer/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace ratsteer {

namespace {

void append_double(std::string& out, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

void append_long(std::string& out, long v) {
  char buf[24];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

double parse_double(std::string_view field, int line_no) {
  double v = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc{} || res.ptr != field.data() + field.size())
    throw MetricsError("csv line " + std::to_string(line_no) +
                       ": bad number '" + std::string(field) + "'");
  return v;
}

long parse_long(std::string_view field, int line_no) {
  long v = 0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc{} || res.ptr != field.data() + field.size())
    throw MetricsError("csv line " + std::to_string(line_no) +
                       ": bad integer '" + std::string(field) + "'");
  return v;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

constexpr int kColumnCount = 20;

}  // namespace

std::string csv_header() {
  return "algorithm,seed,load_bps,window,throughput_bps,delay_s,"
         "delay_voice_s,delay_video_s,delay_gaming_s,packets_delivered,"
         "packets_dropped,bytes_voice_enb,bytes_voice_gnb,bytes_video_enb,"
         "bytes_video_gnb,bytes_gaming_enb,bytes_gaming_gnb,mean_reward,"
         "capacity_violations,status";
}

std::string to_csv_row(const KpiRow& row) {
  std::string out;
  out.reserve(256);
  out += to_string(row.algorithm);
  out += ',';
  append_long(out, static_cast<long>(row.seed));
  out += ',';
  append_double(out, row.load_bps);
  out += ',';
  append_long(out, row.window);
  out += ',';
  append_double(out, row.throughput_bps);
  out += ',';
  append_double(out, row.delay_s);
  for (int k = 0; k < kTrafficClassCount; ++k) {
    out += ',';
    append_double(out, row.class_delay_s[static_cast<std::size_t>(k)]);
  }
  out += ',';
  append_long(out, row.packets_delivered);
  out += ',';
  append_long(out, row.packets_dropped);
  for (int k = 0; k < kTrafficClassCount; ++k) {
    out += ',';
    append_double(out, row.bytes_enb[static_cast<std::size_t>(k)]);
    out += ',';
    append_double(out, row.bytes_gnb[static_cast<std::size_t>(k)]);
  }
  out += ',';
  append_double(out, row.mean_reward);
  out += ',';
  append_long(out, row.capacity_violations);
  out += ',';
  out += row.diverged ? "diverged" : "ok";
  return out;
}

void write_csv(const std::filesystem::path& path,
               std::span<const KpiRow> rows) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw MetricsError("cannot open csv for writing: " +
                               path.string());
  out << csv_header() << '\n';
  for (const KpiRow& row : rows) out << to_csv_row(row) << '\n';
  if (!out) throw MetricsError("csv write failed: " + path.string());
}

std::vector<KpiRow> parse_csv(const std::string& text) {
  std::vector<KpiRow> rows;
  std::size_t pos = 0;
  int line_no = 0;
  bool saw_header = false;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    std::string_view line(text.data() + pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!saw_header) {
      if (line != csv_header())
        throw MetricsError("csv line 1: unexpected header");
      saw_header = true;
      continue;
    }
    const auto fields = split_fields(line);
    if (fields.size() != kColumnCount)
      throw MetricsError("csv line " + std::to_string(line_no) + ": expected " +
                         std::to_string(kColumnCount) + " fields, got " +
                         std::to_string(fields.size()));
    KpiRow row;
    const auto algo = algorithm_from_string(fields[0]);
    if (!algo)
      throw MetricsError("csv line " + std::to_string(line_no) +
                         ": unknown algorithm '" + std::string(fields[0]) +
                         "'");
    row.algorithm = *algo;
    row.seed = static_cast<std::uint64_t>(parse_long(fields[1], line_no));
    row.load_bps = parse_double(fields[2], line_no);
    row.window = parse_long(fields[3], line_no);
    row.throughput_bps = parse_double(fields[4], line_no);
    row.delay_s = parse_double(fields[5], line_no);
    for (int k = 0; k < kTrafficClassCount; ++k)
      row.class_delay_s[static_cast<std::size_t>(k)] =
          parse_double(fields[static_cast<std::size_t>(6 + k)], line_no);
    row.packets_delivered = parse_long(fields[9], line_no);
    row.packets_dropped = parse_long(fields[10], line_no);
    for (int k = 0; k < kTrafficClassCount; ++k) {
      row.bytes_enb[static_cast<std::size_t>(k)] =
          parse_double(fields[static_cast<std::size_t>(11 + 2 * k)], line_no);
      row.bytes_gnb[static_cast<std::size_t>(k)] =
          parse_double(fields[static_cast<std::size_t>(12 + 2 * k)], line_no);
    }
    row.mean_reward = parse_double(fields[17], line_no);
    row.capacity_violations = parse_long(fields[18], line_no);
    if (fields[19] == "ok") {
      row.diverged = false;
    } else if (fields[19] == "diverged") {
      row.diverged = true;
    } else {
      throw MetricsError("csv line " + std::to_string(line_no) +
                         ": unknown status '" + std::string(fields[19]) + "'");
    }
    rows.push_back(row);
  }
  if (!saw_header) throw MetricsError("csv: empty input");
  return rows;
}

std::vector<KpiRow> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MetricsError("cannot open csv: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

void sort_rows(std::vector<KpiRow>& rows) {
  std::sort(rows.begin(), rows.end(), [](const KpiRow& a, const KpiRow& b) {
    if (a.algorithm != b.algorithm) return a.algorithm < b.algorithm;
    if (a.load_bps != b.load_bps) return a.load_bps < b.load_bps;
    if (a.seed != b.seed) return a.seed < b.seed;
    return a.window < b.window;
  });
}

Summary summarize(std::span<const KpiRow> rows) {
  // Group into runs first; steady state is per run, not per cell.
  struct RunKey {
    Algorithm algo;
    double load;
    std::uint64_t seed;
    bool operator<(const RunKey& o) const {
      if (algo != o.algo) return algo < o.algo;
      if (load != o.load) return load < o.load;
      return seed < o.seed;
    }
  };
  std::map<RunKey, std::vector<const KpiRow*>> runs;
  for (const KpiRow& row : rows)
    runs[{row.algorithm, row.load_bps, row.seed}].push_back(&row);

  Summary summary;

  struct CellAccum {
    double throughput_sum = 0.0;
    long windows = 0;
    double delay_weighted = 0.0;
    long packets = 0;
    long dropped = 0;
    int run_count = 0;
  };
  std::map<std::pair<Algorithm, double>, CellAccum> cells;
  std::map<Algorithm,
           std::array<std::array<double, 2>, kTrafficClassCount>>
      bytes_by_algo;
  std::map<Algorithm, std::set<double>> loads_by_algo;

  for (auto& [key, run_rows] : runs) {
    const bool diverged =
        std::any_of(run_rows.begin(), run_rows.end(),
                    [](const KpiRow* r) { return r->diverged; });
    if (diverged) {
      ++summary.diverged_runs;
      continue;
    }
    loads_by_algo[key.algo].insert(key.load);
    long max_window = 0;
    for (const KpiRow* r : run_rows)
      max_window = std::max(max_window, r->window);
    // Last quarter of the run: training transients excluded.
    const long steady_from = (3 * (max_window + 1)) / 4;
    auto& cell = cells[{key.algo, key.load}];
    ++cell.run_count;
    auto& bytes = bytes_by_algo[key.algo];
    for (const KpiRow* r : run_rows) {
      if (r->window < steady_from) continue;
      cell.throughput_sum += r->throughput_bps;
      ++cell.windows;
      cell.delay_weighted += r->delay_s * static_cast<double>(r->packets_delivered);
      cell.packets += r->packets_delivered;
      cell.dropped += r->packets_dropped;
      for (int k = 0; k < kTrafficClassCount; ++k) {
        bytes[static_cast<std::size_t>(k)][0] +=
            r->bytes_enb[static_cast<std::size_t>(k)];
        bytes[static_cast<std::size_t>(k)][1] +=
            r->bytes_gnb[static_cast<std::size_t>(k)];
      }
    }
  }

  // Every algorithm must cover the same load grid or the deltas would
  // compare apples to oranges.
  if (loads_by_algo.size() > 1) {
    const auto& reference = loads_by_algo.begin()->second;
    for (const auto& [algo, loads] : loads_by_algo) {
      if (loads != reference) {
        std::string msg = "summary: load grids differ across algorithms (";
        msg += std::string(to_string(algo)) + " covers " +
               std::to_string(loads.size()) + " loads, " +
               std::string(to_string(loads_by_algo.begin()->first)) +
               " covers " + std::to_string(reference.size()) + ")";
        throw MetricsError(msg);
      }
    }
  }

  for (const auto& [key, cell] : cells) {
    SummaryCell out;
    out.algorithm = key.first;
    out.load_bps = key.second;
    out.throughput_bps =
        cell.windows > 0 ? cell.throughput_sum / cell.windows : 0.0;
    out.delay_s =
        cell.packets > 0 ? cell.delay_weighted / cell.packets : 0.0;
    out.packets_delivered = cell.packets;
    out.packets_dropped = cell.dropped;
    out.runs = cell.run_count;
    summary.cells.push_back(out);
  }

  for (const auto& [algo, bytes] : bytes_by_algo) {
    summary.byte_algorithms.push_back(algo);
    summary.class_rat_bytes.push_back(bytes);
  }

  // DQN deltas versus each other algorithm present at the same load.
  auto find_cell = [&](Algorithm algo, double load) -> const SummaryCell* {
    for (const auto& c : summary.cells)
      if (c.algorithm == algo && c.load_bps == load) return &c;
    return nullptr;
  };
  for (const auto& c : summary.cells) {
    if (c.algorithm != Algorithm::kDqn) continue;
    for (Algorithm baseline :
         {Algorithm::kQLearning, Algorithm::kHeuristic}) {
      const SummaryCell* base = find_cell(baseline, c.load_bps);
      if (!base) continue;
      SummaryDelta d;
      d.baseline = baseline;
      d.load_bps = c.load_bps;
      d.throughput_delta_pct =
          base->throughput_bps > 0
              ? 100.0 * (c.throughput_bps - base->throughput_bps) /
                    base->throughput_bps
              : 0.0;
      d.delay_delta_pct =
          base->delay_s > 0
              ? 100.0 * (c.delay_s - base->delay_s) / base->delay_s
              : 0.0;
      summary.deltas.push_back(d);
    }
  }

  return summary;
}

std::string format_summary(const Summary& summary) {
  std::ostringstream out;
  char buf[160];
  out << "algorithm   load_mbps  throughput_mbps  delay_ms   delivered  "
         "dropped  runs\n";
  for (const auto& c : summary.cells) {
    std::snprintf(buf, sizeof(buf),
                  "%-11s %-10.3g %-16.4f %-10.4f %-10ld %-8ld %d\n",
                  std::string(to_string(c.algorithm)).c_str(),
                  c.load_bps / 1e6, c.throughput_bps / 1e6, c.delay_s * 1e3,
                  c.packets_delivered, c.packets_dropped, c.runs);
    out << buf;
  }
  if (!summary.deltas.empty()) out << '\n';
  for (const auto& d : summary.deltas) {
    std::snprintf(buf, sizeof(buf),
                  "dqn vs %-10s at %.3g Mb/s: throughput %+.2f%%, delay "
                  "%+.2f%%\n",
                  std::string(to_string(d.baseline)).c_str(), d.load_bps / 1e6,
                  d.throughput_delta_pct, d.delay_delta_pct);
    out << buf;
  }
  if (!summary.byte_algorithms.empty()) out << '\n';
  for (std::size_t i = 0; i < summary.byte_algorithms.size(); ++i) {
    out << "bytes by RAT (" << to_string(summary.byte_algorithms[i]) << "):";
    for (int k = 0; k < kTrafficClassCount; ++k) {
      const auto& b = summary.class_rat_bytes[i][static_cast<std::size_t>(k)];
      const double total = b[0] + b[1];
      const double enb_pct = total > 0 ? 100.0 * b[0] / total : 0.0;
      std::snprintf(buf, sizeof(buf), " %s %.1f%% eNB / %.1f%% gNB%s",
                    std::string(to_string(static_cast<TrafficClass>(k)))
                        .c_str(),
                    enb_pct, total > 0 ? 100.0 - enb_pct : 0.0,
                    k + 1 < kTrafficClassCount ? "," : "");
      out << buf;
    }
    out << '\n';
  }
  if (summary.diverged_runs > 0)
    out << "\ndiverged runs excluded: " << summary.diverged_runs << '\n';
  return out.str();
}

}  // namespace ratsteer
