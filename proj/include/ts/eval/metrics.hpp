#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ts/sim/world.hpp"

namespace ts::eval {

// Nearest-rank percentile (no interpolation): the ceil(p/100 * n)-th
// smallest sample. Throws std::invalid_argument on empty input or p
// outside [0, 100].
double percentile_nearest_rank(std::vector<double> samples, double p);

// bits / (bandwidth * time)
double spectral_efficiency(double bits_served, double bandwidth_hz, double duration_s);

// Handovers per unit time weighted by the UE's share of total throughput:
// H_u = (ho_count / duration_s) * (mean_thpt_u / sum(mean_thpt_all)).
// A zero throughput total yields 0 with a warning.
double mobility_overhead(uint32_t ho_count, double duration_s, double mean_thpt_u,
                         const std::vector<double>& mean_thpt_all);

// Per-window export rows (also the ues.csv / cells.csv layouts).
struct UeWindowRow {
  uint64_t window_end_ms = 0;
  uint32_t ue_id = 0;
  uint32_t serving_cell = 0;
  uint64_t bits_nr = 0;
  uint64_t bits_lte = 0;
  double sinr_db = 0.0;
};

struct CellWindowRow {
  uint64_t window_end_ms = 0;
  uint32_t cell_id = 0;
  double prb_util_pct = 0.0;
  uint64_t bits = 0;
  uint32_t active_ues = 0;
  uint32_t tb_count = 0;
};

struct UeMetrics {
  uint32_t ue_id = 0;
  double mean_throughput_bps = 0.0;
  uint32_t ho_count = 0;
  double h_u = 0.0;
  double mean_sinr_db = 0.0;
};

struct RunMetrics {
  double duration_s = 0.0;
  std::vector<UeMetrics> per_ue;  // ascending ue_id
  double mean_throughput_bps = 0.0;
  double p10_throughput_bps = 0.0;
  double p95_throughput_bps = 0.0;
  double mean_ue_spectral_eff = 0.0;    // per-UE bits over the NR bandwidth
  double mean_cell_spectral_eff = 0.0;  // per-cell bits over that cell's bandwidth
  double mean_prb_util_pct = 0.0;       // NR cells, averaged over windows then cells
  uint64_t total_handovers = 0;
  std::vector<double> sinr_samples_db;  // serving-cell SINR per (ue, window)
  uint64_t total_ue_bits = 0;
  uint64_t total_cell_bits = 0;  // accounting must close: equals total_ue_bits
};

RunMetrics compute_run_metrics(const std::vector<UeWindowRow>& ue_rows,
                               const std::vector<CellWindowRow>& cell_rows,
                               const std::vector<sim::EventRow>& events,
                               const sim::SimConfig& config);

// CSV exports (column orders are stable; see README)
std::string metrics_csv_header();
std::string metrics_csv_row(const std::string& policy, uint64_t seed, const RunMetrics& m);
void write_per_ue_csv(const std::string& path, const RunMetrics& m);
void write_sinr_cdf_csv(const std::string& path, const RunMetrics& m);
void write_ue_windows_csv(const std::string& path, const std::vector<UeWindowRow>& rows);
void write_cell_windows_csv(const std::string& path, const std::vector<CellWindowRow>& rows);
std::vector<UeWindowRow> read_ue_windows_csv(const std::string& path);
std::vector<CellWindowRow> read_cell_windows_csv(const std::string& path);

}  // namespace ts::eval
