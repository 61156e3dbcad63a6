#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace ts::sim {

enum class Band { kLow850, kCBand3500 };

const char* band_name(Band b);
Band band_from_name(const std::string& name);

// Scenario knobs for the dense-urban EN-DC deployment: one LTE anchor eNB
// co-located with the central NR cell, six more NR cells on a hexagonal
// ring. Defaults follow the low-band configuration.
struct SimConfig {
  Band band = Band::kLow850;
  double carrier_freq_hz = 850e6;
  double isd_m = 1700.0;
  double nr_bandwidth_hz = 20e6;
  double lte_bandwidth_hz = 10e6;
  int n_nr_cells = 7;
  int n_lte_cells = 1;
  int n_ues = 20;
  double speed_min_mps = 2.0;
  double speed_max_mps = 4.0;
  uint32_t report_period_ms = 100;
  uint32_t sim_step_ms = 10;
  uint64_t sim_duration_ms = 60000;
  uint32_t ho_interruption_ms = 30;
  uint64_t seed = 1;
  // Baseline Unix timestamp (ms) added to simulated time on every outbound
  // E2 message. Fixed default keeps runs byte-reproducible; pass 0 to use
  // the wall clock at startup.
  uint64_t base_unix_ms = 1700000000000ull;

  // Channel / radio
  double nr_tx_power_dbm = 43.0;
  double lte_tx_power_dbm = 46.0;
  double shadowing_sigma_db = 4.0;  // 0 disables shadowing
  double noise_figure_db = 7.0;
  // MCS switch points (dB): below qpsk -> outage
  double mcs_qpsk_db = 0.0;
  double mcs_16qam_db = 10.0;
  double mcs_64qam_db = 18.0;

  // Mobility
  uint32_t direction_hold_ms = 1000;
  double bounds_margin_m = 200.0;

  // Per-cell tx power overrides (cell_id -> dBm); lets scenarios mute or
  // boost individual cells without touching the grid geometry.
  std::map<uint32_t, double> nr_tx_power_overrides;

  // Probability that a node's KPM report for a window is dropped before it
  // reaches the RIC; exercises the ETL look-back path. 0 in normal runs.
  double report_drop_prob = 0.0;

  // Throws std::invalid_argument with a description on the first violation.
  void validate() const;

  uint32_t slots_per_window() const { return report_period_ms / sim_step_ms; }
  uint64_t n_windows() const { return sim_duration_ms / report_period_ms; }

  std::string to_json() const;
  static SimConfig from_json(const std::string& json_text);
  static SimConfig low850();
  static SimConfig cband3500();
};

}  // namespace ts::sim
