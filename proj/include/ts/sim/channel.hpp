#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <utility>

#include "ts/sim/topology.hpp"

namespace ts::sim {

// Single-slope UMa-LOS log-distance pathloss:
//   PL(dB) = 28.0 + 22 log10(d_m) + 20 log10(f_GHz), d clamped below 1 m.
inline double pathloss_db(double distance_m, double carrier_freq_hz) {
  if (distance_m < 1.0) distance_m = 1.0;
  double f_ghz = carrier_freq_hz / 1e9;
  return 28.0 + 22.0 * std::log10(distance_m) + 20.0 * std::log10(f_ghz);
}

inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
inline double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

// Thermal noise floor over `bandwidth_hz` plus receiver noise figure.
inline double noise_power_dbm(double bandwidth_hz, double noise_figure_db) {
  return -174.0 + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
}

// Log-normal shadowing per (ue, cell) link, redrawn each report window.
using ShadowingMap = std::map<std::pair<uint32_t, uint32_t>, double>;

// SINR of `cell_id` at `ue_pos`: received power over (sum of received power
// from every other same-kind cell + thermal noise over the cell bandwidth).
// Throws std::invalid_argument for an unknown cell. The shadowing map is
// keyed (ue_id, cell_id); missing links count as 0 dB shadowing.
double compute_sinr_db(const Vec2& ue_pos, uint32_t ue_id, uint32_t cell_id,
                       const Topology& topo, double carrier_freq_hz, double noise_figure_db,
                       const ShadowingMap& shadowing_db);

enum class Modulation : uint8_t { kOutage = 0, kQpsk = 1, k16Qam = 2, k64Qam = 3 };

struct McsInfo {
  Modulation modulation = Modulation::kOutage;
  double spectral_eff_bps_per_hz = 0.0;
};

struct McsThresholds {
  double qpsk_db = 0.0;
  double qam16_db = 10.0;
  double qam64_db = 18.0;
};

inline McsInfo mcs_from_sinr(double sinr_db, const McsThresholds& th = {}) {
  if (sinr_db < th.qpsk_db) return {Modulation::kOutage, 0.0};
  if (sinr_db < th.qam16_db) return {Modulation::kQpsk, 1.0};
  if (sinr_db < th.qam64_db) return {Modulation::k16Qam, 2.4};
  return {Modulation::k64Qam, 4.0};
}

}  // namespace ts::sim
