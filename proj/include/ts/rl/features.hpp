#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ts/ric/record.hpp"

namespace ts::rl {

inline constexpr int kNumCells = 7;
inline constexpr int kFeaturesPerCell = 8;
inline constexpr int kCellFeatureLen = kNumCells * kFeaturesPerCell;  // 56
inline constexpr int kStateLen = kCellFeatureLen + 1;                 // + normalized t - t'_u

// Fixed affine scaling per feature: x_norm = (x + offset) * scale. Constants
// are versioned and travel with the model file, so online inference never
// depends on training-set statistics.
struct FeatureScaling {
  double offset = 0.0;
  double scale = 1.0;
  double apply(double x) const { return (x + offset) * scale; }
  bool operator==(const FeatureScaling&) const = default;
};

struct NormalizationManifest {
  uint32_t version = 1;
  FeatureScaling sinr{20.0, 1.0 / 60.0};       // -20..40 dB -> 0..1
  FeatureScaling prb_util{0.0, 1.0 / 100.0};   // percent -> 0..1
  FeatureScaling active_ues{0.0, 1.0 / 50.0};
  FeatureScaling tb_count{0.0, 1.0 / 500.0};
  FeatureScaling share{0.0, 1.0};              // already in [0,1]
  FeatureScaling ho_cost{0.0, 1.0};            // K0=1 keeps this in [0,1]
  double t_since_ho_full_scale_ms = 10000.0;   // saturates at 100 windows
  bool operator==(const NormalizationManifest&) const = default;
};

// 57 features: 7 cell blocks of 8 in ascending cell_id
// [sinr, prb_util, active_ues, tb_count, share_qpsk, share_16qam,
//  share_64qam, ho_cost], then normalized t - t'_u. Throws on non-finite
// input or a malformed record.
std::vector<double> encode_state(const ric::UeStateRecord& record,
                                 const NormalizationManifest& norms);

// Reward: beta * (ln R_next - ln R_prev) - K0 e^(-delta * dt_windows) * x,
// throughputs floored at 1 kbit/s before the log, dt in report windows,
// x = 1 iff a handover was executed at this step.
double compute_reward(double r_prev_bps, double r_next_bps, bool ho_executed,
                      double t_minus_tprime_ms, double report_period_ms = 100.0,
                      double beta = 1.0, double k0 = 1.0, double delta = 0.1);

inline constexpr double kThroughputFloorBps = 1000.0;

}  // namespace ts::rl
