#include "ts/rl/features.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ts::rl {

std::vector<double> encode_state(const ric::UeStateRecord& record,
                                 const NormalizationManifest& norms) {
  if (record.per_cell.size() != static_cast<size_t>(kNumCells))
    throw std::invalid_argument("encode_state: record has " +
                                std::to_string(record.per_cell.size()) + " cells, expected " +
                                std::to_string(kNumCells));
  std::vector<double> x;
  x.reserve(kStateLen);
  for (const auto& c : record.per_cell) {
    x.push_back(norms.sinr.apply(c.sinr_db));
    x.push_back(norms.prb_util.apply(c.prb_util_pct));
    x.push_back(norms.active_ues.apply(static_cast<double>(c.active_ues)));
    x.push_back(norms.tb_count.apply(static_cast<double>(c.tb_count)));
    x.push_back(norms.share.apply(c.share_qpsk));
    x.push_back(norms.share.apply(c.share_16qam));
    x.push_back(norms.share.apply(c.share_64qam));
    x.push_back(norms.ho_cost.apply(c.ho_cost));
  }
  x.push_back(std::min(
      static_cast<double>(record.t_since_last_ho_ms) / norms.t_since_ho_full_scale_ms, 1.0));
  for (double v : x)
    if (!std::isfinite(v)) throw std::invalid_argument("encode_state: non-finite feature");
  return x;
}

double compute_reward(double r_prev_bps, double r_next_bps, bool ho_executed,
                      double t_minus_tprime_ms, double report_period_ms, double beta, double k0,
                      double delta) {
  double prev = std::max(r_prev_bps, kThroughputFloorBps);
  double next = std::max(r_next_bps, kThroughputFloorBps);
  double gain = beta * (std::log(next) - std::log(prev));
  if (!ho_executed) return gain;
  double dt_windows = t_minus_tprime_ms / report_period_ms;
  return gain - k0 * std::exp(-delta * dt_windows);
}

}  // namespace ts::rl
