#include "ts/sim/channel.hpp"

#include <stdexcept>

namespace ts::sim {

namespace {

double rx_power_dbm(const Vec2& ue_pos, uint32_t ue_id, const Cell& cell,
                    double carrier_freq_hz, const ShadowingMap& shadowing_db) {
  double pl = pathloss_db(distance_m(ue_pos, cell.position), carrier_freq_hz);
  double shadow = 0.0;
  auto it = shadowing_db.find({ue_id, cell.cell_id});
  if (it != shadowing_db.end()) shadow = it->second;
  return cell.tx_power_dbm - pl + shadow;
}

}  // namespace

double compute_sinr_db(const Vec2& ue_pos, uint32_t ue_id, uint32_t cell_id,
                       const Topology& topo, double carrier_freq_hz, double noise_figure_db,
                       const ShadowingMap& shadowing_db) {
  const Cell* target = topo.find(cell_id);
  if (!target) throw std::invalid_argument("compute_sinr_db: unknown cell " + std::to_string(cell_id));

  double signal_dbm = rx_power_dbm(ue_pos, ue_id, *target, carrier_freq_hz, shadowing_db);
  double denom_mw = dbm_to_mw(noise_power_dbm(target->bandwidth_hz, noise_figure_db));
  for (const auto& other : topo.cells) {
    if (other.cell_id == cell_id || other.kind != target->kind) continue;
    denom_mw += dbm_to_mw(rx_power_dbm(ue_pos, ue_id, other, carrier_freq_hz, shadowing_db));
  }
  return signal_dbm - mw_to_dbm(denom_mw);
}

}  // namespace ts::sim
