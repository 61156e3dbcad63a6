#include "ts/sim/topology.hpp"

#include <cmath>
#include <stdexcept>

namespace ts::sim {

const Cell* Topology::find(uint32_t cell_id) const {
  for (const auto& c : cells)
    if (c.cell_id == cell_id) return &c;
  return nullptr;
}

std::vector<const Cell*> Topology::nr_cells() const {
  std::vector<const Cell*> out;
  for (const auto& c : cells)
    if (c.kind == CellKind::kNr) out.push_back(&c);
  return out;
}

const Cell& Topology::lte_cell() const {
  for (const auto& c : cells)
    if (c.kind == CellKind::kLte) return c;
  throw std::logic_error("topology has no LTE cell");
}

Topology build_topology(const SimConfig& config) {
  config.validate();
  Topology topo;

  auto n_prb_for = [](double bw_hz) {
    return static_cast<uint32_t>(bw_hz / 200e3);  // 90% occupancy at 180 kHz PRBs
  };

  auto nr_power = [&config](uint32_t cell_id) {
    auto it = config.nr_tx_power_overrides.find(cell_id);
    return it != config.nr_tx_power_overrides.end() ? it->second : config.nr_tx_power_dbm;
  };

  Cell center;
  center.cell_id = 0;
  center.kind = CellKind::kNr;
  center.position = {0.0, 0.0};
  center.tx_power_dbm = nr_power(0);
  center.bandwidth_hz = config.nr_bandwidth_hz;
  center.n_prb = n_prb_for(config.nr_bandwidth_hz);
  topo.cells.push_back(center);

  for (int k = 0; k < config.n_nr_cells - 1; ++k) {
    double angle = k * M_PI / 3.0;  // 60° apart
    Cell c;
    c.cell_id = static_cast<uint32_t>(1 + k);
    c.kind = CellKind::kNr;
    c.position = {config.isd_m * std::cos(angle), config.isd_m * std::sin(angle)};
    c.tx_power_dbm = nr_power(c.cell_id);
    c.bandwidth_hz = config.nr_bandwidth_hz;
    c.n_prb = n_prb_for(config.nr_bandwidth_hz);
    topo.cells.push_back(c);
  }

  Cell enb;
  enb.cell_id = static_cast<uint32_t>(config.n_nr_cells);
  enb.kind = CellKind::kLte;
  enb.position = {0.0, 0.0};  // co-located with the central gNB
  enb.tx_power_dbm = config.lte_tx_power_dbm;
  enb.bandwidth_hz = config.lte_bandwidth_hz;
  enb.n_prb = n_prb_for(config.lte_bandwidth_hz);
  topo.cells.push_back(enb);

  double rx = config.isd_m + config.bounds_margin_m;
  double ry = config.isd_m * std::sin(M_PI / 3.0) + config.bounds_margin_m;
  topo.bounds = {-rx, -ry, rx, ry};
  return topo;
}

}  // namespace ts::sim
