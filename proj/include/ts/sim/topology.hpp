#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "ts/sim/config.hpp"

namespace ts::sim {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Vec2&) const = default;
};

inline double distance_m(const Vec2& a, const Vec2& b) {
  double dx = a.x - b.x, dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

enum class CellKind { kNr, kLte };

struct Cell {
  uint32_t cell_id = 0;
  CellKind kind = CellKind::kNr;
  Vec2 position;
  double tx_power_dbm = 43.0;
  double bandwidth_hz = 20e6;
  uint32_t n_prb = 100;
};

struct Rect {
  double min_x = 0, min_y = 0, max_x = 0, max_y = 0;
  bool contains(const Vec2& p) const {
    return p.x >= min_x && p.x <= max_x && p.y >= min_y && p.y <= max_y;
  }
};

// NR cells 0..6 (0 central, 1..6 on the hexagonal ring at isd_m, ring cell k
// at angle 60°·(k−1)); the single LTE cell is co-located with cell 0 and
// takes the next id. Bounds circumscribe the ring with the configured margin.
struct Topology {
  std::vector<Cell> cells;  // NR cells first in ascending cell_id, then LTE
  Rect bounds;

  const Cell* find(uint32_t cell_id) const;
  std::vector<const Cell*> nr_cells() const;
  const Cell& lte_cell() const;
  uint32_t lte_cell_id() const { return lte_cell().cell_id; }
};

inline constexpr double kPrbBandwidthHz = 180e3;

Topology build_topology(const SimConfig& config);

}  // namespace ts::sim
