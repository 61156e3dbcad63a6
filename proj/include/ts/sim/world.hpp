#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ts/e2/message.hpp"
#include "ts/sim/channel.hpp"
#include "ts/sim/config.hpp"
#include "ts/sim/scheduler.hpp"
#include "ts/sim/topology.hpp"
#include "ts/sim/traffic.hpp"

namespace ts::sim {

struct UeSim {
  uint32_t ue_id = 0;
  Vec2 position;
  Vec2 velocity;
  uint32_t serving_nr_cell = 0;  // the PSCell
  uint32_t lte_anchor = 0;
  TrafficModel traffic_model = TrafficModel::kFullBuffer20M;
  uint64_t last_ho_time_ms = 0;
  uint64_t ho_freeze_until_ms = 0;
  uint64_t backlog_nr_bits = 0;
  uint64_t backlog_lte_bits = 0;

  uint64_t backlog_bits() const { return backlog_nr_bits + backlog_lte_bits; }
};

struct EventRow {
  uint64_t time_ms = 0;
  uint32_t ue_id = 0;
  std::string kind;
  std::string detail;
};

// Per-window ground truth kept for KPM generation and run exports.
struct UeWindowStats {
  uint32_t ue_id = 0;
  uint32_t serving_cell = 0;
  uint64_t bits_nr = 0;
  uint64_t bits_lte = 0;
  double sinr_serving_db = 0.0;
  std::vector<std::pair<uint32_t, double>> sinr_by_nr_cell;  // ascending cell_id
};

struct CellWindowStats {
  uint32_t cell_id = 0;
  CellWindowCounters counters;
  uint32_t slots = 0;
  uint32_t n_prb = 0;
};

struct WindowStats {
  uint64_t window_end_ms = 0;
  std::vector<UeWindowStats> ues;    // ascending ue_id
  std::vector<CellWindowStats> cells;  // topology order (NR ascending, then LTE)
};

// Deterministic discrete-time model of the EN-DC deployment. All noise is
// keyed on (seed, simulated time), so two runs with the same config are
// bit-identical, and runs that differ only in handover policy see the same
// mobility, traffic, and shadowing realizations.
class World {
 public:
  explicit World(const SimConfig& config);

  // Advances one sim step (dt = sim_step_ms). Window bookkeeping rolls over
  // automatically; after the step that closes a window, last_window() holds
  // that window's stats.
  void step();

  // Applies a PSCell change. Target equal to the current serving cell is a
  // no-op and returns false. Unknown ue/cell throws std::invalid_argument.
  bool execute_handover(uint32_t ue_id, uint32_t target_cell);

  // KPM report for one E2 node (node_id == cell_id) over the last completed
  // window. window_end_ms must match last_window().window_end_ms.
  e2::KpmReport generate_kpm_report(uint32_t node_id, uint64_t window_end_ms) const;

  uint64_t time_ms() const { return time_ms_; }
  bool done() const { return time_ms_ >= config_.sim_duration_ms; }
  const SimConfig& config() const { return config_; }
  const Topology& topology() const { return topo_; }
  const std::vector<UeSim>& ues() const { return ues_; }
  const WindowStats& last_window() const { return last_window_; }
  bool has_window() const { return last_window_.window_end_ms != 0; }
  const std::vector<EventRow>& events() const { return events_; }

  // SINR of `cell_id` at the UE under the current window's shadowing draw.
  double window_sinr_db(uint32_t ue_id, uint32_t cell_id) const;

  // FNV-1a over the full dynamic state; replay audits compare these.
  uint64_t state_fingerprint() const;

  // Test hook: force a UE's kinematic state.
  void set_ue_position(uint32_t ue_id, Vec2 pos, Vec2 vel);

 private:
  void begin_window();
  void apply_mobility(UeSim& ue, double dt_s);
  void schedule_leg(const Cell& cell, uint32_t slot_in_window);
  UeSim& ue_ref(uint32_t ue_id);

  SimConfig config_;
  Topology topo_;
  std::vector<UeSim> ues_;
  std::vector<TrafficGen> traffic_;
  uint64_t time_ms_ = 0;

  // current window scratch
  uint64_t window_index_ = 0;
  std::map<std::pair<uint32_t, uint32_t>, double> sinr_cache_;  // (ue, cell) -> dB
  std::map<uint32_t, double> nr_split_;                         // ue -> NR share of arrivals
  std::map<uint32_t, CellWindowCounters> cell_counters_;
  std::map<uint32_t, UeWindowStats> ue_window_;
  std::map<uint32_t, uint32_t> prev_active_;  // cell -> active UEs in previous window

  WindowStats last_window_;
  std::vector<EventRow> events_;
};

}  // namespace ts::sim
