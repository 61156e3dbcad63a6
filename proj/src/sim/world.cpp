#include "ts/sim/world.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include "ts/util/rng.hpp"
#include "ts/util/text.hpp"

namespace ts::sim {

using util::Stream;

World::World(const SimConfig& config) : config_(config), topo_(build_topology(config)) {
  uint32_t lte_id = topo_.lte_cell_id();
  for (int i = 0; i < config_.n_ues; ++i) {
    UeSim ue;
    ue.ue_id = static_cast<uint32_t>(i);
    ue.position = {util::keyed_uniform(topo_.bounds.min_x, topo_.bounds.max_x, config_.seed,
                                       Stream::kUeInit, ue.ue_id, 0),
                   util::keyed_uniform(topo_.bounds.min_y, topo_.bounds.max_y, config_.seed,
                                       Stream::kUeInit, ue.ue_id, 1)};
    ue.lte_anchor = lte_id;
    ue.traffic_model = traffic_model_for(ue.ue_id);

    // initial PSCell: strongest received power, no shadowing; ties -> lowest id
    double best = -1e300;
    for (const Cell* c : topo_.nr_cells()) {
      double rx = c->tx_power_dbm -
                  pathloss_db(distance_m(ue.position, c->position), config_.carrier_freq_hz);
      if (rx > best) {
        best = rx;
        ue.serving_nr_cell = c->cell_id;
      }
    }
    ues_.push_back(ue);
    traffic_.emplace_back(config_.seed, ue.ue_id);
  }
}

UeSim& World::ue_ref(uint32_t ue_id) {
  for (auto& ue : ues_)
    if (ue.ue_id == ue_id) return ue;
  throw std::invalid_argument("unknown ue " + std::to_string(ue_id));
}

void World::set_ue_position(uint32_t ue_id, Vec2 pos, Vec2 vel) {
  UeSim& ue = ue_ref(ue_id);
  ue.position = pos;
  ue.velocity = vel;
}

double World::window_sinr_db(uint32_t ue_id, uint32_t cell_id) const {
  auto it = sinr_cache_.find({ue_id, cell_id});
  if (it == sinr_cache_.end())
    throw std::invalid_argument("no cached sinr for ue " + std::to_string(ue_id) + " cell " +
                                std::to_string(cell_id));
  return it->second;
}

void World::begin_window() {
  window_index_ = time_ms_ / config_.report_period_ms;

  ShadowingMap shadow;
  if (config_.shadowing_sigma_db > 0) {
    for (const auto& ue : ues_)
      for (const auto& cell : topo_.cells)
        shadow[{ue.ue_id, cell.cell_id}] =
            util::keyed_normal(0.0, config_.shadowing_sigma_db, config_.seed, Stream::kShadowing,
                               window_index_, ue.ue_id, cell.cell_id);
  }

  sinr_cache_.clear();
  for (const auto& ue : ues_)
    for (const auto& cell : topo_.cells)
      sinr_cache_[{ue.ue_id, cell.cell_id}] =
          compute_sinr_db(ue.position, ue.ue_id, cell.cell_id, topo_, config_.carrier_freq_hz,
                          config_.noise_figure_db, shadow);

  // Split-bearer ratio: NR vs LTE achievable rate, each discounted by how
  // many UEs were active on that leg's cell in the previous window.
  McsThresholds th{config_.mcs_qpsk_db, config_.mcs_16qam_db, config_.mcs_64qam_db};
  nr_split_.clear();
  uint32_t lte_id = topo_.lte_cell_id();
  for (const auto& ue : ues_) {
    double se_nr = mcs_from_sinr(sinr_cache_[{ue.ue_id, ue.serving_nr_cell}], th)
                       .spectral_eff_bps_per_hz;
    double se_lte = mcs_from_sinr(sinr_cache_[{ue.ue_id, lte_id}], th).spectral_eff_bps_per_hz;
    auto prev_z = [this](uint32_t cell) {
      auto it = prev_active_.find(cell);
      return it != prev_active_.end() ? std::max<uint32_t>(1, it->second) : 1u;
    };
    double ach_nr = se_nr / prev_z(ue.serving_nr_cell);
    double ach_lte = se_lte / prev_z(lte_id);
    nr_split_[ue.ue_id] = (ach_nr + ach_lte) > 0 ? ach_nr / (ach_nr + ach_lte) : 1.0;
  }

  cell_counters_.clear();
  ue_window_.clear();
  for (const auto& cell : topo_.cells) cell_counters_[cell.cell_id] = {};
  for (const auto& ue : ues_) {
    UeWindowStats s;
    s.ue_id = ue.ue_id;
    s.serving_cell = ue.serving_nr_cell;
    s.sinr_serving_db = sinr_cache_[{ue.ue_id, ue.serving_nr_cell}];
    for (const Cell* nr : topo_.nr_cells())
      s.sinr_by_nr_cell.push_back({nr->cell_id, sinr_cache_[{ue.ue_id, nr->cell_id}]});
    ue_window_[ue.ue_id] = s;
  }
}

void World::apply_mobility(UeSim& ue, double dt_s) {
  uint64_t epoch = time_ms_ / config_.direction_hold_ms;
  // redraw at epoch boundaries (including t=0)
  if (time_ms_ % config_.direction_hold_ms == 0) {
    double speed = util::keyed_uniform(config_.speed_min_mps, config_.speed_max_mps, config_.seed,
                                       Stream::kMobility, ue.ue_id, epoch, 0);
    double angle = util::keyed_uniform(0.0, 2.0 * M_PI, config_.seed, Stream::kMobility,
                                       ue.ue_id, epoch, 1);
    ue.velocity = {speed * std::cos(angle), speed * std::sin(angle)};
  }
  ue.position.x += ue.velocity.x * dt_s;
  ue.position.y += ue.velocity.y * dt_s;
  // reflect at bounds
  const Rect& b = topo_.bounds;
  for (int guard = 0; guard < 8 && !b.contains(ue.position); ++guard) {
    if (ue.position.x < b.min_x) {
      ue.position.x = 2 * b.min_x - ue.position.x;
      ue.velocity.x = -ue.velocity.x;
    } else if (ue.position.x > b.max_x) {
      ue.position.x = 2 * b.max_x - ue.position.x;
      ue.velocity.x = -ue.velocity.x;
    }
    if (ue.position.y < b.min_y) {
      ue.position.y = 2 * b.min_y - ue.position.y;
      ue.velocity.y = -ue.velocity.y;
    } else if (ue.position.y > b.max_y) {
      ue.position.y = 2 * b.max_y - ue.position.y;
      ue.velocity.y = -ue.velocity.y;
    }
  }
}

void World::schedule_leg(const Cell& cell, uint32_t slot_in_window) {
  McsThresholds th{config_.mcs_qpsk_db, config_.mcs_16qam_db, config_.mcs_64qam_db};
  std::vector<SlotUe> entries;  // ues_ is ascending by construction
  for (const auto& ue : ues_) {
    bool on_cell = cell.kind == CellKind::kNr ? ue.serving_nr_cell == cell.cell_id
                                              : ue.lte_anchor == cell.cell_id;
    if (!on_cell) continue;
    if (time_ms_ < ue.ho_freeze_until_ms) continue;  // interruption: both legs idle
    uint64_t demand = cell.kind == CellKind::kNr ? ue.backlog_nr_bits : ue.backlog_lte_bits;
    if (demand == 0) continue;
    McsInfo mcs = mcs_from_sinr(sinr_cache_.at({ue.ue_id, cell.cell_id}), th);
    entries.push_back({ue.ue_id, demand,
                       bits_per_prb_slot(mcs.spectral_eff_bps_per_hz,
                                         static_cast<double>(config_.sim_step_ms)),
                       mcs.modulation});
  }
  if (entries.empty()) return;

  CellWindowCounters& ctr = cell_counters_[cell.cell_id];
  for (const auto& g : schedule_slot(cell.n_prb, entries, slot_in_window)) {
    if (g.prbs == 0) continue;
    ctr.prbs_used += g.prbs;
    if (g.tb_sent) {
      ctr.tb_count += 1;
      if (g.tb_success) {
        switch (g.modulation) {
          case Modulation::kQpsk: ctr.tb_qpsk += 1; break;
          case Modulation::k16Qam: ctr.tb_16qam += 1; break;
          case Modulation::k64Qam: ctr.tb_64qam += 1; break;
          case Modulation::kOutage: break;
        }
      }
      if (!std::binary_search(ctr.active_ues.begin(), ctr.active_ues.end(), g.ue_id)) {
        ctr.active_ues.insert(
            std::upper_bound(ctr.active_ues.begin(), ctr.active_ues.end(), g.ue_id), g.ue_id);
      }
    }
    ctr.bits_served += g.bits;
    UeSim& ue = ue_ref(g.ue_id);
    UeWindowStats& uw = ue_window_[g.ue_id];
    if (cell.kind == CellKind::kNr) {
      ue.backlog_nr_bits -= g.bits;
      uw.bits_nr += g.bits;
    } else {
      ue.backlog_lte_bits -= g.bits;
      uw.bits_lte += g.bits;
    }
  }
}

void World::step() {
  // Lazy window init so boundary handovers (applied between steps) are
  // reflected in the new window's serving cells, SINR, and split ratios.
  if (time_ms_ % config_.report_period_ms == 0) begin_window();

  double dt_s = config_.sim_step_ms / 1000.0;
  uint32_t slot_in_window =
      static_cast<uint32_t>((time_ms_ % config_.report_period_ms) / config_.sim_step_ms);

  for (auto& ue : ues_) apply_mobility(ue, dt_s);

  for (size_t i = 0; i < ues_.size(); ++i) {
    UeSim& ue = ues_[i];
    uint64_t arrivals =
        traffic_[i].arrivals_bits(static_cast<double>(time_ms_), config_.sim_step_ms);
    double p = nr_split_.at(ue.ue_id);
    uint64_t nr_bits = std::min<uint64_t>(
        arrivals, static_cast<uint64_t>(std::llround(p * static_cast<double>(arrivals))));
    ue.backlog_nr_bits += nr_bits;
    ue.backlog_lte_bits += arrivals - nr_bits;
  }

  for (const auto& cell : topo_.cells) schedule_leg(cell, slot_in_window);

  time_ms_ += config_.sim_step_ms;

  if (time_ms_ % config_.report_period_ms == 0) {
    // close the window
    last_window_ = WindowStats{};
    last_window_.window_end_ms = time_ms_;
    for (const auto& ue : ues_) last_window_.ues.push_back(ue_window_.at(ue.ue_id));
    prev_active_.clear();
    for (const auto& cell : topo_.cells) {
      CellWindowStats cs;
      cs.cell_id = cell.cell_id;
      cs.counters = cell_counters_.at(cell.cell_id);
      cs.slots = config_.slots_per_window();
      cs.n_prb = cell.n_prb;
      last_window_.cells.push_back(cs);
      prev_active_[cell.cell_id] = static_cast<uint32_t>(cs.counters.active_ues.size());
    }
  }
}

bool World::execute_handover(uint32_t ue_id, uint32_t target_cell) {
  UeSim& ue = ue_ref(ue_id);
  const Cell* target = topo_.find(target_cell);
  if (!target || target->kind != CellKind::kNr)
    throw std::invalid_argument("execute_handover: unknown NR cell " +
                                std::to_string(target_cell));
  if (ue.serving_nr_cell == target_cell) return false;

  uint32_t from = ue.serving_nr_cell;
  ue.serving_nr_cell = target_cell;
  ue.last_ho_time_ms = time_ms_;
  ue.ho_freeze_until_ms = time_ms_ + config_.ho_interruption_ms;
  events_.push_back({time_ms_, ue_id, "ho_exec",
                     "from=" + std::to_string(from) + " to=" + std::to_string(target_cell)});
  return true;
}

e2::KpmReport World::generate_kpm_report(uint32_t node_id, uint64_t window_end_ms) const {
  if (!has_window() || window_end_ms != last_window_.window_end_ms ||
      window_end_ms % config_.report_period_ms != 0)
    throw std::invalid_argument("generate_kpm_report: window " + std::to_string(window_end_ms) +
                                " is not the last completed window");
  const Cell* cell = topo_.find(node_id);
  if (!cell) throw std::invalid_argument("generate_kpm_report: unknown node " + std::to_string(node_id));

  const CellWindowStats* cs = nullptr;
  for (const auto& c : last_window_.cells)
    if (c.cell_id == node_id) cs = &c;

  e2::KpmReport report;
  report.node_id = node_id;
  report.window_end_ms = window_end_ms;
  report.cell.cell_id = node_id;
  report.cell.prb_util_pct = cs->counters.prb_util_pct(cs->n_prb, cs->slots);
  report.cell.active_ues = static_cast<uint32_t>(cs->counters.active_ues.size());
  report.cell.tb_count = cs->counters.tb_count;
  report.cell.share_qpsk = cs->counters.share(cs->counters.tb_qpsk);
  report.cell.share_16qam = cs->counters.share(cs->counters.tb_16qam);
  report.cell.share_64qam = cs->counters.share(cs->counters.tb_64qam);

  if (cell->kind == CellKind::kNr) {
    for (const auto& uw : last_window_.ues) {
      if (uw.serving_cell != node_id) continue;
      e2::KpmUeStats ue_stats;
      ue_stats.ue_id = uw.ue_id;
      ue_stats.pdcp_throughput_bps = static_cast<double>(uw.bits_nr + uw.bits_lte) * 1000.0 /
                                     config_.report_period_ms;
      for (const auto& [cell_id, sinr] : uw.sinr_by_nr_cell)
        ue_stats.sinr_db_by_cell.push_back({cell_id, sinr});
      report.ue_level.push_back(std::move(ue_stats));
    }
  }
  return report;
}

uint64_t World::state_fingerprint() const {
  std::string blob;
  auto add_u64 = [&blob](uint64_t v) { blob.append(reinterpret_cast<const char*>(&v), 8); };
  auto add_d = [&add_u64](double v) {
    uint64_t bits;
    std::memcpy(&bits, &v, 8);
    add_u64(bits);
  };
  add_u64(time_ms_);
  for (const auto& ue : ues_) {
    add_u64(ue.ue_id);
    add_d(ue.position.x);
    add_d(ue.position.y);
    add_d(ue.velocity.x);
    add_d(ue.velocity.y);
    add_u64(ue.serving_nr_cell);
    add_u64(ue.last_ho_time_ms);
    add_u64(ue.ho_freeze_until_ms);
    add_u64(ue.backlog_nr_bits);
    add_u64(ue.backlog_lte_bits);
  }
  for (const auto& [key, sinr] : sinr_cache_) {
    add_u64(key.first);
    add_u64(key.second);
    add_d(sinr);
  }
  return util::fnv1a64(blob.data(), blob.size());
}

}  // namespace ts::sim
