#include "ts/sim/scheduler.hpp"

#include <algorithm>
#include <stdexcept>

namespace ts::sim {

std::vector<SlotGrant> schedule_slot(uint32_t n_prb, const std::vector<SlotUe>& entries,
                                     uint32_t rr_offset) {
  std::vector<SlotGrant> grants;
  struct Live {
    size_t entry;
    uint64_t remaining;
    size_t grant;  // index into grants
    bool exhausted = false;
  };
  std::vector<Live> pool;
  for (size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].demand_bits == 0) continue;
    SlotGrant g;
    g.ue_id = entries[i].ue_id;
    g.modulation = entries[i].modulation;
    grants.push_back(g);
    pool.push_back({i, entries[i].demand_bits, grants.size() - 1});
  }
  if (pool.empty()) return grants;

  uint32_t prbs_left = n_prb;
  size_t cursor = rr_offset % pool.size();
  size_t live = pool.size();
  while (prbs_left > 0 && live > 0) {
    Live& u = pool[cursor];
    if (!u.exhausted) {
      const SlotUe& e = entries[u.entry];
      SlotGrant& g = grants[u.grant];
      g.prbs += 1;
      prbs_left -= 1;
      if (e.bits_per_prb == 0) {
        // outage: single-PRB attempt, failed TB, no more PRBs this slot
        u.exhausted = true;
        live--;
      } else {
        uint64_t served = std::min<uint64_t>(e.bits_per_prb, u.remaining);
        g.bits += served;
        u.remaining -= served;
        if (u.remaining == 0) {
          u.exhausted = true;
          live--;
        }
      }
    }
    cursor = (cursor + 1) % pool.size();
  }

  for (auto& g : grants) {
    if (g.prbs > 0) {
      g.tb_sent = true;
      g.tb_success = g.modulation != Modulation::kOutage;
    }
  }
  return grants;
}

std::map<uint32_t, UeScheduleOutcome> schedule_cell(
    const Cell& cell, const std::vector<SchedUe>& attached_ues,
    const std::map<uint32_t, uint64_t>& per_ue_demand_bits, double window_ms, double slot_ms,
    const McsThresholds& thresholds) {
  for (const auto& ue : attached_ues) {
    if (ue.serving_cell != cell.cell_id)
      throw std::invalid_argument("schedule_cell: ue " + std::to_string(ue.ue_id) +
                                  " attached to cell " + std::to_string(ue.serving_cell) +
                                  ", not " + std::to_string(cell.cell_id));
  }

  std::vector<SchedUe> ues = attached_ues;
  std::sort(ues.begin(), ues.end(),
            [](const SchedUe& a, const SchedUe& b) { return a.ue_id < b.ue_id; });

  std::map<uint32_t, UeScheduleOutcome> out;
  std::map<uint32_t, uint64_t> remaining = per_ue_demand_bits;
  uint32_t slots = static_cast<uint32_t>(window_ms / slot_ms);
  for (uint32_t slot = 0; slot < slots; ++slot) {
    std::vector<SlotUe> entries;
    for (const auto& ue : ues) {
      auto it = remaining.find(ue.ue_id);
      uint64_t demand = it != remaining.end() ? it->second : 0;
      McsInfo mcs = mcs_from_sinr(ue.sinr_db, thresholds);
      entries.push_back({ue.ue_id, demand,
                         bits_per_prb_slot(mcs.spectral_eff_bps_per_hz, slot_ms),
                         mcs.modulation});
    }
    for (const auto& g : schedule_slot(cell.n_prb, entries, slot)) {
      auto& o = out[g.ue_id];
      o.prbs_granted += g.prbs;
      o.bits_served += g.bits;
      if (g.tb_sent) o.tb_count += 1;
      if (g.tb_success) o.tb_success += 1;
      o.modulation = g.modulation;
      if (g.bits > 0) remaining[g.ue_id] -= g.bits;
    }
  }
  return out;
}

}  // namespace ts::sim
