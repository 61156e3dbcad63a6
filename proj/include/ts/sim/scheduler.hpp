#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "ts/sim/channel.hpp"
#include "ts/sim/topology.hpp"

namespace ts::sim {

// Whole bits one PRB carries in one slot at the given spectral efficiency.
inline uint64_t bits_per_prb_slot(double spectral_eff, double slot_ms) {
  return static_cast<uint64_t>(std::llround(kPrbBandwidthHz * spectral_eff * slot_ms / 1000.0));
}

struct SlotUe {
  uint32_t ue_id = 0;
  uint64_t demand_bits = 0;
  uint64_t bits_per_prb = 0;  // 0 = outage
  Modulation modulation = Modulation::kOutage;
};

struct SlotGrant {
  uint32_t ue_id = 0;
  uint32_t prbs = 0;
  uint64_t bits = 0;
  bool tb_sent = false;      // one transport block per (UE, slot) with a grant
  bool tb_success = false;   // failed when the link is in outage
  Modulation modulation = Modulation::kOutage;
};

// Equal-share round-robin over backlogged UEs, one PRB per pass, starting
// from rr_offset into the backlogged list. A UE in outage gets exactly one
// PRB (one failed transport block) per slot and is then skipped. Entries
// must be sorted by ue_id.
std::vector<SlotGrant> schedule_slot(uint32_t n_prb, const std::vector<SlotUe>& entries,
                                     uint32_t rr_offset);

struct UeScheduleOutcome {
  uint32_t prbs_granted = 0;
  uint64_t bits_served = 0;
  uint32_t tb_count = 0;
  uint32_t tb_success = 0;
  Modulation modulation = Modulation::kOutage;
};

struct SchedUe {
  uint32_t ue_id = 0;
  uint32_t serving_cell = 0;
  double sinr_db = 0.0;
};

// Window-level schedule of one cell: runs slot scheduling for every slot in
// the window against the given demands. Throws std::invalid_argument if a UE
// is not attached to `cell`.
std::map<uint32_t, UeScheduleOutcome> schedule_cell(
    const Cell& cell, const std::vector<SchedUe>& attached_ues,
    const std::map<uint32_t, uint64_t>& per_ue_demand_bits, double window_ms, double slot_ms,
    const McsThresholds& thresholds = {});

// Cell-level KPM counters for one window, derivable from slot grants.
struct CellWindowCounters {
  uint64_t prbs_used = 0;
  uint32_t tb_count = 0;
  uint32_t tb_qpsk = 0;
  uint32_t tb_16qam = 0;
  uint32_t tb_64qam = 0;
  uint64_t bits_served = 0;
  std::vector<uint32_t> active_ues;  // ascending ue_id

  double prb_util_pct(uint32_t n_prb, uint32_t slots) const {
    uint64_t cap = static_cast<uint64_t>(n_prb) * slots;
    return cap ? 100.0 * static_cast<double>(prbs_used) / static_cast<double>(cap) : 0.0;
  }
  double share(uint32_t tb_mod) const {
    return tb_count ? static_cast<double>(tb_mod) / static_cast<double>(tb_count) : 0.0;
  }
};

}  // namespace ts::sim
