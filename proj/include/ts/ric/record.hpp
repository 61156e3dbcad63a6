#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ts::ric {

inline constexpr int kCellsPerRecord = 7;

struct PerCellFeatures {
  uint32_t cell_id = 0;
  double sinr_db = 0.0;
  double prb_util_pct = 0.0;
  uint32_t active_ues = 0;
  uint32_t tb_count = 0;
  double share_qpsk = 0.0;
  double share_16qam = 0.0;
  double share_64qam = 0.0;
  double ho_cost = 0.0;  // K0 e^(-delta (t - t'_u)) for non-serving cells, 0 for serving
  bool operator==(const PerCellFeatures&) const = default;
};

// The consolidated per-UE, per-window state produced by the ETL join:
// one entry per NR cell in ascending cell_id (cell identity is positional
// downstream), plus the time since the UE's previous handover and the
// split-bearer PDCP throughput that drives the reward.
struct UeStateRecord {
  uint32_t ue_id = 0;
  uint64_t window_end_ms = 0;
  uint64_t t_since_last_ho_ms = 0;
  uint32_t serving_cell_id = 0;
  std::vector<PerCellFeatures> per_cell;  // exactly kCellsPerRecord entries
  double reward_throughput_bps = 0.0;
  bool operator==(const UeStateRecord&) const = default;

  const PerCellFeatures* cell(uint32_t cell_id) const {
    for (const auto& c : per_cell)
      if (c.cell_id == cell_id) return &c;
    return nullptr;
  }
};

// records.csv layout; kept in one place so writers and readers agree.
std::string record_csv_header();
std::string record_csv_row(const UeStateRecord& rec, uint32_t action_cell_id, bool ho_executed);
struct ParsedRecordRow {
  UeStateRecord record;
  uint32_t action_cell_id = 0;
  bool ho_executed = false;
};
ParsedRecordRow parse_record_csv_row(const std::string& line);

}  // namespace ts::ric
