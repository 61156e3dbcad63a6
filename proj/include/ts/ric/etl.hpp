#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ts/e2/message.hpp"
#include "ts/ric/record.hpp"

namespace ts::ric {

// Handover ledger: time of the previous executed handover per UE, updated
// on ControlAck so k(c) never depends on the RAN-side clock. UEs without a
// handover yet fall back to the stream epoch (first message seen).
class HoLedger {
 public:
  void set_epoch(uint64_t epoch_ms);
  uint64_t epoch_ms() const { return epoch_ms_; }
  void on_handover(uint32_t ue_id, uint64_t time_ms) { last_ho_[ue_id] = time_ms; }
  uint64_t last_ho_ms(uint32_t ue_id) const;
  uint64_t t_since_last_ho_ms(uint32_t ue_id, uint64_t now_ms) const;

 private:
  uint64_t epoch_ms_ = 0;
  std::map<uint32_t, uint64_t> last_ho_;
};

struct EtlParams {
  uint64_t epsilon_ms = 300;  // look-back fill horizon
  uint32_t report_period_ms = 100;
  double k0 = 1.0;
  double delta = 0.1;  // per report window
};

struct EtlCounters {
  uint64_t reports_ingested = 0;
  uint64_t records_built = 0;
  uint64_t records_dropped = 0;  // incomplete beyond epsilon
  uint64_t fields_filled = 0;    // cell entries carried forward by look-back
};

// Joins per-node KPM streams into per-UE records. Keeps only the most
// recent value per (cell, field group) and per UE; a field missing in the
// current window is carried forward if its last value is within epsilon,
// otherwise the whole record is dropped (zero-filling would fabricate
// meaningful SINR/PRB values).
class EtlCache {
 public:
  EtlCache(const std::vector<uint32_t>& nr_cell_ids, const EtlParams& params);

  void ingest(const e2::KpmReport& report);

  // All UEs whose UE-level state is usable at `window_end_ms` (fresh or
  // within epsilon), ascending ue_id.
  std::vector<uint32_t> ues_visible_at(uint64_t window_end_ms) const;

  // Builds the consolidated record, or nullopt (counted) when any cell or
  // the UE-level state has no value within epsilon.
  std::optional<UeStateRecord> build_record(uint32_t ue_id, uint64_t window_end_ms,
                                            const HoLedger& ledger);

  const EtlCounters& counters() const { return counters_; }

 private:
  struct CellEntry {
    uint64_t window_end_ms = 0;
    e2::KpmCellStats stats;
  };
  struct UeEntry {
    uint64_t window_end_ms = 0;
    uint32_t serving_cell = 0;
    e2::KpmUeStats stats;
  };

  std::vector<uint32_t> nr_cell_ids_;  // ascending
  EtlParams params_;
  std::map<uint32_t, CellEntry> cells_;
  std::map<uint32_t, UeEntry> ues_;
  EtlCounters counters_;
};

// xApp subscription bookkeeping with upstream dedup: at most one wire
// subscription per (node, KPM name set) no matter how many xApps ask.
enum class SubscriptionOutcome { kForwarded, kDeduplicated, kRejected };

struct Subscription {
  std::string xapp_id;
  uint32_t node_id = 0;
  uint32_t report_period_ms = 0;
  std::vector<std::string> kpm_names;
};

class SubscriptionRegistry {
 public:
  explicit SubscriptionRegistry(const std::set<uint32_t>& known_nodes) : nodes_(known_nodes) {}

  SubscriptionOutcome handle_subscription(const Subscription& req);

  size_t upstream_count() const { return upstream_.size(); }
  size_t xapp_count(uint32_t node_id, const std::vector<std::string>& kpm_names) const;

 private:
  static std::string key(uint32_t node_id, std::vector<std::string> kpm_names);

  std::set<uint32_t> nodes_;
  std::map<std::string, std::vector<std::string>> upstream_;  // key -> xapp ids
};

}  // namespace ts::ric
