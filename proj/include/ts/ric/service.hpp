#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "ts/e2/message.hpp"
#include "ts/policy/policy.hpp"
#include "ts/ric/etl.hpp"

namespace ts::ric {

struct RicConfig {
  std::vector<uint32_t> node_ids;     // all expected E2 nodes
  std::vector<uint32_t> nr_cell_ids;  // cells that enter UE records, ascending
  uint32_t report_period_ms = 100;
  std::vector<std::string> kpm_names = {
      "prb_util_pct", "active_ues", "tb_count", "share_qpsk", "share_16qam",
      "share_64qam",  "sinr_db",    "pdcp_throughput_bps"};
  EtlParams etl;
  std::string xapp_id = "ts-xapp";
};

struct Outbound {
  uint32_t node_id = 0;
  e2::E2Message msg;
};

struct DispatchEvent {
  UeStateRecord record;
  policy::PolicyDecision decision;
  bool control_sent = false;
};

struct LatencyStats {
  uint64_t count = 0;
  double sum_us = 0.0;
  double max_us = 0.0;
  double mean_us() const { return count ? sum_us / static_cast<double>(count) : 0.0; }
};

// Transport-free near-RT RIC core: feed inbound E2 messages, collect
// outbound ones. A window is dispatched once it is complete across all
// expected nodes, or as soon as a newer window shows up (stragglers fall
// back to the ETL look-back). The hosted policy is consulted exactly once
// per complete record, from one thread of control.
class RicCore {
 public:
  RicCore(const RicConfig& config, policy::Policy* policy);

  // `arrival_ns` is a steady-clock stamp used for the control-latency
  // measurement; pass 0 to let the core take its own.
  std::vector<Outbound> on_message(const e2::E2Message& msg, uint64_t arrival_ns = 0);

  // Dispatches every window still pending (end of run / stream close).
  std::vector<Outbound> flush_all();

  void set_record_sink(std::function<void(const DispatchEvent&)> sink) {
    record_sink_ = std::move(sink);
  }
  void set_log_sink(std::function<void(const std::string&)> sink) {
    log_sink_ = std::move(sink);
  }

  const EtlCounters& etl_counters() const;
  const SubscriptionRegistry& registry() const { return registry_; }
  const HoLedger& ledger() const { return ledger_; }
  const LatencyStats& latency() const { return latency_; }
  uint64_t dispatch_count() const { return dispatches_; }
  uint64_t control_count() const { return controls_; }
  uint64_t policy_failure_count() const { return policy_failures_; }
  size_t subscribed_nodes() const { return subscribed_.size(); }

 private:
  std::vector<Outbound> dispatch_window(uint64_t window_end_ms, uint64_t arrival_ns);
  void log_json(const std::string& line);

  RicConfig config_;
  policy::Policy* policy_;
  SubscriptionRegistry registry_;
  EtlCache etl_;
  HoLedger ledger_;

  std::set<uint32_t> hello_seen_;
  std::set<uint32_t> sub_pending_;
  std::set<uint32_t> subscribed_;
  std::map<uint64_t, std::set<uint32_t>> window_reports_;  // window -> nodes seen
  uint64_t last_dispatched_window_ = 0;
  bool epoch_set_ = false;

  std::function<void(const DispatchEvent&)> record_sink_;
  std::function<void(const std::string&)> log_sink_;
  LatencyStats latency_;
  uint64_t dispatches_ = 0;
  uint64_t controls_ = 0;
  uint64_t policy_failures_ = 0;
};

}  // namespace ts::ric
