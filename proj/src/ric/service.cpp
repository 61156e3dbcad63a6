#include "ts/ric/service.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

#include "ts/util/log.hpp"
#include "ts/util/text.hpp"

namespace ts::ric {

namespace {

uint64_t steady_now_ns() {
  return static_cast<uint64_t>(
      std::chrono::duration_cast<std::chrono::nanoseconds>(
          std::chrono::steady_clock::now().time_since_epoch())
          .count());
}

}  // namespace

RicCore::RicCore(const RicConfig& config, policy::Policy* policy)
    : config_(config),
      policy_(policy),
      registry_(std::set<uint32_t>(config.node_ids.begin(), config.node_ids.end())),
      etl_(config.nr_cell_ids, config.etl) {}

const EtlCounters& RicCore::etl_counters() const { return etl_.counters(); }

void RicCore::log_json(const std::string& line) {
  if (log_sink_) log_sink_(line);
}

std::vector<Outbound> RicCore::on_message(const e2::E2Message& msg, uint64_t arrival_ns) {
  if (arrival_ns == 0) arrival_ns = steady_now_ns();
  std::vector<Outbound> out;

  if (!epoch_set_) {
    ledger_.set_epoch(msg.timestamp_ms);
    epoch_set_ = true;
  }

  if (std::holds_alternative<e2::SubscriptionAck>(msg.payload)) {
    uint32_t node = msg.node_id;
    if (sub_pending_.count(node)) {
      // ack of our subscription request
      sub_pending_.erase(node);
      subscribed_.insert(node);
      log_json("{\"event\":\"subscribed\",\"node\":" + std::to_string(node) + "}");
      return out;
    }
    if (hello_seen_.insert(node).second) {
      Subscription req{config_.xapp_id, node, config_.report_period_ms, config_.kpm_names};
      SubscriptionOutcome outcome = registry_.handle_subscription(req);
      if (outcome == SubscriptionOutcome::kForwarded) {
        e2::E2Message sub;
        sub.node_id = node;
        sub.timestamp_ms = msg.timestamp_ms;
        sub.payload =
            e2::SubscriptionRequest{config_.report_period_ms, config_.kpm_names};
        out.push_back({node, sub});
        sub_pending_.insert(node);
        log_json("{\"event\":\"subscription_forwarded\",\"node\":" + std::to_string(node) + "}");
      } else if (outcome == SubscriptionOutcome::kRejected) {
        log_json("{\"event\":\"subscription_rejected\",\"node\":" + std::to_string(node) + "}");
      } else {
        log_json("{\"event\":\"subscription_deduplicated\",\"node\":" + std::to_string(node) +
                 "}");
      }
    }
    return out;
  }

  if (std::holds_alternative<e2::KpmReport>(msg.payload)) {
    const auto& report = std::get<e2::KpmReport>(msg.payload);
    etl_.ingest(report);
    uint64_t w = report.window_end_ms;
    window_reports_[w].insert(msg.node_id);

    // flush strictly older windows first (stragglers rely on look-back)
    std::vector<uint64_t> to_flush;
    for (const auto& [win, nodes] : window_reports_)
      if (win < w) to_flush.push_back(win);
    for (uint64_t win : to_flush) {
      auto controls = dispatch_window(win, arrival_ns);
      out.insert(out.end(), controls.begin(), controls.end());
      window_reports_.erase(win);
    }

    if (window_reports_[w].size() == config_.node_ids.size()) {
      auto controls = dispatch_window(w, arrival_ns);
      out.insert(out.end(), controls.begin(), controls.end());
      window_reports_.erase(w);
    }
    return out;
  }

  if (std::holds_alternative<e2::ControlAck>(msg.payload)) {
    const auto& ack = std::get<e2::ControlAck>(msg.payload);
    if (ack.executed) {
      ledger_.on_handover(ack.ue_id, msg.timestamp_ms);
      log_json("{\"event\":\"control_ack\",\"ue\":" + std::to_string(ack.ue_id) +
               ",\"target\":" + std::to_string(ack.target_cell_id) + "}");
    }
    return out;
  }

  TS_LOG_WARN("ric: unexpected message type %d from node %u", static_cast<int>(msg.type()),
              msg.node_id);
  return out;
}

std::vector<Outbound> RicCore::dispatch_window(uint64_t window_end_ms, uint64_t arrival_ns) {
  std::vector<Outbound> out;
  if (window_end_ms <= last_dispatched_window_ && last_dispatched_window_ != 0) return out;
  last_dispatched_window_ = window_end_ms;

  uint64_t dropped_before = etl_.counters().records_dropped;
  uint64_t built = 0;
  for (uint32_t ue_id : etl_.ues_visible_at(window_end_ms)) {
    auto record = etl_.build_record(ue_id, window_end_ms, ledger_);
    if (!record) continue;
    built++;

    policy::PolicyDecision decision{ue_id, record->serving_cell_id, policy::Reason::kNoOp};
    try {
      decision = policy_->decide(*record, window_end_ms);
    } catch (const std::exception& e) {
      policy_failures_++;
      log_json(std::string("{\"event\":\"policy_error\",\"ue\":") + std::to_string(ue_id) +
               ",\"error\":\"" + e.what() + "\"}");
      continue;
    }
    dispatches_++;

    bool control_sent = decision.target_cell_id != record->serving_cell_id;
    if (control_sent) {
      e2::E2Message ctrl;
      ctrl.node_id = record->serving_cell_id;  // control goes to the serving node
      ctrl.timestamp_ms = window_end_ms;
      ctrl.payload = e2::RicControl{ue_id, decision.target_cell_id};
      out.push_back({record->serving_cell_id, ctrl});
      controls_++;

      double latency_us = static_cast<double>(steady_now_ns() - arrival_ns) / 1000.0;
      latency_.count++;
      latency_.sum_us += latency_us;
      latency_.max_us = std::max(latency_.max_us, latency_us);
    }

    if (record_sink_) record_sink_({*record, decision, control_sent});
    log_json("{\"event\":\"dispatch\",\"window\":" + std::to_string(window_end_ms) +
             ",\"ue\":" + std::to_string(ue_id) +
             ",\"serving\":" + std::to_string(record->serving_cell_id) +
             ",\"target\":" + std::to_string(decision.target_cell_id) + ",\"reason\":\"" +
             policy::reason_name(decision.reason) + "\"}");
  }

  uint64_t dropped = etl_.counters().records_dropped - dropped_before;
  log_json("{\"event\":\"window_flush\",\"window\":" + std::to_string(window_end_ms) +
           ",\"records\":" + std::to_string(built) + ",\"dropped\":" + std::to_string(dropped) +
           "}");
  return out;
}

std::vector<Outbound> RicCore::flush_all() {
  std::vector<Outbound> out;
  uint64_t now = steady_now_ns();
  std::vector<uint64_t> wins;
  for (const auto& [win, nodes] : window_reports_) wins.push_back(win);
  std::sort(wins.begin(), wins.end());
  for (uint64_t win : wins) {
    auto controls = dispatch_window(win, now);
    out.insert(out.end(), controls.begin(), controls.end());
    window_reports_.erase(win);
  }
  return out;
}

}  // namespace ts::ric
