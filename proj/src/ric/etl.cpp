#include "ts/ric/etl.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ts/util/text.hpp"

namespace ts::ric {

void HoLedger::set_epoch(uint64_t epoch_ms) { epoch_ms_ = epoch_ms; }

uint64_t HoLedger::last_ho_ms(uint32_t ue_id) const {
  auto it = last_ho_.find(ue_id);
  return it != last_ho_.end() ? it->second : epoch_ms_;
}

uint64_t HoLedger::t_since_last_ho_ms(uint32_t ue_id, uint64_t now_ms) const {
  uint64_t last = last_ho_ms(ue_id);
  return now_ms >= last ? now_ms - last : 0;
}

EtlCache::EtlCache(const std::vector<uint32_t>& nr_cell_ids, const EtlParams& params)
    : nr_cell_ids_(nr_cell_ids), params_(params) {
  std::sort(nr_cell_ids_.begin(), nr_cell_ids_.end());
}

void EtlCache::ingest(const e2::KpmReport& report) {
  counters_.reports_ingested++;
  auto& cell = cells_[report.cell.cell_id];
  if (report.window_end_ms >= cell.window_end_ms) {
    cell.window_end_ms = report.window_end_ms;
    cell.stats = report.cell;
  }
  for (const auto& ue : report.ue_level) {
    auto& entry = ues_[ue.ue_id];
    if (report.window_end_ms >= entry.window_end_ms) {
      entry.window_end_ms = report.window_end_ms;
      entry.serving_cell = report.cell.cell_id;
      entry.stats = ue;
    }
  }
}

std::vector<uint32_t> EtlCache::ues_visible_at(uint64_t window_end_ms) const {
  std::vector<uint32_t> out;
  for (const auto& [ue_id, entry] : ues_) {
    if (entry.window_end_ms > window_end_ms) continue;
    if (window_end_ms - entry.window_end_ms <= params_.epsilon_ms) out.push_back(ue_id);
  }
  return out;
}

std::optional<UeStateRecord> EtlCache::build_record(uint32_t ue_id, uint64_t window_end_ms,
                                                    const HoLedger& ledger) {
  auto ue_it = ues_.find(ue_id);
  if (ue_it == ues_.end() || ue_it->second.window_end_ms > window_end_ms ||
      window_end_ms - ue_it->second.window_end_ms > params_.epsilon_ms) {
    counters_.records_dropped++;
    return std::nullopt;
  }
  const UeEntry& ue = ue_it->second;

  UeStateRecord rec;
  rec.ue_id = ue_id;
  rec.window_end_ms = window_end_ms;
  rec.serving_cell_id = ue.serving_cell;
  rec.t_since_last_ho_ms = ledger.t_since_last_ho_ms(ue_id, window_end_ms);
  rec.reward_throughput_bps = ue.stats.pdcp_throughput_bps;

  double dt_windows =
      static_cast<double>(rec.t_since_last_ho_ms) / static_cast<double>(params_.report_period_ms);
  double cost_if_ho = params_.k0 * std::exp(-params_.delta * dt_windows);

  for (uint32_t cell_id : nr_cell_ids_) {
    auto cit = cells_.find(cell_id);
    if (cit == cells_.end() || cit->second.window_end_ms > window_end_ms ||
        window_end_ms - cit->second.window_end_ms > params_.epsilon_ms) {
      counters_.records_dropped++;
      return std::nullopt;
    }
    if (cit->second.window_end_ms != window_end_ms) counters_.fields_filled++;

    PerCellFeatures f;
    f.cell_id = cell_id;
    f.prb_util_pct = cit->second.stats.prb_util_pct;
    f.active_ues = cit->second.stats.active_ues;
    f.tb_count = cit->second.stats.tb_count;
    f.share_qpsk = cit->second.stats.share_qpsk;
    f.share_16qam = cit->second.stats.share_16qam;
    f.share_64qam = cit->second.stats.share_64qam;
    f.ho_cost = cell_id == rec.serving_cell_id ? 0.0 : cost_if_ho;

    f.sinr_db = 0.0;
    bool have_sinr = false;
    for (const auto& s : ue.stats.sinr_db_by_cell) {
      if (s.cell_id == cell_id) {
        f.sinr_db = s.sinr_db;
        have_sinr = true;
        break;
      }
    }
    if (!have_sinr) {
      counters_.records_dropped++;
      return std::nullopt;
    }
    rec.per_cell.push_back(f);
  }

  counters_.records_built++;
  return rec;
}

std::string record_csv_header() {
  std::string h = "window_end_ms,ue_id,serving_cell_id,t_since_last_ho_ms";
  for (int c = 0; c < kCellsPerRecord; ++c) {
    std::string p = ",c" + std::to_string(c) + "_";
    h += p + "sinr_db" + p + "prb_util_pct" + p + "active_ues" + p + "tb_count" + p +
         "share_qpsk" + p + "share_16qam" + p + "share_64qam" + p + "ho_cost";
  }
  h += ",reward_throughput_bps,action_cell_id,ho_executed";
  return h;
}

std::string record_csv_row(const UeStateRecord& rec, uint32_t action_cell_id, bool ho_executed) {
  using util::fmt_double;
  std::ostringstream os;
  os << rec.window_end_ms << ',' << rec.ue_id << ',' << rec.serving_cell_id << ','
     << rec.t_since_last_ho_ms;
  for (const auto& f : rec.per_cell) {
    os << ',' << fmt_double(f.sinr_db) << ',' << fmt_double(f.prb_util_pct) << ','
       << f.active_ues << ',' << f.tb_count << ',' << fmt_double(f.share_qpsk) << ','
       << fmt_double(f.share_16qam) << ',' << fmt_double(f.share_64qam) << ','
       << fmt_double(f.ho_cost);
  }
  os << ',' << fmt_double(rec.reward_throughput_bps) << ',' << action_cell_id << ','
     << (ho_executed ? 1 : 0);
  return os.str();
}

ParsedRecordRow parse_record_csv_row(const std::string& line) {
  auto fields = util::split(line, ',');
  size_t expect = 4 + kCellsPerRecord * 8 + 3;
  if (fields.size() != expect)
    throw std::runtime_error("records.csv row has " + std::to_string(fields.size()) +
                             " fields, expected " + std::to_string(expect));
  ParsedRecordRow row;
  size_t i = 0;
  row.record.window_end_ms = std::stoull(fields[i++]);
  row.record.ue_id = static_cast<uint32_t>(std::stoul(fields[i++]));
  row.record.serving_cell_id = static_cast<uint32_t>(std::stoul(fields[i++]));
  row.record.t_since_last_ho_ms = std::stoull(fields[i++]);
  for (int c = 0; c < kCellsPerRecord; ++c) {
    PerCellFeatures f;
    f.cell_id = static_cast<uint32_t>(c);
    f.sinr_db = std::stod(fields[i++]);
    f.prb_util_pct = std::stod(fields[i++]);
    f.active_ues = static_cast<uint32_t>(std::stoul(fields[i++]));
    f.tb_count = static_cast<uint32_t>(std::stoul(fields[i++]));
    f.share_qpsk = std::stod(fields[i++]);
    f.share_16qam = std::stod(fields[i++]);
    f.share_64qam = std::stod(fields[i++]);
    f.ho_cost = std::stod(fields[i++]);
    row.record.per_cell.push_back(f);
  }
  row.record.reward_throughput_bps = std::stod(fields[i++]);
  row.action_cell_id = static_cast<uint32_t>(std::stoul(fields[i++]));
  row.ho_executed = fields[i++] == "1";
  return row;
}

SubscriptionOutcome SubscriptionRegistry::handle_subscription(const Subscription& req) {
  if (!nodes_.count(req.node_id)) return SubscriptionOutcome::kRejected;
  std::string k = key(req.node_id, req.kpm_names);
  auto it = upstream_.find(k);
  if (it == upstream_.end()) {
    upstream_[k] = {req.xapp_id};
    return SubscriptionOutcome::kForwarded;
  }
  if (std::find(it->second.begin(), it->second.end(), req.xapp_id) == it->second.end())
    it->second.push_back(req.xapp_id);
  return SubscriptionOutcome::kDeduplicated;
}

size_t SubscriptionRegistry::xapp_count(uint32_t node_id,
                                        const std::vector<std::string>& kpm_names) const {
  auto it = upstream_.find(key(node_id, kpm_names));
  return it != upstream_.end() ? it->second.size() : 0;
}

std::string SubscriptionRegistry::key(uint32_t node_id, std::vector<std::string> kpm_names) {
  std::sort(kpm_names.begin(), kpm_names.end());
  std::string k = std::to_string(node_id);
  for (const auto& name : kpm_names) {
    k += '|';
    k += name;
  }
  return k;
}

}  // namespace ts::ric
