#include "ts/app/collect.hpp"

#include <algorithm>
#include <filesystem>
#include <map>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "ts/rl/features.hpp"
#include "ts/util/text.hpp"

namespace ts::app {

using nlohmann::json;

std::vector<ric::ParsedRecordRow> read_records_csv(const std::string& path) {
  std::istringstream in(util::read_file(path));
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("records.csv empty: " + path);
  if (line != ric::record_csv_header())
    throw std::runtime_error("records.csv layout mismatch in " + path);
  std::vector<ric::ParsedRecordRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    rows.push_back(ric::parse_record_csv_row(line));
  }
  return rows;
}

std::vector<rl::Transition> transitions_from_records(
    const std::vector<ric::ParsedRecordRow>& rows, const rl::NormalizationManifest& norms,
    const RewardParams& reward) {
  // group by UE, keep window order (records.csv is already window-ordered)
  std::map<uint32_t, std::vector<const ric::ParsedRecordRow*>> by_ue;
  for (const auto& row : rows) by_ue[row.record.ue_id].push_back(&row);

  std::vector<rl::Transition> out;
  for (auto& [ue_id, ue_rows] : by_ue) {
    std::stable_sort(ue_rows.begin(), ue_rows.end(),
                     [](const ric::ParsedRecordRow* a, const ric::ParsedRecordRow* b) {
                       return a->record.window_end_ms < b->record.window_end_ms;
                     });
    for (size_t i = 0; i + 1 < ue_rows.size(); ++i) {
      const ric::ParsedRecordRow& cur = *ue_rows[i];
      const ric::ParsedRecordRow& next = *ue_rows[i + 1];

      rl::Transition t;
      t.ue_id = ue_id;
      std::vector<double> s = rl::encode_state(cur.record, norms);
      std::vector<double> sp = rl::encode_state(next.record, norms);
      for (int k = 0; k < rl::kStateLen; ++k) {
        t.s[static_cast<size_t>(k)] = static_cast<float>(s[static_cast<size_t>(k)]);
        t.s_next[static_cast<size_t>(k)] = static_cast<float>(sp[static_cast<size_t>(k)]);
      }
      // action index = position of the target cell in the fixed cell order
      int action = -1;
      for (size_t a = 0; a < cur.record.per_cell.size(); ++a)
        if (cur.record.per_cell[a].cell_id == cur.action_cell_id) action = static_cast<int>(a);
      if (action < 0)
        throw std::runtime_error("action cell " + std::to_string(cur.action_cell_id) +
                                 " not in record cell set");
      t.action = static_cast<uint8_t>(action);
      t.reward = static_cast<float>(rl::compute_reward(
          cur.record.reward_throughput_bps, next.record.reward_throughput_bps, cur.ho_executed,
          static_cast<double>(cur.record.t_since_last_ho_ms), reward.report_period_ms,
          reward.beta, reward.k0, reward.delta));
      t.done = 0;
      out.push_back(t);
    }
  }
  return out;
}

CollectStats collect_dataset(const std::vector<std::string>& run_dirs,
                             const std::string& out_dir,
                             const rl::NormalizationManifest& norms,
                             const RewardParams& reward, bool write_csv_mirror) {
  if (run_dirs.empty()) throw std::invalid_argument("collect: no run directories given");
  std::filesystem::create_directories(out_dir);

  CollectStats stats;
  std::vector<rl::Transition> all;
  json provenance = json::array();
  for (const auto& dir : run_dirs) {
    auto rows = read_records_csv(dir + "/records.csv");
    auto transitions = transitions_from_records(rows, norms, reward);
    provenance.push_back({{"run_dir", dir},
                          {"records", rows.size()},
                          {"row_begin", all.size()},
                          {"row_end", all.size() + transitions.size()}});
    all.insert(all.end(), transitions.begin(), transitions.end());
    stats.runs++;
    stats.records += rows.size();
  }
  stats.transitions = all.size();

  rl::save_transitions_bin(out_dir + "/transitions.bin", all);
  if (write_csv_mirror) rl::save_transitions_csv(out_dir + "/transitions.csv", all);
  json meta;
  meta["norm_manifest_version"] = norms.version;
  meta["state_len"] = rl::kStateLen;
  meta["transitions"] = all.size();
  meta["runs"] = provenance;
  util::write_file(out_dir + "/provenance.json", meta.dump(2) + "\n");
  return stats;
}

}  // namespace ts::app
