#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ts/ric/record.hpp"
#include "ts/rl/dataset.hpp"

namespace ts::app {

struct RewardParams {
  double report_period_ms = 100.0;
  double beta = 1.0;
  double k0 = 1.0;
  double delta = 0.1;
};

// Pairs consecutive dispatched records per UE into (s, a, r, s') rows:
// action and the executed flag come from the earlier record's dispatch, the
// reward from the throughput change into the later one. One run contributes
// (records - 1) transitions per UE.
std::vector<rl::Transition> transitions_from_records(
    const std::vector<ric::ParsedRecordRow>& rows, const rl::NormalizationManifest& norms,
    const RewardParams& reward);

std::vector<ric::ParsedRecordRow> read_records_csv(const std::string& path);

struct CollectStats {
  uint64_t runs = 0;
  uint64_t records = 0;
  uint64_t transitions = 0;
};

// Concatenates the per-run transitions of every run directory (each must
// hold a records.csv) into out_dir/transitions.bin + transitions.csv, with
// per-run row ranges recorded in out_dir/provenance.json. Runs with a
// different record layout are rejected.
CollectStats collect_dataset(const std::vector<std::string>& run_dirs,
                             const std::string& out_dir,
                             const rl::NormalizationManifest& norms,
                             const RewardParams& reward, bool write_csv_mirror = true);

}  // namespace ts::app
