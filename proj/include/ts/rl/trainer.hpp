#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ts/rl/dataset.hpp"
#include "ts/rl/loss.hpp"
#include "ts/rl/model_io.hpp"
#include "ts/rl/network.hpp"

namespace ts::rl {

// Offline training loop: sample a batch, draw a fresh head mixture on the
// simplex, minimize the combined TD+CQL objective with Adam, and copy the
// online network into the target every target_update_period steps.
// Deployed-scale defaults; desk-scale runs override steps/history.
struct TrainConfig {
  QNetConfig net;
  uint64_t training_steps = 100000;
  uint32_t batch_size = 32;
  uint32_t target_update_period = 8000;
  uint64_t min_replay_history = 20000;  // dataset must hold at least this many rows
  uint64_t replay_capacity = 1000000;   // newest rows win when the dataset is larger
  LossConfig loss;
  double lr = 5e-5;
  uint64_t seed = 1;
  uint32_t loss_log_every = 1;
};

struct LossRow {
  uint64_t step = 0;
  double td_loss = 0.0;
  double cql_term = 0.0;
  double total = 0.0;
};

struct TrainReport {
  uint64_t steps = 0;
  double first_decile_mean_total = 0.0;  // mean total loss over the first 10% of steps
  double last_decile_mean_total = 0.0;   // ... and the last 10%
  LossBreakdown final_loss;
  double wall_seconds = 0.0;
};

struct TrainResult {
  QNetwork net;
  std::vector<LossRow> loss_rows;
  TrainReport report;
};

// Core loop; throws on an empty/undersized dataset or non-finite loss.
TrainResult train_offline(const std::vector<Transition>& dataset, const TrainConfig& cfg);

// Convenience wrapper: trains, then persists the model (with the manifest)
// and the per-step loss curve CSV. Empty paths skip the corresponding file.
TrainReport train_offline_to_files(const std::vector<Transition>& dataset,
                                   const TrainConfig& cfg, const NormalizationManifest& norms,
                                   const std::string& model_path,
                                   const std::string& loss_csv_path);

void write_loss_csv(const std::string& path, const std::vector<LossRow>& rows);

}  // namespace ts::rl
