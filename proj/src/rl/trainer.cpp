#include "ts/rl/trainer.hpp"

#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ts/util/log.hpp"
#include "ts/util/text.hpp"

namespace ts::rl {

TrainResult train_offline(const std::vector<Transition>& dataset, const TrainConfig& cfg) {
  if (dataset.empty()) throw std::runtime_error("train_offline: dataset is empty");
  if (dataset.size() < cfg.min_replay_history)
    throw std::runtime_error("train_offline: dataset has " + std::to_string(dataset.size()) +
                             " rows, below min_replay_history " +
                             std::to_string(cfg.min_replay_history));
  for (const Transition& t : dataset)
    if (t.action >= cfg.net.actions())
      throw std::runtime_error("train_offline: action " + std::to_string(t.action) +
                               " out of range for " + std::to_string(cfg.net.actions()) +
                               " actions");

  // circular-buffer semantics: newest rows win when over capacity
  size_t begin = dataset.size() > cfg.replay_capacity
                     ? dataset.size() - static_cast<size_t>(cfg.replay_capacity)
                     : 0;
  std::span<const Transition> replay(dataset.data() + begin, dataset.size() - begin);

  auto t0 = std::chrono::steady_clock::now();
  util::Rng rng_init(cfg.seed);
  util::Rng rng_batch(cfg.seed ^ 0xba7c4ull);
  util::Rng rng_alpha(cfg.seed ^ 0xa1fa5ull);

  TrainResult res;
  res.net = QNetwork(cfg.net);
  res.net.init_he(rng_init);
  QNetwork target = res.net;

  Adam adam(res.net.params().size());
  AdamConfig adam_cfg;
  adam_cfg.lr = cfg.lr;

  std::vector<double> grads(res.net.params().size(), 0.0);
  std::vector<Transition> batch(cfg.batch_size);

  for (uint64_t step = 0; step < cfg.training_steps; ++step) {
    if (cfg.target_update_period > 0 && step > 0 && step % cfg.target_update_period == 0)
      target.params() = res.net.params();

    for (auto& b : batch) b = replay[rng_batch.uniform_int(replay.size())];
    RemWeights alpha = RemWeights::sample(cfg.net.heads, rng_alpha);

    std::fill(grads.begin(), grads.end(), 0.0);
    LossBreakdown loss = td_cql_loss(res.net, target, batch, alpha, cfg.loss, &grads);
    if (!std::isfinite(loss.total))
      throw std::runtime_error("train_offline: non-finite loss at step " + std::to_string(step) +
                               " (td=" + std::to_string(loss.td_loss) +
                               ", cql=" + std::to_string(loss.cql_term) + ")");
    adam.step(res.net.params(), grads, adam_cfg);

    if (step % cfg.loss_log_every == 0)
      res.loss_rows.push_back({step, loss.td_loss, loss.cql_term, loss.total});
    if (step + 1 == cfg.training_steps) res.report.final_loss = loss;
  }

  res.report.steps = cfg.training_steps;
  if (!res.loss_rows.empty()) {
    size_t decile = std::max<size_t>(1, res.loss_rows.size() / 10);
    double first = 0.0, last = 0.0;
    for (size_t i = 0; i < decile; ++i) first += res.loss_rows[i].total;
    for (size_t i = res.loss_rows.size() - decile; i < res.loss_rows.size(); ++i)
      last += res.loss_rows[i].total;
    res.report.first_decile_mean_total = first / static_cast<double>(decile);
    res.report.last_decile_mean_total = last / static_cast<double>(decile);
  }
  res.report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

TrainReport train_offline_to_files(const std::vector<Transition>& dataset,
                                   const TrainConfig& cfg, const NormalizationManifest& norms,
                                   const std::string& model_path,
                                   const std::string& loss_csv_path) {
  TrainResult res = train_offline(dataset, cfg);
  if (!model_path.empty()) {
    ModelFile m;
    m.cfg = cfg.net;
    m.norms = norms;
    m.gamma = cfg.loss.gamma;
    m.lr = cfg.lr;
    m.cql_alpha = cfg.loss.cql_alpha;
    m.omega = cfg.loss.omega;
    m.cql_logsumexp = cfg.loss.cql_logsumexp;
    m.seed = cfg.seed;
    m.trained_steps = cfg.training_steps;
    m.params = res.net.params();
    save_model(model_path, m);
  }
  if (!loss_csv_path.empty()) write_loss_csv(loss_csv_path, res.loss_rows);
  TS_LOG_INFO("training done: %llu steps in %.1fs, final total loss %.6f",
              static_cast<unsigned long long>(res.report.steps), res.report.wall_seconds,
              res.report.final_loss.total);
  return res.report;
}

void write_loss_csv(const std::string& path, const std::vector<LossRow>& rows) {
  std::ostringstream os;
  os << "step,td_loss,cql_term,total\n";
  for (const auto& r : rows)
    os << r.step << ',' << util::fmt_double(r.td_loss) << ',' << util::fmt_double(r.cql_term)
       << ',' << util::fmt_double(r.total) << '\n';
  util::write_file(path, os.str());
}

}  // namespace ts::rl
