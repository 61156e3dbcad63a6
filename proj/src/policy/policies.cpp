#include "ts/policy/policy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ts/util/rng.hpp"

namespace ts::policy {

const char* reason_name(Reason r) {
  switch (r) {
    case Reason::kThreshold: return "threshold";
    case Reason::kTttExpired: return "ttt_expired";
    case Reason::kRlGreedy: return "rl_greedy";
    case Reason::kNoOp: return "noop";
    case Reason::kRandom: return "random";
  }
  return "unknown";
}

void TttTracker::observe(uint32_t ue_id, uint32_t cell_id, bool above, uint64_t now_ms) {
  auto key = std::make_pair(ue_id, cell_id);
  if (!above) {
    since_.erase(key);
    return;
  }
  since_.try_emplace(key, now_ms);
}

std::optional<uint64_t> TttTracker::above_since_ms(uint32_t ue_id, uint32_t cell_id) const {
  auto it = since_.find({ue_id, cell_id});
  if (it == since_.end()) return std::nullopt;
  return it->second;
}

void TttTracker::clear_ue(uint32_t ue_id) {
  for (auto it = since_.begin(); it != since_.end();) {
    if (it->first.first == ue_id)
      it = since_.erase(it);
    else
      ++it;
  }
}

namespace {

double serving_sinr(const ric::UeStateRecord& rec) {
  const auto* c = rec.cell(rec.serving_cell_id);
  if (!c) throw std::invalid_argument("record lacks serving cell entry");
  return c->sinr_db;
}

// argmax-SINR neighbor above serving + threshold; ties -> lowest cell_id
// (per_cell is in ascending cell_id order, strict > keeps the first).
const ric::PerCellFeatures* best_candidate(const ric::UeStateRecord& rec, double threshold_db) {
  double serving = serving_sinr(rec);
  const ric::PerCellFeatures* best = nullptr;
  for (const auto& c : rec.per_cell) {
    if (c.cell_id == rec.serving_cell_id) continue;
    if (c.sinr_db <= serving + threshold_db) continue;
    if (!best || c.sinr_db > best->sinr_db) best = &c;
  }
  return best;
}

class RrmPolicy final : public Policy {
 public:
  explicit RrmPolicy(const PolicyParams& params) : params_(params) {}
  const char* name() const override { return "rrm"; }

  PolicyDecision decide(const ric::UeStateRecord& rec, uint64_t) override {
    const auto* best = best_candidate(rec, params_.threshold_db);
    if (!best) return {rec.ue_id, rec.serving_cell_id, Reason::kNoOp};
    return {rec.ue_id, best->cell_id, Reason::kThreshold};
  }

 private:
  PolicyParams params_;
};

// SON1/SON2 share the tracker loop; SON2 plugs in a margin-dependent TTT.
class TttPolicy final : public Policy {
 public:
  TttPolicy(const PolicyParams& params, bool dynamic_ttt)
      : params_(params), dynamic_ttt_(dynamic_ttt) {}
  const char* name() const override { return dynamic_ttt_ ? "son2" : "son1"; }

  PolicyDecision decide(const ric::UeStateRecord& rec, uint64_t now_ms) override {
    double serving = serving_sinr(rec);
    const ric::PerCellFeatures* fire = nullptr;
    for (const auto& c : rec.per_cell) {
      if (c.cell_id == rec.serving_cell_id) continue;
      double margin = c.sinr_db - serving;
      bool above = margin > params_.threshold_db;
      tracker_.observe(rec.ue_id, c.cell_id, above, now_ms);
      if (!above) continue;
      uint64_t since = *tracker_.above_since_ms(rec.ue_id, c.cell_id);
      double ttt = ttt_ms(margin);
      if (static_cast<double>(now_ms - since) >= ttt && now_ms > since) {
        if (!fire || c.sinr_db > fire->sinr_db) fire = &c;
      }
    }
    if (!fire) return {rec.ue_id, rec.serving_cell_id, Reason::kNoOp};
    tracker_.clear_ue(rec.ue_id);  // HO fires; timers restart from scratch
    return {rec.ue_id, fire->cell_id, Reason::kTttExpired};
  }

  TttTracker& tracker() { return tracker_; }

 private:
  double ttt_ms(double margin_db) const {
    if (!dynamic_ttt_) return params_.ttt_base_ms;
    return std::max(params_.son2_ttt_min_ms,
                    params_.ttt_base_ms -
                        params_.son2_slope_ms_per_db * (margin_db - params_.threshold_db));
  }

  PolicyParams params_;
  bool dynamic_ttt_;
  TttTracker tracker_;
};

// Exploration policy for offline data collection: with probability p pick a
// uniformly random target (possibly the serving cell), otherwise stay.
class RandomPolicy final : public Policy {
 public:
  RandomPolicy(double ho_prob, uint64_t seed) : ho_prob_(ho_prob), rng_(seed ^ 0x72616e64ull) {}
  const char* name() const override { return "rand"; }

  PolicyDecision decide(const ric::UeStateRecord& rec, uint64_t) override {
    if (rng_.uniform01() >= ho_prob_) return {rec.ue_id, rec.serving_cell_id, Reason::kNoOp};
    uint32_t idx = static_cast<uint32_t>(rng_.uniform_int(rec.per_cell.size()));
    uint32_t target = rec.per_cell[idx].cell_id;
    Reason reason = target == rec.serving_cell_id ? Reason::kNoOp : Reason::kRandom;
    return {rec.ue_id, target, reason};
  }

 private:
  double ho_prob_;
  util::Rng rng_;
};

}  // namespace

std::unique_ptr<Policy> make_rrm(const PolicyParams& params) {
  return std::make_unique<RrmPolicy>(params);
}
std::unique_ptr<Policy> make_son1(const PolicyParams& params) {
  return std::make_unique<TttPolicy>(params, false);
}
std::unique_ptr<Policy> make_son2(const PolicyParams& params) {
  return std::make_unique<TttPolicy>(params, true);
}
std::unique_ptr<Policy> make_random(double ho_prob, uint64_t seed) {
  return std::make_unique<RandomPolicy>(ho_prob, seed);
}

}  // namespace ts::policy
