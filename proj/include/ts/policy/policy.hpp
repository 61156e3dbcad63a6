#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "ts/ric/record.hpp"

namespace ts::policy {

enum class Reason : uint8_t { kThreshold, kTttExpired, kRlGreedy, kNoOp, kRandom };

const char* reason_name(Reason r);

struct PolicyDecision {
  uint32_t ue_id = 0;
  uint32_t target_cell_id = 0;  // == serving cell encodes no-HO
  Reason reason = Reason::kNoOp;
  bool operator==(const PolicyDecision&) const = default;
};

struct PolicyParams {
  double threshold_db = 3.0;      // margin over the serving cell, strictly greater
  double ttt_base_ms = 110.0;     // SON1 fixed TTT
  double son2_slope_ms_per_db = 10.0;
  double son2_ttt_min_ms = 20.0;
};

// A policy maps one consolidated UE record to a target NR cell. Baselines
// are pure functions of (record, tracker state); replaying a record stream
// yields the identical decision stream.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual PolicyDecision decide(const ric::UeStateRecord& record, uint64_t now_ms) = 0;
  virtual const char* name() const = 0;
};

// Per-(ue, candidate) time-to-trigger bookkeeping shared by SON1/SON2:
// remembers since when a candidate has continuously exceeded the margin.
class TttTracker {
 public:
  void observe(uint32_t ue_id, uint32_t cell_id, bool above, uint64_t now_ms);
  std::optional<uint64_t> above_since_ms(uint32_t ue_id, uint32_t cell_id) const;
  void clear_ue(uint32_t ue_id);
  size_t size() const { return since_.size(); }

 private:
  std::map<std::pair<uint32_t, uint32_t>, uint64_t> since_;
};

// `spec`: rrm | son1 | son2 | rand[:p] | rl:<model-path>
std::unique_ptr<Policy> make_policy(const std::string& spec, const PolicyParams& params,
                                    uint64_t seed);

std::unique_ptr<Policy> make_rrm(const PolicyParams& params);
std::unique_ptr<Policy> make_son1(const PolicyParams& params);
std::unique_ptr<Policy> make_son2(const PolicyParams& params);
std::unique_ptr<Policy> make_random(double ho_prob, uint64_t seed);

}  // namespace ts::policy
