#pragma once

#include <cstdint>

#include "ts/util/rng.hpp"

namespace ts::sim {

enum class TrafficModel : uint8_t {
  kFullBuffer20M = 0,
  kBursty3M = 1,
  kBursty750k = 2,
  kBursty150k = 3,
};

const char* traffic_model_name(TrafficModel m);

// Mixture assignment: 25% of UEs per model, by ue_id modulo 4.
inline TrafficModel traffic_model_for(uint32_t ue_id) {
  return static_cast<TrafficModel>(ue_id % 4);
}

// Downlink arrival process. Full buffer arrives at a constant 20 Mbit/s
// (the saturation cap); bursty models alternate exponential on/off phases
// (mean 500 ms each) and arrive at twice the nominal mean while on, so the
// long-run average matches the nominal rate. Phase boundaries are keyed on
// (seed, ue, phase index): the realization depends only on seed and time.
class TrafficGen {
 public:
  TrafficGen() = default;
  TrafficGen(uint64_t seed, uint32_t ue_id);

  TrafficModel model() const { return model_; }
  double nominal_rate_bps() const;

  // Bits arriving in [t_ms, t_ms + dt_ms). Calls must move forward in time.
  uint64_t arrivals_bits(double t_ms, double dt_ms);

 private:
  double peak_rate_bps() const;
  void advance_phases(double until_ms);

  uint64_t seed_ = 0;
  uint32_t ue_id_ = 0;
  TrafficModel model_ = TrafficModel::kFullBuffer20M;
  // current phase
  uint64_t phase_index_ = 0;
  double phase_start_ms_ = 0.0;
  double phase_end_ms_ = 0.0;
  bool on_ = true;
  double carry_bits_ = 0.0;  // fractional bits carried between steps
};

inline constexpr double kBurstyMeanPhaseMs = 500.0;

}  // namespace ts::sim
