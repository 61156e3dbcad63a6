#include "ts/sim/traffic.hpp"

#include <algorithm>
#include <cmath>

namespace ts::sim {

using util::Stream;

const char* traffic_model_name(TrafficModel m) {
  switch (m) {
    case TrafficModel::kFullBuffer20M: return "full_buffer_20m";
    case TrafficModel::kBursty3M: return "bursty_3m";
    case TrafficModel::kBursty750k: return "bursty_750k";
    case TrafficModel::kBursty150k: return "bursty_150k";
  }
  return "unknown";
}

TrafficGen::TrafficGen(uint64_t seed, uint32_t ue_id)
    : seed_(seed), ue_id_(ue_id), model_(traffic_model_for(ue_id)) {
  if (model_ != TrafficModel::kFullBuffer20M) {
    on_ = util::keyed_uniform01(seed_, Stream::kTraffic, ue_id_, 0) < 0.5;
    phase_end_ms_ =
        util::keyed_exponential(kBurstyMeanPhaseMs, seed_, Stream::kTraffic, ue_id_, 1);
  }
}

double TrafficGen::nominal_rate_bps() const {
  switch (model_) {
    case TrafficModel::kFullBuffer20M: return 20e6;
    case TrafficModel::kBursty3M: return 3e6;
    case TrafficModel::kBursty750k: return 750e3;
    case TrafficModel::kBursty150k: return 150e3;
  }
  return 0.0;
}

double TrafficGen::peak_rate_bps() const {
  // on/off duty cycle is 1/2, so peak = 2x nominal keeps the mean on target
  return model_ == TrafficModel::kFullBuffer20M ? nominal_rate_bps() : 2.0 * nominal_rate_bps();
}

void TrafficGen::advance_phases(double until_ms) {
  while (phase_end_ms_ <= until_ms) {
    phase_index_++;
    on_ = !on_;
    phase_start_ms_ = phase_end_ms_;
    phase_end_ms_ += util::keyed_exponential(kBurstyMeanPhaseMs, seed_, Stream::kTraffic, ue_id_,
                                             phase_index_ + 1);
  }
}

uint64_t TrafficGen::arrivals_bits(double t_ms, double dt_ms) {
  double bits = carry_bits_;
  if (model_ == TrafficModel::kFullBuffer20M) {
    bits += peak_rate_bps() * dt_ms / 1000.0;
  } else {
    double cursor = t_ms;
    double end = t_ms + dt_ms;
    while (cursor < end) {
      advance_phases(cursor);
      double seg_end = std::min(end, phase_end_ms_);
      if (on_) bits += peak_rate_bps() * (seg_end - cursor) / 1000.0;
      cursor = seg_end;
    }
  }
  uint64_t whole = static_cast<uint64_t>(bits);
  carry_bits_ = bits - static_cast<double>(whole);
  return whole;
}

}  // namespace ts::sim
