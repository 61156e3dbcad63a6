#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ts/rl/features.hpp"

namespace ts::rl {

// Offline dataset row. The binary layout is fixed little-endian:
//   ue_id u32 | s 57xf32 | action u8 | reward f32 | s_next 57xf32 | done u8
struct Transition {
  uint32_t ue_id = 0;
  std::array<float, kStateLen> s{};
  uint8_t action = 0;  // cell index 0..6
  float reward = 0.0f;
  std::array<float, kStateLen> s_next{};
  uint8_t done = 0;
  bool operator==(const Transition&) const = default;
};

inline constexpr size_t kTransitionBytes = 4 + 4 * kStateLen + 1 + 4 + 4 * kStateLen + 1;

std::vector<uint8_t> serialize_transitions(const std::vector<Transition>& rows);
std::vector<Transition> deserialize_transitions(const std::vector<uint8_t>& bytes);

void save_transitions_bin(const std::string& path, const std::vector<Transition>& rows);
std::vector<Transition> load_transitions_bin(const std::string& path);

// Human-readable mirror of the same rows.
void save_transitions_csv(const std::string& path, const std::vector<Transition>& rows);

}  // namespace ts::rl
