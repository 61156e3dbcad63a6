#pragma once

#include <cmath>
#include <cstdint>

namespace ts::util {

// splitmix64 finalizer
inline uint64_t mix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Sequential stream RNG (splitmix64). Deterministic across platforms; used
// wherever draws happen in a fixed order (training batches, weight init).
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(mix64(seed ^ 0x5851f42d4c957f2dull)) {}

  uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // in [0,1)
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // in [0,n)
  uint64_t uniform_int(uint64_t n) { return n ? next_u64() % n : 0; }

  // Box-Muller; one value per call, no caching so the draw count stays
  // predictable for replay audits.
  double normal(double mean = 0.0, double stddev = 1.0) {
    double u1 = uniform01();
    double u2 = uniform01();
    if (u1 < 1e-300) u1 = 1e-300;
    double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    return mean + stddev * z;
  }

  double exponential(double mean) {
    double u = uniform01();
    if (u < 1e-300) u = 1e-300;
    return -mean * std::log(u);
  }

 private:
  uint64_t state_;
};

// Counter-based draws keyed on (seed, stream, k1, k2, k3). Every simulator
// noise source (shadowing, mobility, traffic phases) is keyed rather than
// sequential so the environment realization depends only on the seed and
// the simulated time, never on the policy-dependent execution path.
enum class Stream : uint64_t {
  kUeInit = 1,
  kMobility = 2,
  kTraffic = 3,
  kShadowing = 4,
  kPolicy = 5,
  kReportLoss = 6,
};

inline uint64_t keyed_u64(uint64_t seed, Stream stream, uint64_t k1, uint64_t k2 = 0,
                          uint64_t k3 = 0) {
  uint64_t h = mix64(seed ^ 0x243f6a8885a308d3ull);
  h = mix64(h ^ static_cast<uint64_t>(stream) * 0x9e3779b97f4a7c15ull);
  h = mix64(h ^ k1 * 0xc2b2ae3d27d4eb4full);
  h = mix64(h ^ k2 * 0x165667b19e3779f9ull);
  h = mix64(h ^ k3 * 0x27d4eb2f165667c5ull);
  return h;
}

inline double keyed_uniform01(uint64_t seed, Stream stream, uint64_t k1, uint64_t k2 = 0,
                              uint64_t k3 = 0) {
  return static_cast<double>(keyed_u64(seed, stream, k1, k2, k3) >> 11) * 0x1.0p-53;
}

inline double keyed_uniform(double lo, double hi, uint64_t seed, Stream stream, uint64_t k1,
                            uint64_t k2 = 0, uint64_t k3 = 0) {
  return lo + (hi - lo) * keyed_uniform01(seed, stream, k1, k2, k3);
}

inline double keyed_normal(double mean, double stddev, uint64_t seed, Stream stream, uint64_t k1,
                           uint64_t k2 = 0, uint64_t k3 = 0) {
  double u1 = keyed_uniform01(seed, stream, k1, k2, k3);
  double u2 = keyed_uniform01(seed, stream, k1 ^ 0x8000000000000000ull, k2, k3);
  if (u1 < 1e-300) u1 = 1e-300;
  double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  return mean + stddev * z;
}

inline double keyed_exponential(double mean, uint64_t seed, Stream stream, uint64_t k1,
                                uint64_t k2 = 0, uint64_t k3 = 0) {
  double u = keyed_uniform01(seed, stream, k1, k2, k3);
  if (u < 1e-300) u = 1e-300;
  return -mean * std::log(u);
}

}  // namespace ts::util
