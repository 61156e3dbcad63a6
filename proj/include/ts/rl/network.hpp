#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ts/util/rng.hpp"

namespace ts::rl {

// Multi-head Q-network: Conv1D (kernel = stride = per-cell feature count,
// so each filter position sees exactly one cell block), ReLU; flatten and
// concatenate the time-since-handover scalar; two ReLU dense layers; linear
// head layer reshaped to (heads x actions). Defaults follow the deployed
// shape: 56+1 inputs, 32 filters, 225-wide flatten, 128/32/1400 dense,
// 200 heads x 7 actions.
struct QNetConfig {
  int n_cells = 7;
  int feats_per_cell = 8;
  int conv_filters = 32;
  int d1 = 128;
  int d2 = 32;
  int heads = 200;

  int input_len() const { return n_cells * feats_per_cell + 1; }
  int conv_out() const { return n_cells * conv_filters; }  // positions x filters
  int flatten() const { return conv_out() + 1; }
  int actions() const { return n_cells; }
  int d3_out() const { return heads * actions(); }
  size_t param_count() const {
    return static_cast<size_t>(conv_filters) * feats_per_cell + conv_filters +
           static_cast<size_t>(d1) * flatten() + d1 + static_cast<size_t>(d2) * d1 + d2 +
           static_cast<size_t>(d3_out()) * d2 + d3_out();
  }
  bool operator==(const QNetConfig&) const = default;
};

// Scratch space for one forward pass; backward() consumes it.
struct ForwardCache {
  std::vector<double> x;         // input copy (input_len)
  std::vector<double> conv_pre;  // pre-activation (conv_out)
  std::vector<double> z;         // flatten (conv_out + 1)
  std::vector<double> h1_pre, h1;
  std::vector<double> h2_pre, h2;
  std::vector<double> q;  // d3_out, row-major heads x actions
};

class QNetwork {
 public:
  QNetwork() = default;
  explicit QNetwork(const QNetConfig& cfg);

  const QNetConfig& config() const { return cfg_; }
  std::vector<double>& params() { return p_; }
  const std::vector<double>& params() const { return p_; }

  void init_zero();
  void init_he(util::Rng& rng);  // He-normal weights, zero biases

  // Q matrix for one state, row-major (heads x actions). Input length must
  // equal cfg.input_len(); throws std::invalid_argument otherwise.
  std::vector<double> forward(std::span<const double> x) const;
  void forward_cached(std::span<const double> x, ForwardCache& cache) const;

  // Accumulates parameter gradients for dL/dq into `grads` (sized
  // param_count, caller zeroes). `cache` must come from forward_cached on
  // the same parameters.
  void backward(const ForwardCache& cache, std::span<const double> dq,
                std::vector<double>& grads) const;

  // flat parameter layout offsets
  size_t off_conv_w() const { return 0; }
  size_t off_conv_b() const { return off_conv_w() + static_cast<size_t>(cfg_.conv_filters) * cfg_.feats_per_cell; }
  size_t off_w1() const { return off_conv_b() + cfg_.conv_filters; }
  size_t off_b1() const { return off_w1() + static_cast<size_t>(cfg_.d1) * cfg_.flatten(); }
  size_t off_w2() const { return off_b1() + cfg_.d1; }
  size_t off_b2() const { return off_w2() + static_cast<size_t>(cfg_.d2) * cfg_.d1; }
  size_t off_w3() const { return off_b2() + cfg_.d2; }
  size_t off_b3() const { return off_w3() + static_cast<size_t>(cfg_.d3_out()) * cfg_.d2; }

 private:
  QNetConfig cfg_;
  std::vector<double> p_;
};

// REM head mixture on the (J-1) simplex.
struct RemWeights {
  std::vector<double> alpha;

  // Throws std::invalid_argument when off the simplex beyond 1e-9.
  void validate() const;
  static RemWeights uniform(int heads);
  // Normalized independent U(0,1) draws.
  static RemWeights sample(int heads, util::Rng& rng);
};

// Q(s,a) = sum_j alpha_j Q_j(s,a); q is row-major (heads x actions).
std::vector<double> rem_combine(std::span<const double> q, int heads, int actions,
                                const RemWeights& weights);

// argmax with ties broken toward the lowest action index
int argmax_action(std::span<const double> q_values);

}  // namespace ts::rl
