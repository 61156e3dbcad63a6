#pragma once

#include <span>
#include <vector>

#include "ts/rl/dataset.hpp"
#include "ts/rl/network.hpp"

namespace ts::rl {

struct LossConfig {
  double gamma = 0.99;
  double cql_alpha = 1.0;  // weight of the conservative term
  double omega = 1.0;      // weight of the TD term
  bool cql_logsumexp = false;  // soft-max variant of the policy term
};

struct LossBreakdown {
  double td_loss = 0.0;   // mean squared REM TD error over the batch
  double cql_term = 0.0;  // mean (max_a Q(s,a) - Q(s, a_data))
  double total = 0.0;     // omega * td_loss + cql_alpha * cql_term
};

// REM TD loss plus the conservative regularizer on one batch, with analytic
// gradients w.r.t. the online parameters (target parameters fixed). `grads`,
// when given, must be zeroed and sized online.params().size(); gradients are
// accumulated into it.
LossBreakdown td_cql_loss(const QNetwork& online, const QNetwork& target,
                          std::span<const Transition> batch, const RemWeights& alpha,
                          const LossConfig& cfg, std::vector<double>* grads);

// TD-only view (cql_alpha = 0), the plain multi-head DQN objective.
LossBreakdown td_loss_rem(const QNetwork& online, const QNetwork& target,
                          std::span<const Transition> batch, const RemWeights& alpha,
                          double gamma, std::vector<double>* grads);

// Adam with bias correction; aborts (throws std::runtime_error) on a
// non-finite gradient so a diverging run fails loudly.
struct AdamConfig {
  double lr = 5e-5;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

class Adam {
 public:
  explicit Adam(size_t n_params) : m_(n_params, 0.0), v_(n_params, 0.0) {}

  void step(std::vector<double>& params, const std::vector<double>& grads,
            const AdamConfig& cfg);
  uint64_t steps_taken() const { return t_; }

 private:
  std::vector<double> m_, v_;
  uint64_t t_ = 0;
};

}  // namespace ts::rl
