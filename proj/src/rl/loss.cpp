#include "ts/rl/loss.hpp"

#include <cmath>
#include <stdexcept>

namespace ts::rl {

namespace {

std::vector<double> widen(const std::array<float, kStateLen>& s) {
  return std::vector<double>(s.begin(), s.end());
}

}  // namespace

LossBreakdown td_cql_loss(const QNetwork& online, const QNetwork& target,
                          std::span<const Transition> batch, const RemWeights& alpha,
                          const LossConfig& cfg, std::vector<double>* grads) {
  if (batch.empty()) throw std::invalid_argument("td_cql_loss: empty batch");
  const QNetConfig& nc = online.config();
  if (!(target.config() == nc)) throw std::invalid_argument("td_cql_loss: config mismatch");
  alpha.validate();
  if (alpha.alpha.size() != static_cast<size_t>(nc.heads))
    throw std::invalid_argument("td_cql_loss: alpha size != heads");
  const int A = nc.actions();
  const double inv_b = 1.0 / static_cast<double>(batch.size());

  LossBreakdown out;
  ForwardCache cache;
  std::vector<double> dq(nc.d3_out());
  for (const Transition& t : batch) {
    if (t.action >= A) throw std::invalid_argument("td_cql_loss: action out of range");
    online.forward_cached(widen(t.s), cache);
    std::vector<double> q_on = rem_combine(cache.q, nc.heads, A, alpha);

    double y;
    if (t.done) {
      y = t.reward;
    } else {
      std::vector<double> q_next = target.forward(widen(t.s_next));
      std::vector<double> combined = rem_combine(q_next, nc.heads, A, alpha);
      y = t.reward + cfg.gamma * combined[argmax_action(combined)];
    }

    double err = q_on[t.action] - y;
    out.td_loss += err * err * inv_b;

    // d(total)/d(combined Q at action a)
    std::vector<double> dc(A, 0.0);
    dc[t.action] += cfg.omega * 2.0 * err * inv_b;

    if (cfg.cql_alpha != 0.0) {
      if (cfg.cql_logsumexp) {
        double mx = q_on[argmax_action(q_on)];
        double sum = 0.0;
        for (int a = 0; a < A; ++a) sum += std::exp(q_on[a] - mx);
        double lse = mx + std::log(sum);
        out.cql_term += (lse - q_on[t.action]) * inv_b;
        for (int a = 0; a < A; ++a)
          dc[a] += cfg.cql_alpha * inv_b * std::exp(q_on[a] - mx) / sum;
      } else {
        int greedy = argmax_action(q_on);
        out.cql_term += (q_on[greedy] - q_on[t.action]) * inv_b;
        dc[greedy] += cfg.cql_alpha * inv_b;
      }
      dc[t.action] -= cfg.cql_alpha * inv_b;
    }

    if (grads) {
      for (int j = 0; j < nc.heads; ++j) {
        double aj = alpha.alpha[j];
        for (int a = 0; a < A; ++a) dq[static_cast<size_t>(j) * A + a] = aj * dc[a];
      }
      online.backward(cache, dq, *grads);
    }
  }
  out.total = cfg.omega * out.td_loss + cfg.cql_alpha * out.cql_term;
  return out;
}

LossBreakdown td_loss_rem(const QNetwork& online, const QNetwork& target,
                          std::span<const Transition> batch, const RemWeights& alpha,
                          double gamma, std::vector<double>* grads) {
  LossConfig cfg;
  cfg.gamma = gamma;
  cfg.cql_alpha = 0.0;
  return td_cql_loss(online, target, batch, alpha, cfg, grads);
}

void Adam::step(std::vector<double>& params, const std::vector<double>& grads,
                const AdamConfig& cfg) {
  if (params.size() != m_.size() || grads.size() != m_.size())
    throw std::invalid_argument("adam: size mismatch");
  if (cfg.lr <= 0.0) throw std::invalid_argument("adam: lr must be > 0");
  for (double g : grads)
    if (!std::isfinite(g)) throw std::runtime_error("adam: non-finite gradient, step aborted");

  t_ += 1;
  double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(t_));
  double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(t_));
  for (size_t i = 0; i < params.size(); ++i) {
    m_[i] = cfg.beta1 * m_[i] + (1.0 - cfg.beta1) * grads[i];
    v_[i] = cfg.beta2 * v_[i] + (1.0 - cfg.beta2) * grads[i] * grads[i];
    double m_hat = m_[i] / bc1;
    double v_hat = v_[i] / bc2;
    params[i] -= cfg.lr * m_hat / (std::sqrt(v_hat) + cfg.eps);
  }
}

}  // namespace ts::rl
