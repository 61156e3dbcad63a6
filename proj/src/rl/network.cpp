#include "ts/rl/network.hpp"

#include <cmath>
#include <stdexcept>

namespace ts::rl {

QNetwork::QNetwork(const QNetConfig& cfg) : cfg_(cfg), p_(cfg.param_count(), 0.0) {}

void QNetwork::init_zero() { std::fill(p_.begin(), p_.end(), 0.0); }

void QNetwork::init_he(util::Rng& rng) {
  init_zero();
  auto fill = [this, &rng](size_t off, size_t count, int fan_in) {
    double stddev = std::sqrt(2.0 / fan_in);
    for (size_t i = 0; i < count; ++i) p_[off + i] = rng.normal(0.0, stddev);
  };
  fill(off_conv_w(), static_cast<size_t>(cfg_.conv_filters) * cfg_.feats_per_cell,
       cfg_.feats_per_cell);
  fill(off_w1(), static_cast<size_t>(cfg_.d1) * cfg_.flatten(), cfg_.flatten());
  fill(off_w2(), static_cast<size_t>(cfg_.d2) * cfg_.d1, cfg_.d1);
  fill(off_w3(), static_cast<size_t>(cfg_.d3_out()) * cfg_.d2, cfg_.d2);
}

void QNetwork::forward_cached(std::span<const double> x, ForwardCache& c) const {
  const int K = cfg_.feats_per_cell;
  const int F = cfg_.conv_filters;
  const int P = cfg_.n_cells;  // conv positions, stride == kernel
  if (x.size() != static_cast<size_t>(cfg_.input_len()))
    throw std::invalid_argument("forward: input length " + std::to_string(x.size()) +
                                ", expected " + std::to_string(cfg_.input_len()));

  c.x.assign(x.begin(), x.end());
  c.conv_pre.assign(cfg_.conv_out(), 0.0);
  c.z.assign(cfg_.flatten(), 0.0);

  const double* conv_w = p_.data() + off_conv_w();
  const double* conv_b = p_.data() + off_conv_b();
  for (int p = 0; p < P; ++p) {
    const double* xin = x.data() + static_cast<size_t>(p) * K;
    for (int f = 0; f < F; ++f) {
      const double* w = conv_w + static_cast<size_t>(f) * K;
      double acc = conv_b[f];
      for (int k = 0; k < K; ++k) acc += w[k] * xin[k];
      c.conv_pre[static_cast<size_t>(p) * F + f] = acc;
      c.z[static_cast<size_t>(p) * F + f] = acc > 0.0 ? acc : 0.0;
    }
  }
  c.z[cfg_.conv_out()] = x[static_cast<size_t>(cfg_.input_len()) - 1];

  auto dense = [](const double* w, const double* b, const std::vector<double>& in,
                  std::vector<double>& pre, std::vector<double>& act, int n_out, bool relu) {
    pre.assign(n_out, 0.0);
    const size_t n_in = in.size();
    for (int i = 0; i < n_out; ++i) {
      const double* wr = w + static_cast<size_t>(i) * n_in;
      double acc = b[i];
      for (size_t j = 0; j < n_in; ++j) acc += wr[j] * in[j];
      pre[i] = acc;
    }
    if (relu) {
      act.assign(n_out, 0.0);
      for (int i = 0; i < n_out; ++i) act[i] = pre[i] > 0.0 ? pre[i] : 0.0;
    }
  };

  dense(p_.data() + off_w1(), p_.data() + off_b1(), c.z, c.h1_pre, c.h1, cfg_.d1, true);
  dense(p_.data() + off_w2(), p_.data() + off_b2(), c.h1, c.h2_pre, c.h2, cfg_.d2, true);
  std::vector<double> unused;
  dense(p_.data() + off_w3(), p_.data() + off_b3(), c.h2, c.q, unused, cfg_.d3_out(), false);
}

std::vector<double> QNetwork::forward(std::span<const double> x) const {
  ForwardCache c;
  forward_cached(x, c);
  return c.q;
}

void QNetwork::backward(const ForwardCache& c, std::span<const double> dq,
                        std::vector<double>& grads) const {
  const int K = cfg_.feats_per_cell;
  const int F = cfg_.conv_filters;
  const int P = cfg_.n_cells;
  if (dq.size() != static_cast<size_t>(cfg_.d3_out()))
    throw std::invalid_argument("backward: dq size mismatch");
  if (grads.size() != p_.size()) throw std::invalid_argument("backward: grads size mismatch");

  // dense3 (linear)
  std::vector<double> dh2(cfg_.d2, 0.0);
  {
    double* gw = grads.data() + off_w3();
    double* gb = grads.data() + off_b3();
    const double* w = p_.data() + off_w3();
    for (int o = 0; o < cfg_.d3_out(); ++o) {
      double d = dq[o];
      if (d == 0.0) continue;
      gb[o] += d;
      double* gwr = gw + static_cast<size_t>(o) * cfg_.d2;
      const double* wr = w + static_cast<size_t>(o) * cfg_.d2;
      for (int i = 0; i < cfg_.d2; ++i) {
        gwr[i] += d * c.h2[i];
        dh2[i] += d * wr[i];
      }
    }
  }

  // dense2 (ReLU)
  std::vector<double> dh1(cfg_.d1, 0.0);
  {
    double* gw = grads.data() + off_w2();
    double* gb = grads.data() + off_b2();
    const double* w = p_.data() + off_w2();
    for (int o = 0; o < cfg_.d2; ++o) {
      double d = c.h2_pre[o] > 0.0 ? dh2[o] : 0.0;
      if (d == 0.0) continue;
      gb[o] += d;
      double* gwr = gw + static_cast<size_t>(o) * cfg_.d1;
      const double* wr = w + static_cast<size_t>(o) * cfg_.d1;
      for (int i = 0; i < cfg_.d1; ++i) {
        gwr[i] += d * c.h1[i];
        dh1[i] += d * wr[i];
      }
    }
  }

  // dense1 (ReLU)
  std::vector<double> dz(cfg_.flatten(), 0.0);
  {
    double* gw = grads.data() + off_w1();
    double* gb = grads.data() + off_b1();
    const double* w = p_.data() + off_w1();
    const int n_in = cfg_.flatten();
    for (int o = 0; o < cfg_.d1; ++o) {
      double d = c.h1_pre[o] > 0.0 ? dh1[o] : 0.0;
      if (d == 0.0) continue;
      gb[o] += d;
      double* gwr = gw + static_cast<size_t>(o) * n_in;
      const double* wr = w + static_cast<size_t>(o) * n_in;
      for (int i = 0; i < n_in; ++i) {
        gwr[i] += d * c.z[i];
        dz[i] += d * wr[i];
      }
    }
  }

  // conv (ReLU); dz beyond conv_out belongs to the bypassed scalar input
  {
    double* gw = grads.data() + off_conv_w();
    double* gb = grads.data() + off_conv_b();
    for (int p = 0; p < P; ++p) {
      const double* xin = c.x.data() + static_cast<size_t>(p) * K;
      for (int f = 0; f < F; ++f) {
        size_t idx = static_cast<size_t>(p) * F + f;
        double d = c.conv_pre[idx] > 0.0 ? dz[idx] : 0.0;
        if (d == 0.0) continue;
        gb[f] += d;
        double* gwr = gw + static_cast<size_t>(f) * K;
        for (int k = 0; k < K; ++k) gwr[k] += d * xin[k];
      }
    }
  }
}

void RemWeights::validate() const {
  if (alpha.empty()) throw std::invalid_argument("REM weights: empty");
  double sum = 0.0;
  for (double a : alpha) {
    if (a < -1e-12) throw std::invalid_argument("REM weights: negative component");
    sum += a;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("REM weights: sum " + std::to_string(sum) + " off the simplex");
}

RemWeights RemWeights::uniform(int heads) {
  RemWeights w;
  w.alpha.assign(heads, 1.0 / heads);
  return w;
}

RemWeights RemWeights::sample(int heads, util::Rng& rng) {
  RemWeights w;
  w.alpha.resize(heads);
  double sum = 0.0;
  for (int j = 0; j < heads; ++j) {
    w.alpha[j] = rng.uniform01() + 1e-12;
    sum += w.alpha[j];
  }
  for (double& a : w.alpha) a /= sum;
  return w;
}

std::vector<double> rem_combine(std::span<const double> q, int heads, int actions,
                                const RemWeights& weights) {
  if (q.size() != static_cast<size_t>(heads) * actions)
    throw std::invalid_argument("rem_combine: q size mismatch");
  if (weights.alpha.size() != static_cast<size_t>(heads))
    throw std::invalid_argument("rem_combine: weight count mismatch");
  weights.validate();
  std::vector<double> out(actions, 0.0);
  for (int j = 0; j < heads; ++j) {
    double a_j = weights.alpha[j];
    const double* row = q.data() + static_cast<size_t>(j) * actions;
    for (int a = 0; a < actions; ++a) out[a] += a_j * row[a];
  }
  return out;
}

int argmax_action(std::span<const double> q_values) {
  int best = 0;
  for (int a = 1; a < static_cast<int>(q_values.size()); ++a)
    if (q_values[a] > q_values[best]) best = a;
  return best;
}

}  // namespace ts::rl
