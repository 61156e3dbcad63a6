#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ts/rl/features.hpp"
#include "ts/rl/network.hpp"

namespace ts::rl {

// Versioned binary model container (magic "TSQ1"): network shape, weights,
// the normalization manifest, and the hyperparameters the run used.
struct ModelFile {
  QNetConfig cfg;
  NormalizationManifest norms;
  double gamma = 0.99;
  double lr = 5e-5;
  double cql_alpha = 1.0;
  double omega = 1.0;
  bool cql_logsumexp = false;
  uint64_t seed = 0;
  uint64_t trained_steps = 0;
  std::vector<double> params;
};

void save_model(const std::string& path, const ModelFile& model);
ModelFile load_model(const std::string& path);

QNetwork network_from_model(const ModelFile& model);

}  // namespace ts::rl
