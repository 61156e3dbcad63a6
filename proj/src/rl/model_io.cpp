#include "ts/rl/model_io.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

#include "ts/util/bytes.hpp"
#include "ts/util/text.hpp"

namespace ts::rl {

namespace {

constexpr char kModelMagic[4] = {'T', 'S', 'Q', '1'};
constexpr uint32_t kModelVersion = 1;

void put_scaling(std::vector<uint8_t>& out, const FeatureScaling& s) {
  util::put_f64(out, s.offset);
  util::put_f64(out, s.scale);
}

FeatureScaling get_scaling(util::ByteReader& rd) {
  FeatureScaling s;
  s.offset = rd.f64();
  s.scale = rd.f64();
  return s;
}

}  // namespace

void save_model(const std::string& path, const ModelFile& model) {
  if (model.params.size() != model.cfg.param_count())
    throw std::invalid_argument("save_model: parameter count does not match shape");
  std::vector<uint8_t> out;
  out.insert(out.end(), kModelMagic, kModelMagic + 4);
  util::put_u32(out, kModelVersion);
  util::put_u32(out, static_cast<uint32_t>(model.cfg.n_cells));
  util::put_u32(out, static_cast<uint32_t>(model.cfg.feats_per_cell));
  util::put_u32(out, static_cast<uint32_t>(model.cfg.conv_filters));
  util::put_u32(out, static_cast<uint32_t>(model.cfg.d1));
  util::put_u32(out, static_cast<uint32_t>(model.cfg.d2));
  util::put_u32(out, static_cast<uint32_t>(model.cfg.heads));
  util::put_u32(out, model.norms.version);
  put_scaling(out, model.norms.sinr);
  put_scaling(out, model.norms.prb_util);
  put_scaling(out, model.norms.active_ues);
  put_scaling(out, model.norms.tb_count);
  put_scaling(out, model.norms.share);
  put_scaling(out, model.norms.ho_cost);
  util::put_f64(out, model.norms.t_since_ho_full_scale_ms);
  util::put_f64(out, model.gamma);
  util::put_f64(out, model.lr);
  util::put_f64(out, model.cql_alpha);
  util::put_f64(out, model.omega);
  util::put_u8(out, model.cql_logsumexp ? 1 : 0);
  util::put_u64(out, model.seed);
  util::put_u64(out, model.trained_steps);
  util::put_u64(out, model.params.size());
  for (double p : model.params) util::put_f64(out, p);

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write model: " + path);
  f.write(reinterpret_cast<const char*>(out.data()), static_cast<long>(out.size()));
}

ModelFile load_model(const std::string& path) {
  std::string blob = util::read_file(path);
  std::vector<uint8_t> bytes(blob.begin(), blob.end());
  if (bytes.size() < 8 || std::memcmp(bytes.data(), kModelMagic, 4) != 0)
    throw std::runtime_error("not a TSQ1 model file: " + path);
  util::ByteReader rd(std::span<const uint8_t>(bytes.data() + 4, bytes.size() - 4));
  uint32_t version = rd.u32();
  if (version != kModelVersion)
    throw std::runtime_error("unsupported model version " + std::to_string(version));

  ModelFile m;
  m.cfg.n_cells = static_cast<int>(rd.u32());
  m.cfg.feats_per_cell = static_cast<int>(rd.u32());
  m.cfg.conv_filters = static_cast<int>(rd.u32());
  m.cfg.d1 = static_cast<int>(rd.u32());
  m.cfg.d2 = static_cast<int>(rd.u32());
  m.cfg.heads = static_cast<int>(rd.u32());
  m.norms.version = rd.u32();
  m.norms.sinr = get_scaling(rd);
  m.norms.prb_util = get_scaling(rd);
  m.norms.active_ues = get_scaling(rd);
  m.norms.tb_count = get_scaling(rd);
  m.norms.share = get_scaling(rd);
  m.norms.ho_cost = get_scaling(rd);
  m.norms.t_since_ho_full_scale_ms = rd.f64();
  m.gamma = rd.f64();
  m.lr = rd.f64();
  m.cql_alpha = rd.f64();
  m.omega = rd.f64();
  m.cql_logsumexp = rd.u8() != 0;
  m.seed = rd.u64();
  m.trained_steps = rd.u64();
  uint64_t n = rd.u64();
  if (!rd.ok() || n != m.cfg.param_count())
    throw std::runtime_error("model file corrupt: parameter count mismatch");
  m.params.resize(n);
  for (double& p : m.params) p = rd.f64();
  if (!rd.ok()) throw std::runtime_error("model file truncated: " + path);
  return m;
}

QNetwork network_from_model(const ModelFile& model) {
  QNetwork net(model.cfg);
  net.params() = model.params;
  return net;
}

}  // namespace ts::rl
