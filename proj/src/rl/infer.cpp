#include "ts/rl/infer.hpp"

#include "ts/rl/model_io.hpp"
#include "ts/util/log.hpp"

namespace ts::rl {

policy::PolicyDecision act_online(const QNetwork& net, const NormalizationManifest& norms,
                                  const ric::UeStateRecord& record) {
  using policy::PolicyDecision;
  using policy::Reason;
  try {
    std::vector<double> x = encode_state(record, norms);
    std::vector<double> q = net.forward(x);
    const QNetConfig& cfg = net.config();
    std::vector<double> combined =
        rem_combine(q, cfg.heads, cfg.actions(), RemWeights::uniform(cfg.heads));
    int action = argmax_action(combined);
    uint32_t target = record.per_cell[static_cast<size_t>(action)].cell_id;
    if (target == record.serving_cell_id)
      return {record.ue_id, record.serving_cell_id, Reason::kNoOp};
    return {record.ue_id, target, Reason::kRlGreedy};
  } catch (const std::exception& e) {
    TS_LOG_WARN("rl inference failed for ue %u: %s", record.ue_id, e.what());
    return {record.ue_id, record.serving_cell_id, Reason::kNoOp};
  }
}

namespace {

class RlPolicy final : public policy::Policy {
 public:
  explicit RlPolicy(const std::string& model_path) {
    ModelFile m = load_model(model_path);
    net_ = network_from_model(m);
    norms_ = m.norms;
  }
  const char* name() const override { return "rl"; }

  policy::PolicyDecision decide(const ric::UeStateRecord& record, uint64_t) override {
    return act_online(net_, norms_, record);
  }

 private:
  QNetwork net_;
  NormalizationManifest norms_;
};

}  // namespace

}  // namespace ts::rl

namespace ts::policy {

std::unique_ptr<Policy> make_policy(const std::string& spec, const PolicyParams& params,
                                    uint64_t seed) {
  if (spec == "rrm") return make_rrm(params);
  if (spec == "son1") return make_son1(params);
  if (spec == "son2") return make_son2(params);
  if (spec == "rand") return make_random(0.1, seed);
  if (spec.rfind("rand:", 0) == 0) return make_random(std::stod(spec.substr(5)), seed);
  if (spec.rfind("rl:", 0) == 0) {
    std::string path = spec.substr(3);
    if (path.empty()) throw std::invalid_argument("policy 'rl:' needs a model path");
    return std::make_unique<rl::RlPolicy>(path);
  }
  throw std::invalid_argument("unknown policy '" + spec +
                              "' (expected rrm|son1|son2|rand[:p]|rl:<model-path>)");
}

}  // namespace ts::policy
