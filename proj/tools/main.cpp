#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "ts/app/collect.hpp"
#include "ts/app/runner.hpp"
#include "ts/rl/trainer.hpp"
#include "ts/util/log.hpp"
#include "ts/util/text.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

ts::sim::SimConfig load_config(const std::string& path) {
  if (path.empty()) return ts::sim::SimConfig::low850();
  return ts::sim::SimConfig::from_json(ts::util::read_file(path));
}

std::vector<ts::sim::EventRow> read_events_csv(const std::string& path) {
  std::istringstream in(ts::util::read_file(path));
  std::string line;
  std::getline(in, line);
  std::vector<ts::sim::EventRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto f = ts::util::split(line, ',');
    if (f.size() < 4) continue;
    ts::sim::EventRow r;
    r.time_ms = std::stoull(f[0]);
    r.ue_id = static_cast<uint32_t>(std::stoul(f[1]));
    r.kind = f[2];
    r.detail = f[3];
    rows.push_back(r);
  }
  return rows;
}

void print_metrics(const std::string& policy, uint64_t seed, const ts::eval::RunMetrics& m) {
  std::cout << "policy=" << policy << " seed=" << seed
            << " mean_thpt=" << m.mean_throughput_bps / 1e6 << " Mbit/s"
            << " p10=" << m.p10_throughput_bps / 1e6 << " p95=" << m.p95_throughput_bps / 1e6
            << " handovers=" << m.total_handovers << "\n";
}

int cmd_simulate(const std::string& config_path, const std::string& policy, uint64_t seed,
                 int ues, double duration_s, const std::string& out,
                 const std::string& ric_endpoint, double report_drop_prob) {
  ts::app::RunOptions opts;
  opts.config = load_config(config_path);
  if (seed != 0) opts.config.seed = seed;
  if (ues > 0) opts.config.n_ues = ues;
  if (duration_s > 0)
    opts.config.sim_duration_ms = static_cast<uint64_t>(duration_s * 1000.0);
  if (report_drop_prob >= 0) opts.config.report_drop_prob = report_drop_prob;
  opts.policy_spec = policy;
  opts.out_dir = out;
  opts.ric_endpoint = ric_endpoint;

  auto outcome = ts::app::run_simulation(opts);
  print_metrics(policy, opts.config.seed, outcome.metrics);
  if (!outcome.manifest_path.empty()) std::cout << "manifest: " << outcome.manifest_path << "\n";
  return 0;
}

int cmd_collect(const std::vector<std::string>& runs, const std::string& out, bool no_csv) {
  ts::rl::NormalizationManifest norms;
  ts::app::RewardParams reward;
  auto stats = ts::app::collect_dataset(runs, out, norms, reward, !no_csv);
  std::cout << "collected " << stats.transitions << " transitions from " << stats.records
            << " records across " << stats.runs << " runs -> " << out << "/transitions.bin\n";
  return 0;
}

int cmd_train(const std::string& dataset, const std::string& model_out,
              const ts::rl::TrainConfig& cfg, const std::string& loss_csv) {
  auto rows = ts::rl::load_transitions_bin(dataset);
  ts::rl::NormalizationManifest norms;
  std::string loss_path = loss_csv;
  if (loss_path.empty()) {
    fs::path p(model_out);
    loss_path = p.parent_path().empty() ? "loss.csv" : (p.parent_path() / "loss.csv").string();
  }
  auto report = ts::rl::train_offline_to_files(rows, cfg, norms, model_out, loss_path);
  std::cout << "trained " << report.steps << " steps in " << report.wall_seconds << "s; "
            << "loss first-decile mean " << report.first_decile_mean_total
            << " -> last-decile mean " << report.last_decile_mean_total << "\n"
            << "model: " << model_out << "\nloss curve: " << loss_path << "\n";
  return 0;
}

int cmd_serve(const std::string& config_path, const std::string& policy,
              const std::string& listen, const std::string& out, uint64_t seed) {
  auto cfg = load_config(config_path);
  auto pos = listen.rfind(':');
  if (pos == std::string::npos) throw CLI::ValidationError("--listen must be host:port");
  std::string host = listen.substr(0, pos);
  uint16_t port = static_cast<uint16_t>(std::stoul(listen.substr(pos + 1)));

  ts::policy::PolicyParams params;
  ts::app::RicService service(ts::app::ric_config_for(cfg),
                              ts::policy::make_policy(policy, params, seed), host, port, out);
  service.start();
  std::cout << "ric listening on " << host << ":" << service.port() << " policy=" << policy
            << std::endl;
  while (true) std::this_thread::sleep_for(std::chrono::seconds(1));
  return 0;
}

int cmd_evaluate(const std::string& run_dir, const std::string& out_dir) {
  auto cfg = ts::sim::SimConfig::from_json(ts::util::read_file(run_dir + "/config.json"));
  auto ue_rows = ts::eval::read_ue_windows_csv(run_dir + "/ues.csv");
  auto cell_rows = ts::eval::read_cell_windows_csv(run_dir + "/cells.csv");
  auto events = read_events_csv(run_dir + "/events.csv");
  auto metrics = ts::eval::compute_run_metrics(ue_rows, cell_rows, events, cfg);

  std::string policy = "unknown";
  std::string manifest_path = run_dir + "/manifest.json";
  if (fs::exists(manifest_path)) {
    auto manifest = json::parse(ts::util::read_file(manifest_path));
    policy = manifest.value("policy", "unknown");
  }
  std::string dest = out_dir.empty() ? run_dir : out_dir;
  fs::create_directories(dest);
  ts::util::write_file(dest + "/metrics.csv",
                       ts::eval::metrics_csv_header() + "\n" +
                           ts::eval::metrics_csv_row(policy, cfg.seed, metrics) + "\n");
  ts::eval::write_per_ue_csv(dest + "/per_ue.csv", metrics);
  ts::eval::write_sinr_cdf_csv(dest + "/sinr_cdf.csv", metrics);
  print_metrics(policy, cfg.seed, metrics);
  return 0;
}

int cmd_compare(const std::string& config_path, const std::vector<std::string>& policies,
                const std::vector<uint64_t>& seeds, const std::string& out, int jobs) {
  if (policies.empty() || seeds.empty())
    throw CLI::ValidationError("compare needs --policies and --seeds");
  fs::create_directories(out);

  struct RunSpec {
    std::string policy;
    uint64_t seed;
    std::string dir;
  };
  std::vector<RunSpec> specs;
  for (const auto& p : policies)
    for (uint64_t s : seeds) {
      std::string label = p.substr(0, p.find(':'));
      specs.push_back({p, s, out + "/" + label + "_seed" + std::to_string(s)});
    }

  auto run_one = [&](const RunSpec& spec) {
    ts::app::RunOptions opts;
    opts.config = load_config(config_path);
    opts.config.seed = spec.seed;
    opts.policy_spec = spec.policy;
    opts.out_dir = spec.dir;
    return ts::app::run_simulation(opts).metrics;
  };

  std::vector<ts::eval::RunMetrics> results(specs.size());
  if (jobs <= 1) {
    for (size_t i = 0; i < specs.size(); ++i) results[i] = run_one(specs[i]);
  } else {
    std::vector<std::pair<size_t, std::future<ts::eval::RunMetrics>>> futs;
    size_t next = 0;
    while (next < specs.size() || !futs.empty()) {
      while (next < specs.size() && futs.size() < static_cast<size_t>(jobs)) {
        futs.emplace_back(next, std::async(std::launch::async, run_one, specs[next]));
        next++;
      }
      results[futs.front().first] = futs.front().second.get();
      futs.erase(futs.begin());
    }
  }

  std::ostringstream table;
  table << ts::eval::metrics_csv_header() << "\n";
  std::map<std::string, std::pair<double, int>> mean_by_policy;
  for (size_t i = 0; i < specs.size(); ++i) {
    table << ts::eval::metrics_csv_row(specs[i].policy, specs[i].seed, results[i]) << "\n";
    auto& acc = mean_by_policy[specs[i].policy];
    acc.first += results[i].mean_throughput_bps;
    acc.second += 1;
  }
  ts::util::write_file(out + "/compare.csv", table.str());
  std::cout << "wrote " << out << "/compare.csv\n";
  for (const auto& [policy, acc] : mean_by_policy)
    std::cout << "  " << policy << ": mean throughput " << acc.first / acc.second / 1e6
              << " Mbit/s over " << acc.second << " seeds\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"traffic-steering sandbox: EN-DC simulator + near-RT RIC + offline-RL xApp"};
  app.set_version_flag("--version", ts::app::version_string());
  app.require_subcommand(1);

  std::string config_path, policy = "rrm", out, ric_endpoint, listen = "127.0.0.1:36422";
  std::string dataset, model_out, loss_csv, run_dir;
  std::vector<std::string> runs, policies;
  std::vector<uint64_t> seeds;
  uint64_t seed = 0;
  int ues = 0, jobs = 1;
  double duration_s = 0, report_drop_prob = -1;
  bool no_csv = false;

  auto* sim = app.add_subcommand("simulate", "run one simulation under a policy");
  sim->add_option("--config", config_path, "scenario JSON (default: low850 preset)");
  sim->add_option("--policy", policy, "rrm|son1|son2|rand[:p]|rl:<model>");
  sim->add_option("--seed", seed, "override config seed");
  sim->add_option("--ues", ues, "override UE count");
  sim->add_option("--duration-s", duration_s, "override duration (seconds)");
  sim->add_option("--out", out, "output directory");
  sim->add_option("--ric", ric_endpoint, "host:port of an external RIC (split mode)");
  sim->add_option("--report-drop-prob", report_drop_prob, "drop KPM reports with this prob");

  auto* col = app.add_subcommand("collect", "build an offline dataset from run outputs");
  col->add_option("--run", runs, "run directory (repeatable)")->required();
  col->add_option("--out", out, "dataset output directory")->required();
  col->add_flag("--no-csv", no_csv, "skip the transitions.csv mirror");

  ts::rl::TrainConfig tc;
  auto* tr = app.add_subcommand("train", "offline training on a collected dataset");
  tr->add_option("--dataset", dataset, "transitions.bin path")->required();
  tr->add_option("--out", model_out, "model output path (.tsq)")->required();
  tr->add_option("--steps", tc.training_steps, "training steps");
  tr->add_option("--batch", tc.batch_size, "batch size");
  tr->add_option("--lr", tc.lr, "Adam learning rate");
  tr->add_option("--gamma", tc.loss.gamma, "discount factor");
  tr->add_option("--heads", tc.net.heads, "ensemble heads");
  tr->add_option("--cql-alpha", tc.loss.cql_alpha, "conservative term weight");
  tr->add_option("--omega", tc.loss.omega, "TD term weight");
  tr->add_flag("--cql-logsumexp", tc.loss.cql_logsumexp, "soft-max policy term");
  tr->add_option("--target-update", tc.target_update_period, "target sync period (steps)");
  tr->add_option("--min-history", tc.min_replay_history, "minimum dataset rows");
  tr->add_option("--replay-capacity", tc.replay_capacity, "newest rows kept");
  tr->add_option("--train-seed", tc.seed, "training RNG seed");
  tr->add_option("--loss-csv", loss_csv, "loss curve output (default: alongside model)");
  tr->add_option("--loss-log-every", tc.loss_log_every, "log every Nth step");

  auto* srv = app.add_subcommand("serve", "run the near-RT RIC as a standalone endpoint");
  srv->add_option("--config", config_path, "scenario JSON (node layout)");
  srv->add_option("--policy", policy, "hosted policy");
  srv->add_option("--listen", listen, "bind host:port");
  srv->add_option("--out", out, "output directory for records/logs");
  srv->add_option("--seed", seed, "policy RNG seed");

  auto* ev = app.add_subcommand("evaluate", "recompute KPI exports from a run directory");
  ev->add_option("--run", run_dir, "run directory")->required();
  ev->add_option("--out", out, "destination (default: the run directory)");

  auto* cmp = app.add_subcommand("compare", "matched-seed comparison across policies");
  cmp->add_option("--config", config_path, "scenario JSON");
  cmp->add_option("--policies", policies, "policy specs")->required()->delimiter(',');
  cmp->add_option("--seeds", seeds, "seeds")->required()->delimiter(',');
  cmp->add_option("--out", out, "output directory")->required();
  cmp->add_option("--jobs", jobs, "parallel runs");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed())
      return cmd_simulate(config_path, policy, seed, ues, duration_s, out, ric_endpoint,
                          report_drop_prob);
    if (col->parsed()) return cmd_collect(runs, out, no_csv);
    if (tr->parsed()) return cmd_train(dataset, model_out, tc, loss_csv);
    if (srv->parsed()) return cmd_serve(config_path, policy, listen, out, seed);
    if (ev->parsed()) return cmd_evaluate(run_dir, out);
    if (cmp->parsed()) return cmd_compare(config_path, policies, seeds, out, jobs);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
