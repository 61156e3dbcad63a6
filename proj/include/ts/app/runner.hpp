#pragma once

#include <atomic>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "ts/e2/transport.hpp"
#include "ts/eval/metrics.hpp"
#include "ts/policy/policy.hpp"
#include "ts/ric/service.hpp"
#include "ts/sim/config.hpp"

namespace ts::app {

struct RunOptions {
  sim::SimConfig config;
  std::string policy_spec = "rrm";
  policy::PolicyParams policy_params;
  std::string out_dir;       // empty: keep results in memory only
  std::string ric_endpoint;  // "host:port" connects to an external RIC (split
                             // mode); empty runs the RIC embedded in-process
};

struct RunOutcome {
  eval::RunMetrics metrics;
  ric::EtlCounters etl;
  uint64_t dispatches = 0;
  uint64_t controls = 0;
  uint64_t records_written = 0;
  ric::LatencyStats latency;
  uint64_t kpm_frames = 0;
  std::string kpm_stream_fnv;
  std::string manifest_path;
  std::vector<eval::UeWindowRow> ue_rows;
  std::vector<eval::CellWindowRow> cell_rows;
  std::vector<sim::EventRow> events;
};

// Runs one simulation to sim_duration_ms under the chosen policy, with the
// RIC either embedded (in-memory streams) or remote (TCP loopback). The
// frame bytes on the wire are identical in both modes.
RunOutcome run_simulation(const RunOptions& opts);

// Standalone RIC endpoint for split-mode deployments: accepts one TCP
// connection per E2 node, keyed by the node's hello frame.
class RicService {
 public:
  RicService(const ric::RicConfig& config, std::unique_ptr<policy::Policy> policy,
             const std::string& bind_addr, uint16_t port, const std::string& out_dir);
  ~RicService();

  void start();
  void stop();  // flushes pending windows and writes outputs
  uint16_t port() const;
  uint64_t dispatches() const { return core_dispatches_.load(); }
  uint64_t controls() const { return core_controls_.load(); }

 private:
  void loop();

  ric::RicConfig config_;
  std::unique_ptr<policy::Policy> policy_;
  std::unique_ptr<ric::RicCore> core_;
  std::unique_ptr<e2::TcpServer> server_;
  std::string out_dir_;
  std::thread thread_;
  std::atomic<bool> running_{false};
  std::atomic<uint64_t> core_dispatches_{0};
  std::atomic<uint64_t> core_controls_{0};
};

ric::RicConfig ric_config_for(const sim::SimConfig& sim_config);

std::string version_string();

}  // namespace ts::app
