#include "ts/app/runner.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "ts/e2/codec.hpp"
#include "ts/util/log.hpp"
#include "ts/util/rng.hpp"
#include "ts/util/text.hpp"

namespace ts::app {

namespace fs = std::filesystem;
using nlohmann::json;

#ifndef TSSANDBOX_VERSION
#define TSSANDBOX_VERSION "v0.0.0-unknown"
#endif

std::string version_string() { return TSSANDBOX_VERSION; }

ric::RicConfig ric_config_for(const sim::SimConfig& sim_config) {
  ric::RicConfig rc;
  for (int i = 0; i <= sim_config.n_nr_cells; ++i)  // NR cells + the LTE node
    rc.node_ids.push_back(static_cast<uint32_t>(i));
  for (int i = 0; i < sim_config.n_nr_cells; ++i)
    rc.nr_cell_ids.push_back(static_cast<uint32_t>(i));
  rc.report_period_ms = sim_config.report_period_ms;
  rc.etl.report_period_ms = sim_config.report_period_ms;
  return rc;
}

namespace {

// Simulator-side E2 termination for one node: owns the connection, answers
// subscriptions, streams indications, and applies inbound controls.
struct NodeAgent {
  uint32_t node_id = 0;
  std::unique_ptr<e2::ByteChannel> channel;
  e2::FrameReader reader;
  bool subscribed = false;
};

struct ControlToApply {
  uint32_t node_id = 0;
  e2::RicControl control;
};

void pump_node(NodeAgent& node, sim::World& world, uint64_t base_unix_ms,
               std::vector<ControlToApply>* pending_controls) {
  std::vector<uint8_t> buf;
  node.channel->drain(buf);
  node.reader.feed(buf);
  while (auto msg = node.reader.poll()) {
    uint64_t now = e2::wall_timestamp_ms(base_unix_ms, world.time_ms());
    if (std::holds_alternative<e2::SubscriptionRequest>(msg->payload)) {
      node.subscribed = true;
      e2::E2Message ack;
      ack.node_id = node.node_id;
      ack.timestamp_ms = now;
      ack.payload = e2::SubscriptionAck{};
      node.channel->send(e2::encode_message(ack));
    } else if (std::holds_alternative<e2::RicControl>(msg->payload)) {
      pending_controls->push_back({node.node_id, std::get<e2::RicControl>(msg->payload)});
    }
  }
  if (node.reader.has_error())
    throw std::runtime_error("node " + std::to_string(node.node_id) + " stream error: " +
                             e2::decode_status_name(node.reader.error()));
}

void apply_controls(std::vector<ControlToApply>& pending, sim::World& world,
                    uint64_t base_unix_ms, std::vector<NodeAgent>& nodes) {
  for (const auto& c : pending) {
    bool executed = false;
    try {
      executed = world.execute_handover(c.control.ue_id, c.control.target_cell_id);
    } catch (const std::exception& e) {
      TS_LOG_WARN("handover rejected: %s", e.what());
    }
    for (auto& node : nodes) {
      if (node.node_id != c.node_id) continue;
      e2::E2Message ack;
      ack.node_id = node.node_id;
      ack.timestamp_ms = e2::wall_timestamp_ms(base_unix_ms, world.time_ms());
      ack.payload = e2::ControlAck{c.control.ue_id, c.control.target_cell_id,
                                   static_cast<uint8_t>(executed ? 1 : 0)};
      node.channel->send(e2::encode_message(ack));
    }
  }
  pending.clear();
}

struct EmbeddedRic {
  std::unique_ptr<policy::Policy> policy;
  std::unique_ptr<ric::RicCore> core;
  // one reader per node connection (port-keyed demultiplexing)
  std::map<uint32_t, std::unique_ptr<e2::ByteChannel>> channels;
  std::map<uint32_t, e2::FrameReader> readers;

  void pump() {
    for (auto& [node_id, ch] : channels) {
      std::vector<uint8_t> buf;
      ch->drain(buf);
      auto& reader = readers[node_id];
      reader.feed(buf);
      while (auto msg = reader.poll()) {
        // endpoint isolation: attribution comes from the connection, and the
        // header must agree
        if (msg->node_id != node_id)
          throw std::runtime_error("message from node " + std::to_string(msg->node_id) +
                                   " on connection of node " + std::to_string(node_id));
        for (auto& outbound : core->on_message(*msg))
          channels.at(outbound.node_id)->send(e2::encode_message(outbound.msg));
      }
      if (reader.has_error())
        throw std::runtime_error("ric stream error on node " + std::to_string(node_id) + ": " +
                                 e2::decode_status_name(reader.error()));
    }
  }
};

std::pair<std::string, uint16_t> parse_endpoint(const std::string& endpoint) {
  auto pos = endpoint.rfind(':');
  if (pos == std::string::npos)
    throw std::invalid_argument("ric endpoint must be host:port, got " + endpoint);
  return {endpoint.substr(0, pos), static_cast<uint16_t>(std::stoul(endpoint.substr(pos + 1)))};
}

}  // namespace

RunOutcome run_simulation(const RunOptions& opts) {
  opts.config.validate();
  const sim::SimConfig& cfg = opts.config;
  uint64_t base_unix_ms = cfg.base_unix_ms;
  if (base_unix_ms == 0)
    base_unix_ms = static_cast<uint64_t>(
        std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::system_clock::now().time_since_epoch())
            .count());

  bool embedded = opts.ric_endpoint.empty();
  std::string out_dir = opts.out_dir;
  if (!out_dir.empty()) fs::create_directories(out_dir);

  // fail fast on an unresolvable policy before any output is produced
  ric::RicConfig ric_cfg = ric_config_for(cfg);
  EmbeddedRic ric;
  if (embedded) {
    ric.policy = policy::make_policy(opts.policy_spec, opts.policy_params, cfg.seed);
    ric.core = std::make_unique<ric::RicCore>(ric_cfg, ric.policy.get());
  }

  sim::World world(cfg);

  std::vector<NodeAgent> nodes;
  for (uint32_t node_id : ric_cfg.node_ids) {
    NodeAgent agent;
    agent.node_id = node_id;
    if (embedded) {
      auto [node_side, ric_side] = e2::make_in_memory_pair();
      agent.channel = std::move(node_side);
      ric.channels[node_id] = std::move(ric_side);
    } else {
      auto [host, port] = parse_endpoint(opts.ric_endpoint);
      agent.channel = std::make_unique<e2::TcpChannel>(host, port);
    }
    nodes.push_back(std::move(agent));
  }

  // file sinks
  std::ofstream records_file, log_file;
  uint64_t records_written = 0;
  if (embedded) {
    if (!out_dir.empty()) {
      records_file.open(out_dir + "/records.csv", std::ios::trunc);
      records_file << ric::record_csv_header() << '\n';
      log_file.open(out_dir + "/ric_log.jsonl", std::ios::trunc);
    }
    ric.core->set_record_sink([&](const ric::DispatchEvent& ev) {
      records_written++;
      if (records_file.is_open())
        records_file << ric::record_csv_row(ev.record, ev.decision.target_cell_id,
                                            ev.control_sent)
                     << '\n';
    });
    ric.core->set_log_sink([&](const std::string& line) {
      if (log_file.is_open()) log_file << line << '\n';
    });
  }

  // hello: every node announces its endpoint binding
  for (auto& node : nodes) {
    e2::E2Message hello;
    hello.node_id = node.node_id;
    hello.timestamp_ms = e2::wall_timestamp_ms(base_unix_ms, 0);
    hello.payload = e2::SubscriptionAck{};
    node.channel->send(e2::encode_message(hello));
  }

  std::vector<ControlToApply> pending_controls;
  auto pump_all = [&] {
    if (embedded) ric.pump();
    for (auto& node : nodes) pump_node(node, world, base_unix_ms, &pending_controls);
  };
  pump_all();  // subscription handshake
  if (!embedded) {
    // give the remote RIC a moment to answer the hellos
    for (int i = 0; i < 200 && !std::ranges::all_of(nodes, [](const NodeAgent& n) {
                      return n.subscribed;
                    });
         ++i) {
      std::this_thread::sleep_for(std::chrono::milliseconds(5));
      pump_all();
    }
  }

  RunOutcome outcome;
  uint64_t stream_fnv = 0xcbf29ce484222325ull;
  auto fnv_mix = [&stream_fnv](const std::vector<uint8_t>& bytes) {
    for (uint8_t b : bytes) {
      stream_fnv ^= b;
      stream_fnv *= 0x100000001b3ull;
    }
  };

  const uint32_t slots = cfg.slots_per_window();
  const uint64_t n_windows = cfg.n_windows();
  for (uint64_t w = 0; w < n_windows; ++w) {
    apply_controls(pending_controls, world, base_unix_ms, nodes);
    for (uint32_t s = 0; s < slots; ++s) world.step();

    const sim::WindowStats& ws = world.last_window();
    for (const auto& uw : ws.ues)
      outcome.ue_rows.push_back({ws.window_end_ms, uw.ue_id, uw.serving_cell, uw.bits_nr,
                                 uw.bits_lte, uw.sinr_serving_db});
    for (const auto& cs : ws.cells)
      outcome.cell_rows.push_back({ws.window_end_ms, cs.cell_id,
                                   cs.counters.prb_util_pct(cs.n_prb, cs.slots),
                                   cs.counters.bits_served,
                                   static_cast<uint32_t>(cs.counters.active_ues.size()),
                                   cs.counters.tb_count});

    for (auto& node : nodes) {
      if (!node.subscribed) continue;
      if (cfg.report_drop_prob > 0.0 &&
          util::keyed_uniform01(cfg.seed, util::Stream::kReportLoss, w, node.node_id) <
              cfg.report_drop_prob)
        continue;
      e2::E2Message ind;
      ind.node_id = node.node_id;
      ind.timestamp_ms = e2::wall_timestamp_ms(base_unix_ms, world.time_ms());
      ind.payload = world.generate_kpm_report(node.node_id, world.time_ms());
      auto bytes = e2::encode_message(ind);
      fnv_mix(bytes);
      outcome.kpm_frames++;
      node.channel->send(bytes);
    }
    pump_all();
    if (!embedded) {
      // drain the loopback: the remote dispatcher answers asynchronously
      std::this_thread::sleep_for(std::chrono::microseconds(200));
      pump_all();
    }
  }
  apply_controls(pending_controls, world, base_unix_ms, nodes);
  if (embedded) {
    for (auto& outbound : ric.core->flush_all())
      ric.channels.at(outbound.node_id)->send(e2::encode_message(outbound.msg));
    pump_all();
    apply_controls(pending_controls, world, base_unix_ms, nodes);
  }

  char fnv_hex[20];
  std::snprintf(fnv_hex, sizeof(fnv_hex), "%016llx",
                static_cast<unsigned long long>(stream_fnv));
  outcome.kpm_stream_fnv = fnv_hex;
  outcome.events = world.events();
  outcome.metrics = eval::compute_run_metrics(outcome.ue_rows, outcome.cell_rows,
                                              outcome.events, cfg);
  if (embedded) {
    outcome.etl = ric.core->etl_counters();
    outcome.dispatches = ric.core->dispatch_count();
    outcome.controls = ric.core->control_count();
    outcome.latency = ric.core->latency();
  }
  outcome.records_written = records_written;
  if (records_file.is_open()) records_file.close();
  if (log_file.is_open()) log_file.close();

  if (!out_dir.empty()) {
    util::write_file(out_dir + "/config.json", cfg.to_json() + "\n");
    {
      std::ostringstream ev;
      ev << "time_ms,ue_id,event_kind,detail\n";
      for (const auto& e : outcome.events)
        ev << e.time_ms << ',' << e.ue_id << ',' << e.kind << ',' << e.detail << '\n';
      util::write_file(out_dir + "/events.csv", ev.str());
    }
    eval::write_ue_windows_csv(out_dir + "/ues.csv", outcome.ue_rows);
    eval::write_cell_windows_csv(out_dir + "/cells.csv", outcome.cell_rows);
    util::write_file(out_dir + "/metrics.csv", eval::metrics_csv_header() + "\n" +
                                                   eval::metrics_csv_row(opts.policy_spec,
                                                                         cfg.seed,
                                                                         outcome.metrics) +
                                                   "\n");
    eval::write_per_ue_csv(out_dir + "/per_ue.csv", outcome.metrics);
    eval::write_sinr_cdf_csv(out_dir + "/sinr_cdf.csv", outcome.metrics);

    json manifest;
    manifest["version"] = version_string();
    manifest["policy"] = opts.policy_spec;
    manifest["seed"] = cfg.seed;
    manifest["out_dir"] = out_dir;
    manifest["base_unix_ms"] = base_unix_ms;
    manifest["mode"] = embedded ? "embedded" : "split";
    manifest["config"] = json::parse(cfg.to_json());
    manifest["kpm_frames"] = outcome.kpm_frames;
    manifest["kpm_stream_fnv"] = outcome.kpm_stream_fnv;
    manifest["dispatches"] = outcome.dispatches;
    manifest["controls"] = outcome.controls;
    manifest["records_written"] = outcome.records_written;
    manifest["etl"] = {{"reports", outcome.etl.reports_ingested},
                       {"records_built", outcome.etl.records_built},
                       {"records_dropped", outcome.etl.records_dropped},
                       {"fields_filled", outcome.etl.fields_filled}};
    manifest["control_latency_us"] = {{"count", outcome.latency.count},
                                      {"mean", outcome.latency.mean_us()},
                                      {"max", outcome.latency.max_us}};
    json files = json::object();
    for (const char* name : {"config.json", "events.csv", "ues.csv", "cells.csv", "metrics.csv",
                             "per_ue.csv", "sinr_cdf.csv", "records.csv", "ric_log.jsonl"}) {
      std::string path = out_dir + "/" + name;
      if (fs::exists(path)) files[name] = util::file_checksum(path);
    }
    manifest["files"] = files;
    outcome.manifest_path = out_dir + "/manifest.json";
    util::write_file(outcome.manifest_path, manifest.dump(2) + "\n");
  }
  return outcome;
}

RicService::RicService(const ric::RicConfig& config, std::unique_ptr<policy::Policy> policy,
                       const std::string& bind_addr, uint16_t port, const std::string& out_dir)
    : config_(config), policy_(std::move(policy)), out_dir_(out_dir) {
  core_ = std::make_unique<ric::RicCore>(config_, policy_.get());
  server_ = std::make_unique<e2::TcpServer>(bind_addr, port);
}

RicService::~RicService() { stop(); }

uint16_t RicService::port() const { return server_ ? server_->port() : 0; }

void RicService::start() {
  if (running_.exchange(true)) return;
  thread_ = std::thread([this] { loop(); });
}

void RicService::loop() {
  struct Conn {
    std::unique_ptr<e2::TcpChannel> channel;
    e2::FrameReader reader;
    std::optional<uint32_t> node_id;
  };
  std::vector<Conn> conns;
  std::map<uint32_t, size_t> by_node;

  std::ofstream records_file, log_file;
  if (!out_dir_.empty()) {
    fs::create_directories(out_dir_);
    records_file.open(out_dir_ + "/records.csv", std::ios::trunc);
    records_file << ric::record_csv_header() << '\n';
    log_file.open(out_dir_ + "/ric_log.jsonl", std::ios::trunc);
  }
  core_->set_record_sink([&](const ric::DispatchEvent& ev) {
    if (records_file.is_open())
      records_file << ric::record_csv_row(ev.record, ev.decision.target_cell_id, ev.control_sent)
                   << '\n';
  });
  core_->set_log_sink([&](const std::string& line) {
    if (log_file.is_open()) log_file << line << '\n';
  });

  auto route = [&](const std::vector<ric::Outbound>& outs) {
    for (const auto& o : outs) {
      auto it = by_node.find(o.node_id);
      if (it != by_node.end())
        conns[it->second].channel->send(e2::encode_message(o.msg));
    }
  };

  while (running_.load()) {
    bool idle = true;
    while (auto conn = server_->accept()) {
      conns.push_back({std::move(conn), {}, std::nullopt});
      idle = false;
    }
    for (size_t i = 0; i < conns.size(); ++i) {
      auto& c = conns[i];
      if (!c.channel || c.channel->closed()) continue;
      std::vector<uint8_t> buf;
      if (c.channel->drain(buf) > 0) idle = false;
      c.reader.feed(buf);
      while (auto msg = c.reader.poll()) {
        if (!c.node_id) {
          c.node_id = msg->node_id;
          by_node[msg->node_id] = i;
        }
        route(core_->on_message(*msg));
        core_dispatches_.store(core_->dispatch_count());
        core_controls_.store(core_->control_count());
      }
      if (c.reader.has_error()) {
        TS_LOG_WARN("ric service: dropping connection with stream error: %s",
                    e2::decode_status_name(c.reader.error()));
        c.channel->close();
      }
    }
    if (idle) std::this_thread::sleep_for(std::chrono::microseconds(200));
  }
  route(core_->flush_all());
  core_dispatches_.store(core_->dispatch_count());
  core_controls_.store(core_->control_count());

  if (!out_dir_.empty()) {
    json summary;
    summary["dispatches"] = core_->dispatch_count();
    summary["controls"] = core_->control_count();
    summary["records_dropped"] = core_->etl_counters().records_dropped;
    summary["control_latency_us"] = {{"count", core_->latency().count},
                                     {"mean", core_->latency().mean_us()},
                                     {"max", core_->latency().max_us}};
    util::write_file(out_dir_ + "/ric_summary.json", summary.dump(2) + "\n");
  }
}

void RicService::stop() {
  if (!running_.exchange(false)) return;
  if (thread_.joinable()) thread_.join();
  if (server_) server_->close();
}

}  // namespace ts::app
