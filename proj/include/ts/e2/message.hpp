#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace ts::e2 {

// E2-lite: a compact binary stand-in for E2AP/E2SM. One frame per message:
//
//   header (22 bytes, little-endian):
//     magic   "E2LT" (4 bytes)
//     version u8 (currently 1)
//     type    u8 (1..5, see MsgType)
//     node_id u32
//     timestamp_ms u64
//     payload_len  u32
//   payload (payload_len bytes), layout fixed per type, no self-describing
//   tags; strings and lists are length-prefixed (u16).

inline constexpr uint8_t kProtocolVersion = 1;
inline constexpr char kMagic[4] = {'E', '2', 'L', 'T'};
inline constexpr size_t kHeaderSize = 22;

enum class MsgType : uint8_t {
  kSubscriptionRequest = 1,
  kSubscriptionAck = 2,
  kKpmIndication = 3,
  kRicControl = 4,
  kControlAck = 5,
};

struct SubscriptionRequest {
  uint32_t report_period_ms = 0;
  std::vector<std::string> kpm_names;
  bool operator==(const SubscriptionRequest&) const = default;
};

// Also doubles as the connection hello: an E2 node announces itself by
// sending an unsolicited SubscriptionAck right after connecting, so the
// RIC can key the connection by node_id before any subscription exists.
struct SubscriptionAck {
  bool operator==(const SubscriptionAck&) const = default;
};

struct KpmCellStats {
  uint32_t cell_id = 0;
  double prb_util_pct = 0.0;   // PRB utilization over the report window, 0..100
  uint32_t active_ues = 0;     // UEs with at least one TTI transmission
  uint32_t tb_count = 0;       // transport blocks, failed ones included
  double share_qpsk = 0.0;     // successful-TB modulation shares, sum <= 1
  double share_16qam = 0.0;
  double share_64qam = 0.0;
  bool operator==(const KpmCellStats&) const = default;
};

struct UeSinrSample {
  uint32_t cell_id = 0;
  double sinr_db = 0.0;
  bool operator==(const UeSinrSample&) const = default;
};

struct KpmUeStats {
  uint32_t ue_id = 0;
  double pdcp_throughput_bps = 0.0;  // both split-bearer legs
  std::vector<UeSinrSample> sinr_db_by_cell;  // serving + neighbors, ascending cell_id
  bool operator==(const KpmUeStats&) const = default;
};

struct KpmReport {
  uint32_t node_id = 0;
  uint64_t window_end_ms = 0;
  KpmCellStats cell;
  std::vector<KpmUeStats> ue_level;
  bool operator==(const KpmReport&) const = default;
};

struct RicControl {
  uint32_t ue_id = 0;
  uint32_t target_cell_id = 0;
  bool operator==(const RicControl&) const = default;
};

struct ControlAck {
  uint32_t ue_id = 0;
  uint32_t target_cell_id = 0;
  uint8_t executed = 0;
  bool operator==(const ControlAck&) const = default;
};

using Payload =
    std::variant<SubscriptionRequest, SubscriptionAck, KpmReport, RicControl, ControlAck>;

struct E2Message {
  uint8_t version = kProtocolVersion;
  uint32_t node_id = 0;
  uint64_t timestamp_ms = 0;
  Payload payload;

  MsgType type() const { return static_cast<MsgType>(payload.index() + 1); }
  bool operator==(const E2Message&) const = default;
};

// Simulated endpoints stamp outbound messages with Unix-epoch wall time:
// the process records current Unix time in ms at startup and adds the
// simulated time elapsed since.
inline uint64_t wall_timestamp_ms(uint64_t base_unix_ms, uint64_t sim_elapsed_ms) {
  return base_unix_ms + sim_elapsed_ms;
}

struct EndpointBinding {
  uint32_t node_id = 0;
  std::string address;
  uint16_t port = 0;  // unique per node within one deployment
  bool operator==(const EndpointBinding&) const = default;
};

}  // namespace ts::e2
