#include "ts/e2/codec.hpp"

#include <cstring>
#include <limits>
#include <stdexcept>

#include "ts/util/bytes.hpp"

namespace ts::e2 {

using util::ByteReader;

const char* decode_status_name(DecodeStatus s) {
  switch (s) {
    case DecodeStatus::kOk: return "ok";
    case DecodeStatus::kBadMagic: return "bad_magic";
    case DecodeStatus::kBadVersion: return "bad_version";
    case DecodeStatus::kBadType: return "bad_type";
    case DecodeStatus::kTruncated: return "truncated";
    case DecodeStatus::kLengthMismatch: return "length_mismatch";
  }
  return "unknown";
}

namespace {

void encode_payload(const SubscriptionRequest& p, std::vector<uint8_t>& out) {
  util::put_u32(out, p.report_period_ms);
  util::put_u16(out, static_cast<uint16_t>(p.kpm_names.size()));
  for (const auto& name : p.kpm_names) util::put_str(out, name);
}

void encode_payload(const SubscriptionAck&, std::vector<uint8_t>&) {}

void encode_payload(const KpmReport& r, std::vector<uint8_t>& out) {
  util::put_u32(out, r.node_id);
  util::put_u64(out, r.window_end_ms);
  util::put_u32(out, r.cell.cell_id);
  util::put_f64(out, r.cell.prb_util_pct);
  util::put_u32(out, r.cell.active_ues);
  util::put_u32(out, r.cell.tb_count);
  util::put_f64(out, r.cell.share_qpsk);
  util::put_f64(out, r.cell.share_16qam);
  util::put_f64(out, r.cell.share_64qam);
  util::put_u16(out, static_cast<uint16_t>(r.ue_level.size()));
  for (const auto& ue : r.ue_level) {
    util::put_u32(out, ue.ue_id);
    util::put_f64(out, ue.pdcp_throughput_bps);
    util::put_u16(out, static_cast<uint16_t>(ue.sinr_db_by_cell.size()));
    for (const auto& s : ue.sinr_db_by_cell) {
      util::put_u32(out, s.cell_id);
      util::put_f64(out, s.sinr_db);
    }
  }
}

void encode_payload(const RicControl& p, std::vector<uint8_t>& out) {
  util::put_u32(out, p.ue_id);
  util::put_u32(out, p.target_cell_id);
}

void encode_payload(const ControlAck& p, std::vector<uint8_t>& out) {
  util::put_u32(out, p.ue_id);
  util::put_u32(out, p.target_cell_id);
  util::put_u8(out, p.executed);
}

bool decode_payload(MsgType type, ByteReader& rd, Payload& out) {
  switch (type) {
    case MsgType::kSubscriptionRequest: {
      SubscriptionRequest p;
      p.report_period_ms = rd.u32();
      uint16_t n = rd.u16();
      p.kpm_names.reserve(n);
      for (uint16_t i = 0; i < n && rd.ok(); ++i) p.kpm_names.push_back(rd.str());
      out = std::move(p);
      return rd.ok();
    }
    case MsgType::kSubscriptionAck:
      out = SubscriptionAck{};
      return true;
    case MsgType::kKpmIndication: {
      KpmReport r;
      r.node_id = rd.u32();
      r.window_end_ms = rd.u64();
      r.cell.cell_id = rd.u32();
      r.cell.prb_util_pct = rd.f64();
      r.cell.active_ues = rd.u32();
      r.cell.tb_count = rd.u32();
      r.cell.share_qpsk = rd.f64();
      r.cell.share_16qam = rd.f64();
      r.cell.share_64qam = rd.f64();
      uint16_t n_ues = rd.u16();
      r.ue_level.reserve(n_ues);
      for (uint16_t i = 0; i < n_ues && rd.ok(); ++i) {
        KpmUeStats ue;
        ue.ue_id = rd.u32();
        ue.pdcp_throughput_bps = rd.f64();
        uint16_t n_cells = rd.u16();
        ue.sinr_db_by_cell.reserve(n_cells);
        for (uint16_t j = 0; j < n_cells && rd.ok(); ++j) {
          UeSinrSample s;
          s.cell_id = rd.u32();
          s.sinr_db = rd.f64();
          ue.sinr_db_by_cell.push_back(s);
        }
        r.ue_level.push_back(std::move(ue));
      }
      out = std::move(r);
      return rd.ok();
    }
    case MsgType::kRicControl: {
      RicControl p;
      p.ue_id = rd.u32();
      p.target_cell_id = rd.u32();
      out = p;
      return rd.ok();
    }
    case MsgType::kControlAck: {
      ControlAck p;
      p.ue_id = rd.u32();
      p.target_cell_id = rd.u32();
      p.executed = rd.u8();
      out = p;
      return rd.ok();
    }
  }
  return false;
}

}  // namespace

std::vector<uint8_t> encode_message(const E2Message& msg) {
  std::vector<uint8_t> payload;
  std::visit([&payload](const auto& p) { encode_payload(p, payload); }, msg.payload);
  if (payload.size() > std::numeric_limits<uint32_t>::max())
    throw std::length_error("e2lite payload exceeds u32 length field");

  std::vector<uint8_t> out;
  out.reserve(kHeaderSize + payload.size());
  out.insert(out.end(), kMagic, kMagic + 4);
  util::put_u8(out, msg.version);
  util::put_u8(out, static_cast<uint8_t>(msg.type()));
  util::put_u32(out, msg.node_id);
  util::put_u64(out, msg.timestamp_ms);
  util::put_u32(out, static_cast<uint32_t>(payload.size()));
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

DecodeResult decode_message(std::span<const uint8_t> bytes) {
  DecodeResult res;
  if (bytes.size() < kHeaderSize) {
    res.status = DecodeStatus::kTruncated;
    return res;
  }
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) {
    res.status = DecodeStatus::kBadMagic;
    return res;
  }
  ByteReader rd(bytes.subspan(4));
  uint8_t version = rd.u8();
  uint8_t type_raw = rd.u8();
  uint32_t node_id = rd.u32();
  uint64_t timestamp_ms = rd.u64();
  uint32_t payload_len = rd.u32();
  if (version != kProtocolVersion) {
    res.status = DecodeStatus::kBadVersion;
    return res;
  }
  if (type_raw < 1 || type_raw > 5) {
    res.status = DecodeStatus::kBadType;
    return res;
  }
  if (bytes.size() < kHeaderSize + payload_len) {
    res.status = DecodeStatus::kTruncated;
    return res;
  }

  ByteReader prd(bytes.subspan(kHeaderSize, payload_len));
  E2Message msg;
  msg.version = version;
  msg.node_id = node_id;
  msg.timestamp_ms = timestamp_ms;
  if (!decode_payload(static_cast<MsgType>(type_raw), prd, msg.payload) ||
      prd.remaining() != 0) {
    res.status = DecodeStatus::kLengthMismatch;
    return res;
  }
  res.status = DecodeStatus::kOk;
  res.consumed = kHeaderSize + payload_len;
  res.message = std::move(msg);
  return res;
}

void FrameReader::feed(std::span<const uint8_t> bytes) {
  buf_.insert(buf_.end(), bytes.begin(), bytes.end());
}

std::optional<E2Message> FrameReader::poll() {
  if (error_) return std::nullopt;
  if (buf_.size() < kHeaderSize) return std::nullopt;
  // Peek payload_len (header bytes 18..21) to wait for the full frame.
  uint32_t payload_len = 0;
  for (int i = 0; i < 4; ++i)
    payload_len |= static_cast<uint32_t>(buf_[18 + i]) << (8 * i);
  if (buf_.size() < kHeaderSize + static_cast<size_t>(payload_len)) return std::nullopt;

  DecodeResult res = decode_message(std::span<const uint8_t>(buf_.data(), buf_.size()));
  if (res.status != DecodeStatus::kOk) {
    error_ = res.status;
    return std::nullopt;
  }
  buf_.erase(buf_.begin(), buf_.begin() + static_cast<long>(res.consumed));
  return std::move(res.message);
}

}  // namespace ts::e2
