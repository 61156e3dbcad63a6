#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "ts/e2/message.hpp"

namespace ts::e2 {

enum class DecodeStatus : uint8_t {
  kOk = 0,
  kBadMagic,
  kBadVersion,
  kBadType,
  kTruncated,       // frame shorter than header + payload_len
  kLengthMismatch,  // payload_len disagrees with the payload's actual layout
};

const char* decode_status_name(DecodeStatus s);

struct DecodeResult {
  DecodeStatus status = DecodeStatus::kOk;
  size_t consumed = 0;  // bytes consumed on kOk; 0 otherwise
  std::optional<E2Message> message;
};

// Canonical, deterministic encoding. Throws std::length_error if the payload
// would exceed the u32 length field.
std::vector<uint8_t> encode_message(const E2Message& msg);

// Decodes exactly one frame from the front of `bytes`.
DecodeResult decode_message(std::span<const uint8_t> bytes);

// Incremental reassembler for one reliable ordered byte stream. Arbitrary
// fragmentation/coalescing is fine; frames come out whole and in order.
// A hard protocol error (bad magic/version/type, length mismatch) is sticky.
class FrameReader {
 public:
  void feed(std::span<const uint8_t> bytes);

  // Next complete message, or nullopt if more bytes are needed.
  std::optional<E2Message> poll();

  bool has_error() const { return error_.has_value(); }
  DecodeStatus error() const { return error_.value_or(DecodeStatus::kOk); }
  size_t buffered() const { return buf_.size(); }

 private:
  std::vector<uint8_t> buf_;
  std::optional<DecodeStatus> error_;
};

}  // namespace ts::e2
