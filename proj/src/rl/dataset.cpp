#include "ts/rl/dataset.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ts/util/bytes.hpp"
#include "ts/util/text.hpp"

namespace ts::rl {

std::vector<uint8_t> serialize_transitions(const std::vector<Transition>& rows) {
  std::vector<uint8_t> out;
  out.reserve(rows.size() * kTransitionBytes);
  for (const auto& t : rows) {
    util::put_u32(out, t.ue_id);
    for (float v : t.s) util::put_f32(out, v);
    util::put_u8(out, t.action);
    util::put_f32(out, t.reward);
    for (float v : t.s_next) util::put_f32(out, v);
    util::put_u8(out, t.done);
  }
  return out;
}

std::vector<Transition> deserialize_transitions(const std::vector<uint8_t>& bytes) {
  if (bytes.size() % kTransitionBytes != 0)
    throw std::runtime_error("transitions blob size " + std::to_string(bytes.size()) +
                             " is not a multiple of " + std::to_string(kTransitionBytes));
  util::ByteReader rd(bytes);
  std::vector<Transition> rows(bytes.size() / kTransitionBytes);
  for (auto& t : rows) {
    t.ue_id = rd.u32();
    for (float& v : t.s) v = rd.f32();
    t.action = rd.u8();
    t.reward = rd.f32();
    for (float& v : t.s_next) v = rd.f32();
    t.done = rd.u8();
  }
  if (!rd.ok()) throw std::runtime_error("transitions blob truncated");
  return rows;
}

void save_transitions_bin(const std::string& path, const std::vector<Transition>& rows) {
  auto bytes = serialize_transitions(rows);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<long>(bytes.size()));
}

std::vector<Transition> load_transitions_bin(const std::string& path) {
  std::string blob = util::read_file(path);
  if (blob.empty()) throw std::runtime_error("dataset is empty: " + path);
  std::vector<uint8_t> bytes(blob.begin(), blob.end());
  return deserialize_transitions(bytes);
}

void save_transitions_csv(const std::string& path, const std::vector<Transition>& rows) {
  std::ostringstream os;
  os << "ue_id";
  for (int i = 0; i < kStateLen; ++i) os << ",s" << i;
  os << ",action,reward";
  for (int i = 0; i < kStateLen; ++i) os << ",sp" << i;
  os << ",done\n";
  for (const auto& t : rows) {
    os << t.ue_id;
    for (float v : t.s) os << ',' << util::fmt_double(v);
    os << ',' << static_cast<int>(t.action) << ',' << util::fmt_double(t.reward);
    for (float v : t.s_next) os << ',' << util::fmt_double(v);
    os << ',' << static_cast<int>(t.done) << '\n';
  }
  util::write_file(path, os.str());
}

}  // namespace ts::rl
