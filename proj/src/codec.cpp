// Copyright 2026 The Lognition Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lognition/codec.hpp"

namespace lognition::codec {

void Writer::str(std::string_view s) {
  u32(static_cast<std::uint32_t>(s.size()));
  out_.append(s);
}

void Writer::location(const NodeLocation& loc) {
  u16(static_cast<std::uint16_t>(loc.cabinet_row()));
  u16(static_cast<std::uint16_t>(loc.cabinet_col()));
  u16(static_cast<std::uint16_t>(loc.cage()));
  u16(static_cast<std::uint16_t>(loc.slot()));
  u16(static_cast<std::uint16_t>(loc.node()));
}

std::uint64_t Reader::get_le(int n) {
  if (remaining() < static_cast<std::size_t>(n)) throw StorageError("truncated record");
  std::uint64_t v = 0;
  for (int i = 0; i < n; ++i) {
    v |= std::uint64_t{static_cast<unsigned char>(in_[pos_ + i])} << (8 * i);
  }
  pos_ += n;
  return v;
}

std::string Reader::str() {
  std::uint32_t n = u32();
  if (remaining() < n) throw StorageError("truncated string");
  std::string s(in_.substr(pos_, n));
  pos_ += n;
  return s;
}

NodeLocation Reader::location(const Topology& topology) {
  unsigned row = u16(), col = u16(), cage = u16(), slot = u16(), node = u16();
  try {
    return NodeLocation(row, col, cage, slot, node, topology);
  } catch (const RangeError& e) {
    throw StorageError(std::string("stored location out of topology: ") + e.what());
  }
}

std::string encode_event(const EventRecord& r) {
  Writer w;
  w.i64(r.timestamp);
  w.str(r.type_id);
  w.location(r.location);
  w.u32(r.count);
  w.str(r.raw_message);
  w.u32(static_cast<std::uint32_t>(r.attributes.size()));
  for (const auto& [k, v] : r.attributes) {
    w.str(k);
    w.str(v);
  }
  return std::move(w).bytes();
}

EventRecord decode_event(std::string_view bytes, const Topology& topology) {
  Reader in(bytes);
  EventRecord r;
  r.timestamp = in.i64();
  r.type_id = in.str();
  r.location = in.location(topology);
  r.count = in.u32();
  r.raw_message = in.str();
  std::uint32_t n = in.u32();
  for (std::uint32_t i = 0; i < n; ++i) {
    std::string k = in.str();
    r.attributes[std::move(k)] = in.str();
  }
  if (!in.done()) throw StorageError("trailing bytes after event record");
  return r;
}

std::string encode_run(const ApplicationRun& run) {
  Writer w;
  w.str(run.job_id);
  w.str(run.user);
  w.str(run.app_name);
  w.i64(run.start_ts);
  w.i64(run.end_ts);
  w.u32(static_cast<std::uint32_t>(run.nodes.size()));
  for (const auto& n : run.nodes) w.location(n);
  w.u8(static_cast<std::uint8_t>(run.exit_status));
  return std::move(w).bytes();
}

ApplicationRun decode_run(std::string_view bytes, const Topology& topology) {
  Reader in(bytes);
  ApplicationRun run;
  run.job_id = in.str();
  run.user = in.str();
  run.app_name = in.str();
  run.start_ts = in.i64();
  run.end_ts = in.i64();
  std::uint32_t n = in.u32();
  for (std::uint32_t i = 0; i < n; ++i) run.nodes.insert(in.location(topology));
  std::uint8_t status = in.u8();
  if (status > static_cast<std::uint8_t>(ExitStatus::unknown)) {
    throw StorageError("bad exit status byte");
  }
  run.exit_status = static_cast<ExitStatus>(status);
  if (!in.done()) throw StorageError("trailing bytes after application record");
  return run;
}

std::string to_hex(std::string_view bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (unsigned char c : bytes) {
    out.push_back(kDigits[c >> 4]);
    out.push_back(kDigits[c & 0xf]);
  }
  return out;
}

std::string from_hex(std::string_view hex) {
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw ParseError("bad hex digit");
  };
  if (hex.size() % 2 != 0) throw ParseError("odd-length hex string");
  std::string out;
  out.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    out.push_back(static_cast<char>((nibble(hex[i]) << 4) | nibble(hex[i + 1])));
  }
  return out;
}

}  // namespace lognition::codec
