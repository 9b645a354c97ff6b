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

#pragma once

// Canonical little-endian encodings shared by partition keys, segment
// records and the bus. Strings are u32 length + bytes; locations are five
// u16 fields in (row, col, cage, slot, node) order.

#include <cstdint>
#include <string>
#include <string_view>

#include "lognition/model.hpp"

namespace lognition::codec {

class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(static_cast<char>(v)); }
  void u16(std::uint16_t v) { put_le(v, 2); }
  void u32(std::uint32_t v) { put_le(v, 4); }
  void u64(std::uint64_t v) { put_le(v, 8); }
  void i64(std::int64_t v) { put_le(static_cast<std::uint64_t>(v), 8); }
  void str(std::string_view s);
  void location(const NodeLocation& loc);

  const std::string& bytes() const& { return out_; }
  std::string bytes() && { return std::move(out_); }

 private:
  void put_le(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  std::string out_;
};

/// Bounds-checked reader; every short read throws StorageError.
class Reader {
 public:
  explicit Reader(std::string_view bytes) : in_(bytes) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(get_le(1)); }
  std::uint16_t u16() { return static_cast<std::uint16_t>(get_le(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(get_le(4)); }
  std::uint64_t u64() { return get_le(8); }
  std::int64_t i64() { return static_cast<std::int64_t>(get_le(8)); }
  std::string str();
  NodeLocation location(const Topology& topology);

  bool done() const { return pos_ == in_.size(); }
  std::size_t remaining() const { return in_.size() - pos_; }

 private:
  std::uint64_t get_le(int n);
  std::string_view in_;
  std::size_t pos_ = 0;
};

std::string encode_event(const EventRecord& record);
EventRecord decode_event(std::string_view bytes, const Topology& topology);

std::string encode_run(const ApplicationRun& run);
ApplicationRun decode_run(std::string_view bytes, const Topology& topology);

std::string to_hex(std::string_view bytes);
std::string from_hex(std::string_view hex);

}  // namespace lognition::codec
