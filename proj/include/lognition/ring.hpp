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

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lognition/model.hpp"

namespace lognition {

/// Identifier of the only placement hash implemented: 64-bit FNV-1a followed
/// by the murmur3 fmix64 finalizer. Stable across platforms and releases.
inline constexpr std::string_view kRingHashName = "fnv1a64-fmix64";

std::uint64_t stable_hash64(std::string_view bytes, std::uint64_t seed = 0) noexcept;

/// Identity of one wide-column partition. The canonical encoding is a tag
/// byte followed by the variant's fields in fixed order, little-endian.
class PartitionKey {
 public:
  enum class Kind : std::uint8_t {
    event_by_time = 1,
    event_by_location = 2,
    app_by_time = 3,
    app_by_user = 4,
    app_by_location = 5,
  };

  /// Hour arguments must be aligned to kHourMs; ArgumentError otherwise.
  static PartitionKey event_by_time(Timestamp hour, std::string type_id);
  static PartitionKey event_by_location(Timestamp hour, const NodeLocation& location);
  static PartitionKey app_by_time(Timestamp hour);
  static PartitionKey app_by_user(std::string user);
  static PartitionKey app_by_location(Timestamp hour, unsigned cabinet_row, unsigned cabinet_col);

  static PartitionKey decode(std::string_view bytes, const Topology& topology);

  Kind kind() const noexcept { return kind_; }
  Timestamp hour() const noexcept { return hour_; }
  const std::string& type_id() const noexcept { return text_; }
  const std::string& user() const noexcept { return text_; }
  const NodeLocation& location() const noexcept { return location_; }
  std::pair<unsigned, unsigned> cabinet() const noexcept {
    return {location_.cabinet_row(), location_.cabinet_col()};
  }

  const std::string& bytes() const noexcept { return bytes_; }
  /// Human-readable form, e.g. "event_by_time(1700000000000,MCE)".
  std::string describe() const;

  bool operator==(const PartitionKey& o) const { return bytes_ == o.bytes_; }
  bool operator<(const PartitionKey& o) const { return bytes_ < o.bytes_; }

 private:
  PartitionKey() = default;
  void encode();

  Kind kind_ = Kind::event_by_time;
  Timestamp hour_ = 0;
  std::string text_;
  NodeLocation location_;
  std::string bytes_;
};

std::string_view to_string(PartitionKey::Kind kind);

struct RingConfig {
  std::uint32_t storage_nodes = 4;
  std::uint32_t vnodes_per_node = 64;
  std::uint32_t replication_factor = 1;
  std::string hash{kRingHashName};

  /// Throws ArgumentError on N < 1, vnodes < 1, RF outside [1, N] or an
  /// unknown hash name.
  void validate() const;

  bool operator==(const RingConfig&) const = default;
};

/// Consistent-hash ring of virtual nodes. Each storage node owns
/// `vnodes_per_node` tokens; a key belongs to the owner of the first token at
/// or after its hash (wrapping), and its replicas are the next distinct
/// physical nodes clockwise.
class HashRing {
 public:
  explicit HashRing(RingConfig config);

  const RingConfig& config() const noexcept { return config_; }
  /// Sorted (token, storage node) pairs; tokens are distinct.
  const std::vector<std::pair<std::uint64_t, std::uint32_t>>& tokens() const noexcept {
    return tokens_;
  }

  /// RF distinct storage node ids, primary first.
  std::vector<std::uint32_t> locate(const PartitionKey& key) const;
  std::vector<std::uint32_t> locate_hash(std::uint64_t hash) const;
  std::uint32_t primary(const PartitionKey& key) const;

 private:
  RingConfig config_;
  std::vector<std::pair<std::uint64_t, std::uint32_t>> tokens_;
};

/// Convenience wrapper: ring_locate(key, ring) == HashRing(ring).locate(key).
std::vector<std::uint32_t> ring_locate(const PartitionKey& key, const RingConfig& ring);

}  // namespace lognition
