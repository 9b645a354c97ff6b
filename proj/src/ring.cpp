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

#include "lognition/ring.hpp"

#include <algorithm>
#include <unordered_set>

#include "lognition/codec.hpp"

namespace lognition {

std::uint64_t stable_hash64(std::string_view bytes, std::uint64_t seed) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  // fmix64
  h ^= h >> 33;
  h *= 0xff51afd7ed558ccdULL;
  h ^= h >> 33;
  h *= 0xc4ceb9fe1a85ec53ULL;
  h ^= h >> 33;
  return h;
}

namespace {

void require_aligned(Timestamp hour) {
  if (hour_of(hour) != hour) {
    throw ArgumentError("partition hour " + std::to_string(hour) + " is not hour-aligned");
  }
}

}  // namespace

PartitionKey PartitionKey::event_by_time(Timestamp hour, std::string type_id) {
  require_aligned(hour);
  PartitionKey k;
  k.kind_ = Kind::event_by_time;
  k.hour_ = hour;
  k.text_ = std::move(type_id);
  k.encode();
  return k;
}

PartitionKey PartitionKey::event_by_location(Timestamp hour, const NodeLocation& location) {
  require_aligned(hour);
  PartitionKey k;
  k.kind_ = Kind::event_by_location;
  k.hour_ = hour;
  k.location_ = location;
  k.encode();
  return k;
}

PartitionKey PartitionKey::app_by_time(Timestamp hour) {
  require_aligned(hour);
  PartitionKey k;
  k.kind_ = Kind::app_by_time;
  k.hour_ = hour;
  k.encode();
  return k;
}

PartitionKey PartitionKey::app_by_user(std::string user) {
  PartitionKey k;
  k.kind_ = Kind::app_by_user;
  k.text_ = std::move(user);
  k.encode();
  return k;
}

PartitionKey PartitionKey::app_by_location(Timestamp hour, unsigned cabinet_row,
                                           unsigned cabinet_col) {
  require_aligned(hour);
  PartitionKey k;
  k.kind_ = Kind::app_by_location;
  k.hour_ = hour;
  // Only the cabinet coordinates are meaningful; the rest stay zero. The
  // unchecked path avoids tying keys to one topology.
  Topology wide{65535, 65535, 1, 1, 1};
  k.location_ = NodeLocation(cabinet_row, cabinet_col, 0, 0, 0, wide);
  k.encode();
  return k;
}

void PartitionKey::encode() {
  codec::Writer w;
  w.u8(static_cast<std::uint8_t>(kind_));
  switch (kind_) {
    case Kind::event_by_time:
      w.i64(hour_);
      w.str(text_);
      break;
    case Kind::event_by_location:
      w.i64(hour_);
      w.location(location_);
      break;
    case Kind::app_by_time:
      w.i64(hour_);
      break;
    case Kind::app_by_user:
      w.str(text_);
      break;
    case Kind::app_by_location:
      w.i64(hour_);
      w.u16(static_cast<std::uint16_t>(location_.cabinet_row()));
      w.u16(static_cast<std::uint16_t>(location_.cabinet_col()));
      break;
  }
  bytes_ = std::move(w).bytes();
}

PartitionKey PartitionKey::decode(std::string_view bytes, const Topology& topology) {
  codec::Reader in(bytes);
  auto tag = in.u8();
  PartitionKey k;
  switch (static_cast<Kind>(tag)) {
    case Kind::event_by_time: {
      Timestamp hour = in.i64();
      k = event_by_time(hour, in.str());
      break;
    }
    case Kind::event_by_location: {
      Timestamp hour = in.i64();
      k = event_by_location(hour, in.location(topology));
      break;
    }
    case Kind::app_by_time:
      k = app_by_time(in.i64());
      break;
    case Kind::app_by_user:
      k = app_by_user(in.str());
      break;
    case Kind::app_by_location: {
      Timestamp hour = in.i64();
      unsigned row = in.u16();
      unsigned col = in.u16();
      k = app_by_location(hour, row, col);
      break;
    }
    default:
      throw StorageError("unknown partition key tag " + std::to_string(tag));
  }
  if (!in.done()) throw StorageError("trailing bytes after partition key");
  return k;
}

std::string_view to_string(PartitionKey::Kind kind) {
  switch (kind) {
    case PartitionKey::Kind::event_by_time: return "event_by_time";
    case PartitionKey::Kind::event_by_location: return "event_by_location";
    case PartitionKey::Kind::app_by_time: return "application_by_time";
    case PartitionKey::Kind::app_by_user: return "application_by_user";
    case PartitionKey::Kind::app_by_location: return "application_by_location";
  }
  return "?";
}

std::string PartitionKey::describe() const {
  std::string out(to_string(kind_));
  out += '(';
  switch (kind_) {
    case Kind::event_by_time:
      out += std::to_string(hour_) + "," + text_;
      break;
    case Kind::event_by_location:
      out += std::to_string(hour_) + "," + format_node_id(location_);
      break;
    case Kind::app_by_time:
      out += std::to_string(hour_);
      break;
    case Kind::app_by_user:
      out += text_;
      break;
    case Kind::app_by_location:
      out += std::to_string(hour_) + ",c" + std::to_string(location_.cabinet_col()) + "-" +
             std::to_string(location_.cabinet_row());
      break;
  }
  out += ')';
  return out;
}

void RingConfig::validate() const {
  if (storage_nodes < 1) throw ArgumentError("ring needs at least one storage node");
  if (vnodes_per_node < 1) throw ArgumentError("ring needs at least one vnode per node");
  if (replication_factor < 1 || replication_factor > storage_nodes) {
    throw ArgumentError("replication factor must be in [1, storage_nodes]");
  }
  if (hash != kRingHashName) throw ArgumentError("unsupported ring hash '" + hash + "'");
}

HashRing::HashRing(RingConfig config) : config_(std::move(config)) {
  config_.validate();
  std::unordered_set<std::uint64_t> seen;
  tokens_.reserve(std::size_t{config_.storage_nodes} * config_.vnodes_per_node);
  for (std::uint32_t node = 0; node < config_.storage_nodes; ++node) {
    for (std::uint32_t v = 0; v < config_.vnodes_per_node; ++v) {
      std::string label = "node-" + std::to_string(node) + "#" + std::to_string(v);
      std::uint64_t token = stable_hash64(label);
      // Collisions are resolved by rehashing the label with a growing salt.
      for (std::uint64_t salt = 1; !seen.insert(token).second; ++salt) {
        token = stable_hash64(label, salt);
      }
      tokens_.emplace_back(token, node);
    }
  }
  std::sort(tokens_.begin(), tokens_.end());
}

std::vector<std::uint32_t> HashRing::locate_hash(std::uint64_t hash) const {
  std::vector<std::uint32_t> out;
  out.reserve(config_.replication_factor);
  auto it = std::lower_bound(tokens_.begin(), tokens_.end(),
                             std::pair<std::uint64_t, std::uint32_t>{hash, 0});
  std::size_t start = static_cast<std::size_t>(it - tokens_.begin());
  for (std::size_t i = 0; i < tokens_.size() && out.size() < config_.replication_factor; ++i) {
    std::uint32_t node = tokens_[(start + i) % tokens_.size()].second;
    if (std::find(out.begin(), out.end(), node) == out.end()) out.push_back(node);
  }
  return out;
}

std::vector<std::uint32_t> HashRing::locate(const PartitionKey& key) const {
  return locate_hash(stable_hash64(key.bytes()));
}

std::uint32_t HashRing::primary(const PartitionKey& key) const { return locate(key).front(); }

std::vector<std::uint32_t> ring_locate(const PartitionKey& key, const RingConfig& ring) {
  return HashRing(ring).locate(key);
}

}  // namespace lognition
