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
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <vector>

#include "lognition/model.hpp"
#include "lognition/ring.hpp"

namespace lognition {

struct StoreOptions {
  RingConfig ring;
  Topology topology;
  /// Persistent when set: one sub-directory per storage node holding
  /// append-only segments and a manifest. In-memory otherwise.
  std::optional<std::filesystem::path> directory;
};

struct WriteReceipt {
  /// Every partition written, with its replica set (primary first).
  std::vector<PartitionKey> partitions;
  std::vector<std::vector<std::uint32_t>> replicas;
  /// Event writes: true when a new row was created rather than merged.
  bool created = false;
};

struct NodeStats {
  std::uint64_t partitions = 0;
  std::uint64_t rows = 0;
  std::uint64_t bytes = 0;

  bool operator==(const NodeStats&) const = default;
};

/// Per storage node figures count replica copies; the logical figures count
/// each row once.
struct StoreStats {
  std::vector<NodeStats> nodes;
  std::uint64_t total_partitions = 0;
  std::uint64_t total_rows = 0;
  std::uint64_t total_bytes = 0;
  std::uint64_t event_records = 0;
  std::uint64_t event_occurrences = 0;
  std::uint64_t applications = 0;
  std::uint64_t event_types = 0;
};

/// Which application index answers a scan_apps call.
class AppSelector {
 public:
  enum class Kind { interval, user, app_name, location };

  static AppSelector by_interval(TimeInterval interval) {
    return AppSelector(Kind::interval, interval, {}, {});
  }
  static AppSelector by_user(std::string user) {
    return AppSelector(Kind::user, std::nullopt, std::move(user), {});
  }
  static AppSelector by_app_name(std::string app_name) {
    return AppSelector(Kind::app_name, std::nullopt, std::move(app_name), {});
  }
  static AppSelector by_location(LocationSelector location, TimeInterval interval) {
    return AppSelector(Kind::location, interval, {}, location);
  }

  Kind kind() const noexcept { return kind_; }
  const std::optional<TimeInterval>& interval() const noexcept { return interval_; }
  const std::string& text() const noexcept { return text_; }
  const LocationSelector& location() const noexcept { return location_; }

 private:
  AppSelector(Kind k, std::optional<TimeInterval> iv, std::string text, LocationSelector loc)
      : kind_(k), interval_(iv), text_(std::move(text)), location_(loc) {}

  Kind kind_;
  std::optional<TimeInterval> interval_;
  std::string text_;
  LocationSelector location_;
};

/// Optional out-parameter recording how many partitions a scan read.
struct ScanTrace {
  std::uint64_t partitions_touched = 0;
};

class SegmentLog;

/// Embedded wide-column event store.
///
/// Events are written twice: into event_by_time(hour, type) and into
/// event_by_location(hour, node). Each partition lives on the RF storage
/// nodes chosen by the hash ring and keeps its rows sorted by (timestamp,
/// type, location). Re-writing a row with the same (timestamp, type,
/// location) merges by max(count), which makes replays idempotent.
///
/// Applications are indexed by every overlapped hour, by user, and by
/// (hour, cabinet). A per-(type, hour) synopsis of occurrence counts is kept
/// alongside.
///
/// Thread-safe: scans take a shared lock and see a consistent snapshot;
/// writes are exclusive.
class EventStore {
 public:
  explicit EventStore(StoreOptions options = {});
  ~EventStore();

  EventStore(const EventStore&) = delete;
  EventStore& operator=(const EventStore&) = delete;

  const Topology& topology() const noexcept { return options_.topology; }
  const HashRing& ring() const noexcept { return ring_; }
  bool persistent() const noexcept { return options_.directory.has_value(); }

  /// Adds or replaces an event type (the eventtypes table).
  void register_type(const EventTypeDef& def);
  bool has_type(const std::string& type_id) const;
  std::vector<EventTypeDef> types() const;

  /// Throws UnknownTypeError for unregistered types, ArgumentError for
  /// invalid records.
  WriteReceipt write_event(const EventRecord& record);
  WriteReceipt write_application(const ApplicationRun& run);

  std::vector<EventRecord> scan_events_by_type(const std::string& type_id,
                                               const TimeInterval& interval,
                                               ScanTrace* trace = nullptr) const;
  std::vector<EventRecord> scan_events_by_location(const LocationSelector& location,
                                                   const TimeInterval& interval,
                                                   ScanTrace* trace = nullptr) const;
  /// Runs matching the selector, deduplicated by job id, ordered by
  /// (start_ts, job_id).
  std::vector<ApplicationRun> scan_apps(const AppSelector& selector) const;
  std::optional<ApplicationRun> find_application(const std::string& job_id) const;

  /// Sum of counts stored for `type_id` in the hour bucket holding `hour`.
  std::uint64_t synopsis(const std::string& type_id, Timestamp hour) const;
  std::map<std::pair<std::string, Timestamp>, std::uint64_t> synopsis_table() const;

  StoreStats stats() const;

  /// Every row of one table kind, read from primary replicas, in
  /// (partition key, clustering) order. Intended for audits and tests.
  std::vector<EventRecord> dump_event_view(PartitionKey::Kind kind) const;
  std::vector<std::pair<PartitionKey, std::vector<std::string>>> dump_app_view(
      PartitionKey::Kind kind) const;
  /// Rows of one partition on one storage node, empty when absent.
  std::vector<EventRecord> partition_rows(const PartitionKey& key, std::uint32_t node) const;

  /// Stable 64-bit digest (hex) over the logical contents. Equal digests mean
  /// equal store states regardless of write order.
  std::string digest() const;

  /// Flushes segments and rewrites manifests. No-op for in-memory stores.
  void flush();

 private:
  struct EventPartition {
    std::vector<EventRecord> rows;
  };
  struct AppPartition {
    std::vector<ApplicationRun> rows;
  };
  struct Shard {
    std::map<std::string, EventPartition> events;
    std::map<std::string, AppPartition> apps;
    std::unique_ptr<SegmentLog> log;
  };

  enum class Op : std::uint8_t { event_put = 1, app_put = 2, app_delete = 3 };

  static std::vector<PartitionKey> app_keys(const ApplicationRun& run);

  // Apply helpers assume the exclusive lock is held. `log` controls whether
  // the mutation is appended to the segment (false during recovery).
  bool apply_event(std::uint32_t node, const PartitionKey& key, const EventRecord& record,
                   bool log, std::int64_t* synopsis_delta);
  void apply_app_put(std::uint32_t node, const PartitionKey& key, const ApplicationRun& run,
                     bool log);
  void apply_app_delete(std::uint32_t node, const PartitionKey& key, const std::string& job_id,
                        bool log);
  void replay(std::uint32_t node, std::uint8_t op, const std::string& key_bytes,
              std::string_view body);

  void open_directory();
  void save_meta() const;
  void rebuild_derived();
  void check_location(const NodeLocation& loc) const;
  /// Hour buckets of `interval` that hold any event or run partition.
  std::vector<Timestamp> occupied_hours(const TimeInterval& interval) const;

  StoreOptions options_;
  HashRing ring_;
  mutable std::shared_mutex mutex_;
  std::vector<Shard> shards_;
  std::map<std::string, EventTypeDef> types_;
  std::map<std::string, ApplicationRun> runs_;
  std::map<std::pair<std::string, Timestamp>, std::uint64_t> synopsis_;
  std::set<Timestamp> hours_;
};

}  // namespace lognition
