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
#include <map>
#include <string>
#include <vector>

#include "lognition/model.hpp"
#include "lognition/store.hpp"

namespace lognition {

inline constexpr std::size_t kDefaultResultLimit = 50'000;

struct ContextResult {
  explicit ContextResult(TimeInterval iv) : interval(iv) {}

  /// Ascending by (timestamp, type, location); at most `limit` entries.
  std::vector<EventRecord> events;
  /// Ordered by (start_ts, job_id).
  std::vector<ApplicationRun> apps;
  TimeInterval interval;
  bool truncated = false;
  std::size_t limit = kDefaultResultLimit;
  /// Matching events before truncation.
  std::size_t total_events = 0;
  /// "event_by_time" or "event_by_location".
  std::string index_used;
  std::uint64_t partitions_touched = 0;
};

/// Events and runs satisfying every filter of `ctx`. With user or app
/// filters an event is kept only when a matching run was active on its node
/// at its timestamp.
ContextResult evaluate_context(const EventStore& store, const Context& ctx,
                               std::size_t limit = kDefaultResultLimit);

/// Every matching event, without a limit. Aggregates build on this.
std::vector<EventRecord> matching_events(const EventStore& store, const Context& ctx,
                                         ScanTrace* trace = nullptr,
                                         std::string* index_used = nullptr);
std::vector<ApplicationRun> matching_apps(const EventStore& store, const Context& ctx);

struct HeatMap {
  Topology topology;
  std::string type_id;
  /// Nonzero nodes only; absent nodes count 0.
  std::map<NodeLocation, std::uint64_t> counts;
  std::uint64_t max = 0;
  std::uint64_t total = 0;

  std::uint64_t at(const NodeLocation& loc) const;
};

/// Occurrences of `type_id` per node within `ctx`. A type filter already in
/// `ctx` is intersected with `type_id`. Throws UnknownTypeError.
HeatMap heatmap(const EventStore& store, const Context& ctx, const std::string& type_id);

enum class GroupBy { cabinet, blade, node, application };
std::string_view to_string(GroupBy g);
GroupBy parse_group_by(std::string_view text);

/// Key "-" in application grouping collects occurrences on nodes that no
/// run occupied at the time.
inline constexpr std::string_view kUnattributed = "-";

struct Distribution {
  GroupBy group_by = GroupBy::cabinet;
  /// Count descending, then key ascending.
  std::vector<std::pair<std::string, std::uint64_t>> buckets;
  /// Matching occurrences. Bucket sums equal this except in application
  /// grouping with overlapping runs on a shared node, where each run is
  /// credited (then multi_attributed is set).
  std::uint64_t total = 0;
  bool multi_attributed = false;
  /// Application grouping: job id -> application name.
  std::map<std::string, std::string> labels;
};

Distribution distribution(const EventStore& store, const Context& ctx, GroupBy group_by);

struct Histogram {
  explicit Histogram(TimeInterval iv) : interval(iv) {}

  TimeInterval interval;
  Timestamp bin_width_ms = 0;
  /// (bin start, count); bins tile the interval, the last may be short.
  std::vector<std::pair<Timestamp, std::uint64_t>> bins;
  std::uint64_t total = 0;
};

/// Throws ArgumentError when bin_width_ms <= 0.
Histogram histogram(const EventStore& store, const Context& ctx, Timestamp bin_width_ms);
Histogram histogram(const std::vector<EventRecord>& events, const TimeInterval& interval,
                    Timestamp bin_width_ms);

/// Runs active at `ts` (start <= ts < end), ordered by (start_ts, job_id).
std::vector<ApplicationRun> placements_at(const EventStore& store, Timestamp ts);

}  // namespace lognition
