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

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "lognition/error.hpp"

namespace lognition {

/// Milliseconds since the Unix epoch, UTC.
using Timestamp = std::int64_t;

inline constexpr Timestamp kSecondMs = 1'000;
inline constexpr Timestamp kHourMs = 3'600'000;
/// 9999-12-31T23:59:59.999Z; stored timestamps lie in (0, kMaxTimestamp].
inline constexpr Timestamp kMaxTimestamp = 253'402'300'799'999;
/// Longest application run accepted (366 days).
inline constexpr Timestamp kMaxRunSpanMs = 366 * 24 * kHourMs;

/// Floor of `ts` to a multiple of `width` (works for negative values too).
constexpr Timestamp align_down(Timestamp ts, Timestamp width) {
  Timestamp r = ts % width;
  return r < 0 ? ts - r - width : ts - r;
}

/// Start of the UTC hour bucket holding `ts`.
constexpr Timestamp hour_of(Timestamp ts) { return align_down(ts, kHourMs); }

/// Physical layout of the machine. Defaults describe Titan: 25 rows by 8
/// columns of cabinets, 3 cages per cabinet, 8 slots (blades) per cage,
/// 4 nodes per slot.
struct Topology {
  std::uint32_t rows = 25;
  std::uint32_t cols = 8;
  std::uint32_t cages_per_cabinet = 3;
  std::uint32_t slots_per_cage = 8;
  std::uint32_t nodes_per_slot = 4;

  /// Throws ArgumentError unless every count is at least 1 and fits a u16.
  void validate() const;
  std::size_t node_count() const;
  std::size_t cabinet_count() const { return std::size_t{rows} * cols; }

  bool operator==(const Topology&) const = default;
};

/// Coordinates of one compute node. Fields are range-checked against a
/// Topology when constructed through the checking constructor.
class NodeLocation {
 public:
  constexpr NodeLocation() = default;
  NodeLocation(unsigned row, unsigned col, unsigned cage, unsigned slot,
               unsigned node, const Topology& topology = Topology{});

  unsigned cabinet_row() const noexcept { return row_; }
  unsigned cabinet_col() const noexcept { return col_; }
  unsigned cage() const noexcept { return cage_; }
  unsigned slot() const noexcept { return slot_; }
  unsigned node() const noexcept { return node_; }

  /// Order is lexicographic by (row, col, cage, slot, node).
  auto operator<=>(const NodeLocation&) const = default;

 private:
  std::uint16_t row_ = 0;
  std::uint16_t col_ = 0;
  std::uint16_t cage_ = 0;
  std::uint16_t slot_ = 0;
  std::uint16_t node_ = 0;
};

/// A cabinet, cage, blade or node, written as a cname prefix such as
/// "c3-10", "c3-10c1", "c3-10c1s4" or "c3-10c1s4n2".
struct LocationSelector {
  unsigned row = 0;
  unsigned col = 0;
  std::optional<unsigned> cage;
  std::optional<unsigned> slot;
  std::optional<unsigned> node;

  static LocationSelector cabinet(unsigned row, unsigned col) { return {row, col, {}, {}, {}}; }
  static LocationSelector of(const NodeLocation& loc);

  bool matches(const NodeLocation& loc) const;
  bool is_node() const { return node.has_value(); }
  /// Member nodes in enumeration order.
  std::vector<NodeLocation> expand(const Topology& topology) const;

  auto operator<=>(const LocationSelector&) const = default;
};

/// Parses "c{col}-{row}c{cage}s{slot}n{node}". Throws ParseError on bad
/// syntax and RangeError when a field lies outside `topology`.
NodeLocation parse_node_id(std::string_view text, const Topology& topology = Topology{});
std::string format_node_id(const NodeLocation& location);

LocationSelector parse_location_selector(std::string_view text,
                                         const Topology& topology = Topology{});
std::string format_location_selector(const LocationSelector& selector);

/// Every node of `topology`, ordered by (row, col, cage, slot, node).
std::vector<NodeLocation> enumerate_nodes(const Topology& topology);

enum class EventCategory { hardware, memory, gpu, filesystem, network, software, other };
enum class Severity { info, warn, error, fatal };

std::string_view to_string(EventCategory c);
std::string_view to_string(Severity s);
EventCategory parse_category(std::string_view text);
Severity parse_severity(std::string_view text);

struct EventTypeDef {
  std::string type_id;
  std::string display_name;
  EventCategory category = EventCategory::other;
  /// Regex templates tried in order; each names at least `timestamp` and
  /// `location` captures.
  std::vector<std::string> patterns;
  Severity severity = Severity::info;

  bool operator==(const EventTypeDef&) const = default;
};

/// One occurrence, or several coalesced ones, of a typed event on a node.
struct EventRecord {
  Timestamp timestamp = 0;
  std::string type_id;
  NodeLocation location;
  std::uint32_t count = 1;
  std::string raw_message;
  std::map<std::string, std::string> attributes;

  /// Throws ArgumentError on a violated invariant.
  void validate() const;

  bool operator==(const EventRecord&) const = default;
};

/// Clustering order inside event partitions: timestamp, then type, then
/// location.
struct EventRowOrder {
  bool operator()(const EventRecord& a, const EventRecord& b) const {
    if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
    if (a.type_id != b.type_id) return a.type_id < b.type_id;
    return a.location < b.location;
  }
};

inline bool same_row(const EventRecord& a, const EventRecord& b) {
  return a.timestamp == b.timestamp && a.type_id == b.type_id && a.location == b.location;
}

enum class ExitStatus { success, failed, aborted, unknown };
std::string_view to_string(ExitStatus s);
ExitStatus parse_exit_status(std::string_view text);

struct ApplicationRun {
  std::string job_id;
  std::string user;
  std::string app_name;
  Timestamp start_ts = 0;
  Timestamp end_ts = 0;
  std::set<NodeLocation> nodes;
  ExitStatus exit_status = ExitStatus::unknown;

  void validate() const;
  /// True while the run occupies its nodes: start <= ts < end.
  bool active_at(Timestamp ts) const { return start_ts <= ts && ts < end_ts; }

  bool operator==(const ApplicationRun&) const = default;
};

/// Half-open [start, end) interval in milliseconds.
class TimeInterval {
 public:
  /// Throws ArgumentError unless start < end and both lie within
  /// [-kMaxTimestamp, kMaxTimestamp].
  TimeInterval(Timestamp start, Timestamp end);

  Timestamp start() const noexcept { return start_; }
  Timestamp end() const noexcept { return end_; }
  Timestamp length() const noexcept { return end_ - start_; }
  bool contains(Timestamp ts) const noexcept { return start_ <= ts && ts < end_; }
  bool overlaps(Timestamp start, Timestamp end) const noexcept {
    return start < end_ && end > start_;
  }
  /// Hour buckets intersecting the interval, ascending.
  std::vector<Timestamp> hours() const;

  bool operator==(const TimeInterval&) const = default;

 private:
  Timestamp start_;
  Timestamp end_;
};

/// A run covers [start, max(end, start + 1)) for placement in hour buckets
/// and interval overlap, so zero-length runs still land somewhere.
bool run_overlaps(const ApplicationRun& run, const TimeInterval& interval);

/// The spatio-temporal filter behind every query. Absent optional sets mean
/// "all".
struct Context {
  TimeInterval interval;
  std::optional<std::set<std::string>> event_types;
  std::optional<std::vector<LocationSelector>> locations;
  std::optional<std::set<std::string>> users;
  /// Application names or job ids.
  std::optional<std::set<std::string>> apps;

  explicit Context(TimeInterval iv) : interval(iv) {}

  bool matches_type(const std::string& type_id) const;
  bool matches_location(const NodeLocation& loc) const;
  /// Whether the run passes the user, app and location filters and overlaps
  /// the interval.
  bool matches_run(const ApplicationRun& run) const;
  /// Events need a placement join only when user or app filters are set.
  bool needs_run_join() const { return users.has_value() || apps.has_value(); }
};

}  // namespace lognition
