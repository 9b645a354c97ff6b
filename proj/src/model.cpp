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

#include "lognition/model.hpp"

#include <algorithm>
#include <charconv>
#include <limits>

namespace lognition {

namespace {

constexpr std::uint32_t kMaxCount = std::numeric_limits<std::uint16_t>::max();

void check_field(const char* name, unsigned value, std::uint32_t bound) {
  if (value >= bound) {
    throw RangeError(std::string(name) + " " + std::to_string(value) +
                     " out of range [0, " + std::to_string(bound) + ")");
  }
}

// Cursor over cname text; each read consumes a literal or a decimal field.
class CnameReader {
 public:
  explicit CnameReader(std::string_view text) : text_(text) {}

  bool done() const { return pos_ == text_.size(); }
  bool peek(char c) const { return pos_ < text_.size() && text_[pos_] == c; }

  void expect(char c) {
    if (!peek(c)) fail();
    ++pos_;
  }

  unsigned number() {
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    if (first == last || *first < '0' || *first > '9') fail();
    unsigned value = 0;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{}) fail();
    pos_ += static_cast<std::size_t>(ptr - first);
    return value;
  }

  [[noreturn]] void fail() const {
    throw ParseError("malformed node id '" + std::string(text_) + "'");
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

void Topology::validate() const {
  for (std::uint32_t v : {rows, cols, cages_per_cabinet, slots_per_cage, nodes_per_slot}) {
    if (v < 1 || v > kMaxCount) throw ArgumentError("topology counts must be in [1, 65535]");
  }
}

std::size_t Topology::node_count() const {
  return std::size_t{rows} * cols * cages_per_cabinet * slots_per_cage * nodes_per_slot;
}

NodeLocation::NodeLocation(unsigned row, unsigned col, unsigned cage, unsigned slot,
                           unsigned node, const Topology& topology) {
  check_field("cabinet row", row, topology.rows);
  check_field("cabinet column", col, topology.cols);
  check_field("cage", cage, topology.cages_per_cabinet);
  check_field("slot", slot, topology.slots_per_cage);
  check_field("node", node, topology.nodes_per_slot);
  row_ = static_cast<std::uint16_t>(row);
  col_ = static_cast<std::uint16_t>(col);
  cage_ = static_cast<std::uint16_t>(cage);
  slot_ = static_cast<std::uint16_t>(slot);
  node_ = static_cast<std::uint16_t>(node);
}

LocationSelector LocationSelector::of(const NodeLocation& loc) {
  return {loc.cabinet_row(), loc.cabinet_col(), loc.cage(), loc.slot(), loc.node()};
}

bool LocationSelector::matches(const NodeLocation& loc) const {
  if (loc.cabinet_row() != row || loc.cabinet_col() != col) return false;
  if (cage && loc.cage() != *cage) return false;
  if (slot && loc.slot() != *slot) return false;
  if (node && loc.node() != *node) return false;
  return true;
}

std::vector<NodeLocation> LocationSelector::expand(const Topology& topology) const {
  std::vector<NodeLocation> out;
  auto range = [](const std::optional<unsigned>& fixed, std::uint32_t count) {
    return fixed ? std::pair<unsigned, unsigned>{*fixed, *fixed + 1}
                 : std::pair<unsigned, unsigned>{0, count};
  };
  auto [cage_lo, cage_hi] = range(cage, topology.cages_per_cabinet);
  auto [slot_lo, slot_hi] = range(slot, topology.slots_per_cage);
  auto [node_lo, node_hi] = range(node, topology.nodes_per_slot);
  for (unsigned c = cage_lo; c < cage_hi; ++c)
    for (unsigned s = slot_lo; s < slot_hi; ++s)
      for (unsigned n = node_lo; n < node_hi; ++n)
        out.emplace_back(row, col, c, s, n, topology);
  return out;
}

NodeLocation parse_node_id(std::string_view text, const Topology& topology) {
  CnameReader in(text);
  in.expect('c');
  unsigned col = in.number();
  in.expect('-');
  unsigned row = in.number();
  in.expect('c');
  unsigned cage = in.number();
  in.expect('s');
  unsigned slot = in.number();
  in.expect('n');
  unsigned node = in.number();
  if (!in.done()) in.fail();
  return NodeLocation(row, col, cage, slot, node, topology);
}

std::string format_node_id(const NodeLocation& loc) {
  std::string out;
  out.reserve(16);
  out += 'c';
  out += std::to_string(loc.cabinet_col());
  out += '-';
  out += std::to_string(loc.cabinet_row());
  out += 'c';
  out += std::to_string(loc.cage());
  out += 's';
  out += std::to_string(loc.slot());
  out += 'n';
  out += std::to_string(loc.node());
  return out;
}

LocationSelector parse_location_selector(std::string_view text, const Topology& topology) {
  CnameReader in(text);
  LocationSelector sel;
  in.expect('c');
  sel.col = in.number();
  in.expect('-');
  sel.row = in.number();
  check_field("cabinet row", sel.row, topology.rows);
  check_field("cabinet column", sel.col, topology.cols);
  if (in.peek('c')) {
    in.expect('c');
    sel.cage = in.number();
    check_field("cage", *sel.cage, topology.cages_per_cabinet);
    if (in.peek('s')) {
      in.expect('s');
      sel.slot = in.number();
      check_field("slot", *sel.slot, topology.slots_per_cage);
      if (in.peek('n')) {
        in.expect('n');
        sel.node = in.number();
        check_field("node", *sel.node, topology.nodes_per_slot);
      }
    }
  }
  if (!in.done()) in.fail();
  return sel;
}

std::string format_location_selector(const LocationSelector& sel) {
  std::string out = "c" + std::to_string(sel.col) + "-" + std::to_string(sel.row);
  if (sel.cage) {
    out += "c" + std::to_string(*sel.cage);
    if (sel.slot) {
      out += "s" + std::to_string(*sel.slot);
      if (sel.node) out += "n" + std::to_string(*sel.node);
    }
  }
  return out;
}

std::vector<NodeLocation> enumerate_nodes(const Topology& topology) {
  topology.validate();
  std::vector<NodeLocation> out;
  out.reserve(topology.node_count());
  for (unsigned r = 0; r < topology.rows; ++r)
    for (unsigned c = 0; c < topology.cols; ++c)
      for (unsigned g = 0; g < topology.cages_per_cabinet; ++g)
        for (unsigned s = 0; s < topology.slots_per_cage; ++s)
          for (unsigned n = 0; n < topology.nodes_per_slot; ++n)
            out.emplace_back(r, c, g, s, n, topology);
  return out;
}

std::string_view to_string(EventCategory c) {
  switch (c) {
    case EventCategory::hardware: return "hardware";
    case EventCategory::memory: return "memory";
    case EventCategory::gpu: return "gpu";
    case EventCategory::filesystem: return "filesystem";
    case EventCategory::network: return "network";
    case EventCategory::software: return "software";
    case EventCategory::other: return "other";
  }
  return "other";
}

std::string_view to_string(Severity s) {
  switch (s) {
    case Severity::info: return "info";
    case Severity::warn: return "warn";
    case Severity::error: return "error";
    case Severity::fatal: return "fatal";
  }
  return "info";
}

EventCategory parse_category(std::string_view text) {
  for (auto c : {EventCategory::hardware, EventCategory::memory, EventCategory::gpu,
                 EventCategory::filesystem, EventCategory::network, EventCategory::software,
                 EventCategory::other}) {
    if (to_string(c) == text) return c;
  }
  throw ParseError("unknown event category '" + std::string(text) + "'");
}

Severity parse_severity(std::string_view text) {
  for (auto s : {Severity::info, Severity::warn, Severity::error, Severity::fatal}) {
    if (to_string(s) == text) return s;
  }
  throw ParseError("unknown severity '" + std::string(text) + "'");
}

std::string_view to_string(ExitStatus s) {
  switch (s) {
    case ExitStatus::success: return "success";
    case ExitStatus::failed: return "failed";
    case ExitStatus::aborted: return "aborted";
    case ExitStatus::unknown: return "unknown";
  }
  return "unknown";
}

ExitStatus parse_exit_status(std::string_view text) {
  for (auto s : {ExitStatus::success, ExitStatus::failed, ExitStatus::aborted,
                 ExitStatus::unknown}) {
    if (to_string(s) == text) return s;
  }
  throw ParseError("unknown exit status '" + std::string(text) + "'");
}

void EventRecord::validate() const {
  if (timestamp <= 0) throw ArgumentError("event timestamp must be positive");
  if (timestamp > kMaxTimestamp) throw ArgumentError("event timestamp beyond year 9999");
  if (type_id.empty()) throw ArgumentError("event type_id must be non-empty");
  if (count < 1) throw ArgumentError("event count must be at least 1");
  for (const auto& [key, value] : attributes) {
    if (key.empty()) throw ArgumentError("event attribute keys must be non-empty");
  }
}

void ApplicationRun::validate() const {
  if (job_id.empty()) throw ArgumentError("job_id must be non-empty");
  if (start_ts > end_ts) throw ArgumentError("run " + job_id + ": start_ts > end_ts");
  if (start_ts <= 0 || end_ts > kMaxTimestamp) {
    throw ArgumentError("run " + job_id + ": timestamps outside (0, year 9999]");
  }
  if (end_ts - start_ts > kMaxRunSpanMs) throw ArgumentError("run " + job_id + ": longer than 366 days");
  if (nodes.empty()) throw ArgumentError("run " + job_id + ": node set is empty");
}

TimeInterval::TimeInterval(Timestamp start, Timestamp end) : start_(start), end_(end) {
  if (start < -kMaxTimestamp || end > kMaxTimestamp) {
    throw ArgumentError("interval bounds beyond year 9999");
  }
  if (!(start < end)) {
    throw ArgumentError("interval start (" + std::to_string(start) +
                        ") must be before end (" + std::to_string(end) + ")");
  }
}

std::vector<Timestamp> TimeInterval::hours() const {
  std::vector<Timestamp> out;
  for (Timestamp h = hour_of(start_); h < end_; h += kHourMs) out.push_back(h);
  return out;
}

bool run_overlaps(const ApplicationRun& run, const TimeInterval& interval) {
  return interval.overlaps(run.start_ts, std::max(run.end_ts, run.start_ts + 1));
}

bool Context::matches_type(const std::string& type_id) const {
  return !event_types || event_types->count(type_id) > 0;
}

bool Context::matches_location(const NodeLocation& loc) const {
  if (!locations) return true;
  return std::any_of(locations->begin(), locations->end(),
                     [&](const LocationSelector& s) { return s.matches(loc); });
}

bool Context::matches_run(const ApplicationRun& run) const {
  if (!run_overlaps(run, interval)) return false;
  if (users && users->count(run.user) == 0) return false;
  if (apps && apps->count(run.app_name) == 0 && apps->count(run.job_id) == 0) return false;
  if (locations) {
    bool touched = std::any_of(run.nodes.begin(), run.nodes.end(),
                               [&](const NodeLocation& n) { return matches_location(n); });
    if (!touched) return false;
  }
  return true;
}

}  // namespace lognition
