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

#include "lognition/query.hpp"

#include <algorithm>

namespace lognition {

namespace {

constexpr std::size_t kTypeIndexLimit = 8;

// Runs that satisfy the user/app filters, indexed by node for the placement
// join.
class RunJoin {
 public:
  RunJoin(const std::vector<ApplicationRun>& runs) {
    for (const auto& run : runs) {
      for (const auto& n : run.nodes) by_node_[n].push_back(&run);
    }
  }

  template <typename F>
  void for_each_active(const EventRecord& e, F&& f) const {
    auto it = by_node_.find(e.location);
    if (it == by_node_.end()) return;
    for (const ApplicationRun* run : it->second) {
      if (run->active_at(e.timestamp)) f(*run);
    }
  }

  bool any_active(const EventRecord& e) const {
    bool found = false;
    for_each_active(e, [&](const ApplicationRun&) { found = true; });
    return found;
  }

 private:
  std::map<NodeLocation, std::vector<const ApplicationRun*>> by_node_;
};

std::vector<ApplicationRun> join_candidates(const EventStore& store, const Context& ctx) {
  auto runs = store.scan_apps(AppSelector::by_interval(ctx.interval));
  std::erase_if(runs, [&](const ApplicationRun& r) {
    if (ctx.users && ctx.users->count(r.user) == 0) return true;
    if (ctx.apps && ctx.apps->count(r.app_name) == 0 && ctx.apps->count(r.job_id) == 0) return true;
    return false;
  });
  return runs;
}

std::string group_key(const EventRecord& e, GroupBy g) {
  const auto& l = e.location;
  switch (g) {
    case GroupBy::cabinet:
      return format_location_selector(LocationSelector::cabinet(l.cabinet_row(), l.cabinet_col()));
    case GroupBy::blade:
      return format_location_selector(
          {l.cabinet_row(), l.cabinet_col(), l.cage(), l.slot(), std::nullopt});
    case GroupBy::node:
    case GroupBy::application:
      break;
  }
  return format_node_id(l);
}

}  // namespace

std::vector<EventRecord> matching_events(const EventStore& store, const Context& ctx,
                                         ScanTrace* trace, std::string* index_used) {
  std::vector<EventRecord> out;
  bool by_location = ctx.locations && (!ctx.event_types || ctx.event_types->size() > kTypeIndexLimit);

  if (by_location) {
    for (const auto& sel : *ctx.locations) {
      for (auto& e : store.scan_events_by_location(sel, ctx.interval, trace)) {
        if (ctx.matches_type(e.type_id)) out.push_back(std::move(e));
      }
    }
    std::sort(out.begin(), out.end(), EventRowOrder{});
    // Overlapping selectors ("c3-10" and "c3-10c1") return the same rows.
    out.erase(std::unique(out.begin(), out.end(), same_row), out.end());
  } else {
    std::vector<std::string> types;
    if (ctx.event_types) {
      types.assign(ctx.event_types->begin(), ctx.event_types->end());
    } else {
      for (const auto& def : store.types()) types.push_back(def.type_id);
    }
    for (const auto& t : types) {
      for (auto& e : store.scan_events_by_type(t, ctx.interval, trace)) {
        if (ctx.matches_location(e.location)) out.push_back(std::move(e));
      }
    }
    std::sort(out.begin(), out.end(), EventRowOrder{});
  }
  if (index_used) *index_used = by_location ? "event_by_location" : "event_by_time";

  if (ctx.needs_run_join()) {
    RunJoin join(join_candidates(store, ctx));
    std::erase_if(out, [&](const EventRecord& e) { return !join.any_active(e); });
  }
  return out;
}

std::vector<ApplicationRun> matching_apps(const EventStore& store, const Context& ctx) {
  auto runs = store.scan_apps(AppSelector::by_interval(ctx.interval));
  std::erase_if(runs, [&](const ApplicationRun& r) { return !ctx.matches_run(r); });
  return runs;
}

ContextResult evaluate_context(const EventStore& store, const Context& ctx, std::size_t limit) {
  ContextResult result(ctx.interval);
  result.limit = limit;
  ScanTrace trace;
  result.events = matching_events(store, ctx, &trace, &result.index_used);
  result.partitions_touched = trace.partitions_touched;
  result.total_events = result.events.size();
  if (result.events.size() > limit) {
    result.events.resize(limit);
    result.truncated = true;
  }
  result.apps = matching_apps(store, ctx);
  return result;
}

std::uint64_t HeatMap::at(const NodeLocation& loc) const {
  auto it = counts.find(loc);
  return it == counts.end() ? 0 : it->second;
}

HeatMap heatmap(const EventStore& store, const Context& ctx, const std::string& type_id) {
  if (!store.has_type(type_id)) throw UnknownTypeError(type_id);
  HeatMap map;
  map.topology = store.topology();
  map.type_id = type_id;
  if (!ctx.matches_type(type_id)) return map;
  Context narrowed = ctx;
  narrowed.event_types = std::set<std::string>{type_id};
  for (const auto& e : matching_events(store, narrowed)) {
    auto& c = map.counts[e.location];
    c += e.count;
    map.total += e.count;
    map.max = std::max(map.max, c);
  }
  return map;
}

std::string_view to_string(GroupBy g) {
  switch (g) {
    case GroupBy::cabinet: return "cabinet";
    case GroupBy::blade: return "blade";
    case GroupBy::node: return "node";
    case GroupBy::application: return "application";
  }
  return "cabinet";
}

GroupBy parse_group_by(std::string_view text) {
  if (text == "cabinet") return GroupBy::cabinet;
  if (text == "blade") return GroupBy::blade;
  if (text == "node") return GroupBy::node;
  if (text == "application") return GroupBy::application;
  throw ParseError("unknown group_by '" + std::string(text) + "'");
}

Distribution distribution(const EventStore& store, const Context& ctx, GroupBy group_by) {
  Distribution dist;
  dist.group_by = group_by;
  std::map<std::string, std::uint64_t> buckets;
  auto events = matching_events(store, ctx);

  if (group_by == GroupBy::application) {
    // Every run overlapping the interval is a candidate, narrowed by the
    // user/app filters when present.
    auto runs = join_candidates(store, ctx);
    RunJoin join(runs);
    for (const auto& e : events) {
      dist.total += e.count;
      int hits = 0;
      join.for_each_active(e, [&](const ApplicationRun& run) {
        buckets[run.job_id] += e.count;
        dist.labels[run.job_id] = run.app_name;
        ++hits;
      });
      if (hits == 0) buckets[std::string(kUnattributed)] += e.count;
      if (hits > 1) dist.multi_attributed = true;
    }
  } else {
    for (const auto& e : events) {
      buckets[group_key(e, group_by)] += e.count;
      dist.total += e.count;
    }
  }

  dist.buckets.assign(buckets.begin(), buckets.end());
  std::stable_sort(dist.buckets.begin(), dist.buckets.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return dist;
}

Histogram histogram(const std::vector<EventRecord>& events, const TimeInterval& interval,
                    Timestamp bin_width_ms) {
  if (bin_width_ms <= 0) throw ArgumentError("bin_width_ms must be positive");
  Histogram h(interval);
  h.bin_width_ms = bin_width_ms;
  std::size_t n = static_cast<std::size_t>((interval.length() + bin_width_ms - 1) / bin_width_ms);
  h.bins.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    h.bins.emplace_back(interval.start() + static_cast<Timestamp>(i) * bin_width_ms, 0);
  }
  for (const auto& e : events) {
    if (!interval.contains(e.timestamp)) continue;
    h.bins[static_cast<std::size_t>((e.timestamp - interval.start()) / bin_width_ms)].second += e.count;
    h.total += e.count;
  }
  return h;
}

Histogram histogram(const EventStore& store, const Context& ctx, Timestamp bin_width_ms) {
  if (bin_width_ms <= 0) throw ArgumentError("bin_width_ms must be positive");
  return histogram(matching_events(store, ctx), ctx.interval, bin_width_ms);
}

std::vector<ApplicationRun> placements_at(const EventStore& store, Timestamp ts) {
  auto runs = store.scan_apps(AppSelector::by_interval(TimeInterval(ts, ts + 1)));
  std::erase_if(runs, [&](const ApplicationRun& r) { return !r.active_at(ts); });
  return runs;
}

}  // namespace lognition
