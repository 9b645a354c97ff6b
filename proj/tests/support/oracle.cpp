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

#include "oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace lognition::oracle {
namespace {

bool overlaps(const ApplicationRun& r, Timestamp start, Timestamp end) {
  Timestamp run_end = std::max(r.end_ts, r.start_ts + 1);
  return r.start_ts < end && start < run_end;
}

bool by_row(const EventRecord& a, const EventRecord& b) {
  return std::tie(a.timestamp, a.type_id, a.location) < std::tie(b.timestamp, b.type_id, b.location);
}

bool by_start(const ApplicationRun& a, const ApplicationRun& b) {
  return std::tie(a.start_ts, a.job_id) < std::tie(b.start_ts, b.job_id);
}

template <typename Pred>
std::vector<ApplicationRun> select_runs(const std::map<std::string, ApplicationRun>& runs,
                                        Pred pred) {
  std::vector<ApplicationRun> out;
  for (const auto& [id, r] : runs) {
    if (pred(r)) out.push_back(r);
  }
  std::sort(out.begin(), out.end(), by_start);
  return out;
}

}  // namespace

void ReferenceStore::write_event(const EventRecord& r) {
  Key key{r.timestamp, r.type_id, r.location};
  auto it = rows_.find(key);
  if (it == rows_.end()) {
    rows_.emplace(key, r);
  } else if (r.count > it->second.count) {
    it->second = r;
  }
}

void ReferenceStore::write_application(const ApplicationRun& run) { runs_[run.job_id] = run; }

std::vector<EventRecord> ReferenceStore::all_events() const {
  std::vector<EventRecord> out;
  for (const auto& [k, r] : rows_) out.push_back(r);
  std::sort(out.begin(), out.end(), by_row);
  return out;
}

std::vector<ApplicationRun> ReferenceStore::all_runs() const {
  return select_runs(runs_, [](const ApplicationRun&) { return true; });
}

std::vector<EventRecord> ReferenceStore::by_type(const std::string& type, Timestamp start,
                                                 Timestamp end) const {
  std::vector<EventRecord> out;
  for (const auto& [k, r] : rows_) {
    if (r.type_id == type && r.timestamp >= start && r.timestamp < end) out.push_back(r);
  }
  std::sort(out.begin(), out.end(), by_row);
  return out;
}

std::vector<EventRecord> ReferenceStore::by_location(const LocationSelector& sel, Timestamp start,
                                                     Timestamp end) const {
  std::vector<EventRecord> out;
  for (const auto& [k, r] : rows_) {
    if (sel.matches(r.location) && r.timestamp >= start && r.timestamp < end) out.push_back(r);
  }
  std::sort(out.begin(), out.end(), by_row);
  return out;
}

bool ReferenceStore::run_matches(const ApplicationRun& r, const Context& ctx) const {
  if (!overlaps(r, ctx.interval.start(), ctx.interval.end())) return false;
  if (ctx.users && !ctx.users->count(r.user)) return false;
  if (ctx.apps && !ctx.apps->count(r.app_name) && !ctx.apps->count(r.job_id)) return false;
  if (ctx.locations) {
    bool hit = false;
    for (const auto& n : r.nodes) {
      for (const auto& s : *ctx.locations) hit = hit || s.matches(n);
    }
    if (!hit) return false;
  }
  return true;
}

std::vector<EventRecord> ReferenceStore::events(const Context& ctx) const {
  std::vector<EventRecord> out;
  for (const auto& [k, r] : rows_) {
    if (r.timestamp < ctx.interval.start() || r.timestamp >= ctx.interval.end()) continue;
    if (ctx.event_types && !ctx.event_types->count(r.type_id)) continue;
    if (ctx.locations) {
      bool hit = false;
      for (const auto& s : *ctx.locations) hit = hit || s.matches(r.location);
      if (!hit) continue;
    }
    if (ctx.users || ctx.apps) {
      bool joined = false;
      for (const auto& [id, run] : runs_) {
        if (!run.nodes.count(r.location)) continue;
        if (!(run.start_ts <= r.timestamp && r.timestamp < run.end_ts)) continue;
        if (ctx.users && !ctx.users->count(run.user)) continue;
        if (ctx.apps && !ctx.apps->count(run.app_name) && !ctx.apps->count(run.job_id)) continue;
        joined = true;
        break;
      }
      if (!joined) continue;
    }
    out.push_back(r);
  }
  std::sort(out.begin(), out.end(), by_row);
  return out;
}

std::vector<ApplicationRun> ReferenceStore::apps(const Context& ctx) const {
  return select_runs(runs_, [&](const ApplicationRun& r) { return run_matches(r, ctx); });
}

std::vector<ApplicationRun> ReferenceStore::apps_overlapping(Timestamp start, Timestamp end) const {
  return select_runs(runs_, [&](const ApplicationRun& r) { return overlaps(r, start, end); });
}

std::vector<ApplicationRun> ReferenceStore::apps_of_user(const std::string& user) const {
  return select_runs(runs_, [&](const ApplicationRun& r) { return r.user == user; });
}

std::vector<ApplicationRun> ReferenceStore::apps_named(const std::string& name) const {
  return select_runs(runs_, [&](const ApplicationRun& r) { return r.app_name == name; });
}

std::vector<ApplicationRun> ReferenceStore::apps_at_location(const LocationSelector& sel,
                                                             Timestamp start, Timestamp end) const {
  return select_runs(runs_, [&](const ApplicationRun& r) {
    if (!overlaps(r, start, end)) return false;
    return std::any_of(r.nodes.begin(), r.nodes.end(),
                       [&](const NodeLocation& n) { return sel.matches(n); });
  });
}

std::vector<ApplicationRun> ReferenceStore::placements(Timestamp ts) const {
  return select_runs(runs_,
                     [&](const ApplicationRun& r) { return r.start_ts <= ts && ts < r.end_ts; });
}

std::map<NodeLocation, std::uint64_t> ReferenceStore::heatmap(const Context& ctx,
                                                              const std::string& type) const {
  std::map<NodeLocation, std::uint64_t> out;
  for (const auto& e : events(ctx)) {
    if (e.type_id == type) out[e.location] += e.count;
  }
  return out;
}

std::vector<std::uint64_t> ReferenceStore::histogram(const Context& ctx, Timestamp width) const {
  Timestamp len = ctx.interval.end() - ctx.interval.start();
  std::vector<std::uint64_t> bins(static_cast<std::size_t>((len + width - 1) / width), 0);
  for (const auto& e : events(ctx)) {
    bins[static_cast<std::size_t>((e.timestamp - ctx.interval.start()) / width)] += e.count;
  }
  return bins;
}

std::map<std::string, std::uint64_t> ReferenceStore::distribution(const Context& ctx,
                                                                  const std::string& level) const {
  std::map<std::string, std::uint64_t> out;
  for (const auto& e : events(ctx)) {
    const auto& l = e.location;
    std::string key = "c" + std::to_string(l.cabinet_col()) + "-" + std::to_string(l.cabinet_row());
    if (level != "cabinet") key += "c" + std::to_string(l.cage()) + "s" + std::to_string(l.slot());
    if (level == "node") key += "n" + std::to_string(l.node());
    out[key] += e.count;
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

NodeLocation random_node(std::mt19937_64& rng, unsigned cabinets) {
  auto u = [&](unsigned hi) { return std::uniform_int_distribution<unsigned>(0, hi)(rng); };
  unsigned col = u(cabinets - 1);
  unsigned cage = u(2);
  unsigned slot = u(7);
  unsigned node = u(3);
  return NodeLocation(0, col, cage, slot, node);
}

}  // namespace

Corpus random_corpus(std::uint64_t seed, const CorpusShape& s) {
  std::mt19937_64 rng(seed);
  Corpus c;
  const Timestamp span = static_cast<Timestamp>(s.hours) * kHourMs;
  std::uniform_int_distribution<Timestamp> ts(s.start, s.start + span - 1);
  std::uniform_int_distribution<std::uint32_t> count(1, 5);
  std::bernoulli_distribution dup(s.duplicate_fraction);
  for (std::size_t i = 0; i < s.events; ++i) {
    EventRecord r;
    if (!c.events.empty() && dup(rng)) {
      r = c.events[std::uniform_int_distribution<std::size_t>(0, c.events.size() - 1)(rng)];
    } else {
      // Coarse timestamps make collisions with later duplicates plausible.
      r.timestamp = ts(rng) / 1000 * 1000 + 1;
      r.type_id = s.types[std::uniform_int_distribution<std::size_t>(0, s.types.size() - 1)(rng)];
      r.location = random_node(rng, s.cabinets);
    }
    r.count = count(rng);
    r.raw_message = "msg " + std::to_string(i % 17) + " " + r.type_id;
    c.events.push_back(r);
  }
  for (std::size_t i = 0; i < s.runs; ++i) {
    ApplicationRun r;
    r.job_id = "job" + std::to_string(std::uniform_int_distribution<std::size_t>(0, s.runs)(rng));
    r.user = s.users[std::uniform_int_distribution<std::size_t>(0, s.users.size() - 1)(rng)];
    r.app_name = s.apps[std::uniform_int_distribution<std::size_t>(0, s.apps.size() - 1)(rng)];
    r.start_ts = ts(rng);
    r.end_ts = r.start_ts + std::uniform_int_distribution<Timestamp>(0, 3 * kHourMs)(rng);
    unsigned n = std::uniform_int_distribution<unsigned>(1, 6)(rng);
    for (unsigned j = 0; j < n; ++j) r.nodes.insert(random_node(rng, s.cabinets));
    r.exit_status = ExitStatus::success;
    c.runs.push_back(r);
  }
  return c;
}

Context random_context(std::mt19937_64& rng, const CorpusShape& s) {
  const Timestamp span = static_cast<Timestamp>(s.hours) * kHourMs;
  std::uniform_int_distribution<Timestamp> ts(s.start - kHourMs, s.start + span + kHourMs);
  Timestamp a = ts(rng), b = ts(rng);
  if (a == b) ++b;
  Context ctx(TimeInterval(std::min(a, b), std::max(a, b)));
  std::bernoulli_distribution half(0.5);
  // Unknown users and apps simply match nothing; unknown types are rejected.
  auto subset = [&](const std::vector<std::string>& from, bool add_absent) {
    std::set<std::string> out;
    for (const auto& v : from) {
      if (half(rng)) out.insert(v);
    }
    if (add_absent && half(rng)) out.insert("absent");
    return out;
  };
  if (half(rng)) ctx.event_types = subset(s.types, false);
  if (half(rng)) ctx.users = subset(s.users, true);
  if (half(rng)) ctx.apps = subset(s.apps, true);
  if (half(rng)) {
    std::vector<LocationSelector> locs;
    unsigned n = std::uniform_int_distribution<unsigned>(1, 3)(rng);
    for (unsigned i = 0; i < n; ++i) {
      NodeLocation node = random_node(rng, s.cabinets);
      LocationSelector sel = LocationSelector::of(node);
      switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
        case 0: sel.cage.reset(); [[fallthrough]];
        case 1: sel.slot.reset(); [[fallthrough]];
        case 2: sel.node.reset(); break;
        default: break;
      }
      locs.push_back(sel);
    }
    ctx.locations = locs;
  }
  return ctx;
}

TeCounts te_counts(const std::vector<std::uint8_t>& x, const std::vector<std::uint8_t>& y, int k) {
  TeCounts f{};
  const std::size_t n = x.size();
  if (n <= static_cast<std::size_t>(k)) return f;
  for (std::size_t t = static_cast<std::size_t>(k) - 1; t + 1 < n; ++t) {
    unsigned past = 0;
    for (int j = k - 1; j >= 0; --j) past = past * 2 + x[t - static_cast<std::size_t>(j)];
    ++f[(x[t + 1] * 4u + past) * 2u + y[t]];
  }
  return f;
}

double te_from_counts(const TeCounts& f_all) {
  // Marginals keyed by packed states: past in [0, 4), next and source one bit each.
  std::array<long double, 4> f_past{};
  std::array<long double, 8> f_next_past{}, f_past_src{};
  long double samples = 0;
  for (unsigned next = 0; next < 2; ++next) {
    for (unsigned past = 0; past < 4; ++past) {
      for (unsigned src = 0; src < 2; ++src) {
        long double c = f_all[(next * 4 + past) * 2 + src];
        f_past[past] += c;
        f_next_past[next * 4 + past] += c;
        f_past_src[past * 2 + src] += c;
        samples += c;
      }
    }
  }
  if (samples == 0) return 0.0;
  auto entropy = [&](const auto& f) {
    long double h = 0;
    for (long double c : f) {
      if (c == 0) continue;
      long double p = c / samples;
      h -= p * std::log2(p);
    }
    return h;
  };
  long double te = entropy(f_next_past) - entropy(f_past) - entropy(f_all) + entropy(f_past_src);
  return te < 0 ? 0.0 : static_cast<double>(te);
}

double te_entropy_identity(const std::vector<std::uint8_t>& x, const std::vector<std::uint8_t>& y,
                           int k) {
  return te_from_counts(te_counts(x, y, k));
}

}  // namespace lognition::oracle
