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

#include "lognition/json_io.hpp"

#include <charconv>

#include "lognition/catalog.hpp"

namespace lognition {

namespace {

const Json& require(const Json& j, const std::string& field) {
  if (!j.is_object()) throw FieldError(field, "expected an object");
  auto it = j.find(field);
  if (it == j.end() || it->is_null()) throw FieldError(field, "is required");
  return *it;
}

std::string get_string(const Json& j, const std::string& field) {
  const Json& v = require(j, field);
  if (!v.is_string()) throw FieldError(field, "expected a string");
  return v.get<std::string>();
}

std::uint64_t get_uint(const Json& v, const std::string& field) {
  if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
    throw FieldError(field, "expected a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

std::uint32_t get_u32(const Json& j, const std::string& field, std::uint32_t fallback) {
  auto it = j.find(field);
  if (it == j.end()) return fallback;
  std::uint64_t v = get_uint(*it, field);
  if (v > 0xffffffffu) throw FieldError(field, "out of range");
  return static_cast<std::uint32_t>(v);
}

std::optional<std::vector<std::string>> get_string_list(const Json& j, const std::string& field) {
  auto it = j.find(field);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_array()) throw FieldError(field, "expected an array of strings");
  std::vector<std::string> out;
  for (const auto& v : *it) {
    if (!v.is_string()) throw FieldError(field, "expected an array of strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

template <typename F>
auto with_field(const std::string& field, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const FieldError&) {
    throw;
  } catch (const Error& e) {
    throw FieldError(field, e.what());
  }
}

}  // namespace

Timestamp timestamp_from_json(const Json& value, const std::string& field) {
  if (value.is_number_integer()) return value.get<Timestamp>();
  if (value.is_string()) return parse_timestamp_param(value.get<std::string>(), field);
  throw FieldError(field, "expected epoch milliseconds or an ISO-8601 string");
}

Timestamp parse_timestamp_param(const std::string& text, const std::string& field) {
  Timestamp v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec == std::errc() && ptr == text.data() + text.size() && !text.empty()) return v;
  return with_field(field, [&] { return parse_timestamp(text); });
}

Json to_json(const EventRecord& r) {
  return Json{{"timestamp", r.timestamp},      {"type", r.type_id},
              {"location", format_node_id(r.location)}, {"count", r.count},
              {"message", r.raw_message},      {"attributes", r.attributes}};
}

EventRecord event_from_json(const Json& j, const Topology& topology) {
  EventRecord r;
  r.timestamp = timestamp_from_json(require(j, "timestamp"), "timestamp");
  r.type_id = get_string(j, "type");
  std::string loc = get_string(j, "location");
  r.location = with_field("location", [&] { return parse_node_id(loc, topology); });
  if (auto it = j.find("count"); it != j.end()) {
    std::uint64_t c = get_uint(*it, "count");
    if (c < 1 || c > 0xffffffffu) throw FieldError("count", "out of range");
    r.count = static_cast<std::uint32_t>(c);
  }
  if (auto it = j.find("message"); it != j.end()) {
    if (!it->is_string()) throw FieldError("message", "expected a string");
    r.raw_message = it->get<std::string>();
  }
  if (auto it = j.find("attributes"); it != j.end()) {
    if (!it->is_object()) throw FieldError("attributes", "expected an object of strings");
    for (auto& [k, v] : it->items()) {
      if (!v.is_string()) throw FieldError("attributes", "expected an object of strings");
      r.attributes[k] = v.get<std::string>();
    }
  }
  with_field("record", [&] { r.validate(); return 0; });
  return r;
}

Json to_json(const ApplicationRun& run) {
  Json nodes = Json::array();
  for (const auto& n : run.nodes) nodes.push_back(format_node_id(n));
  return Json{{"job_id", run.job_id},     {"user", run.user},
              {"app_name", run.app_name}, {"start_ts", run.start_ts},
              {"end_ts", run.end_ts},     {"nodes", nodes},
              {"exit_status", std::string(to_string(run.exit_status))}};
}

ApplicationRun run_from_json(const Json& j, const Topology& topology) {
  ApplicationRun run;
  run.job_id = get_string(j, "job_id");
  run.user = get_string(j, "user");
  run.app_name = get_string(j, "app_name");
  run.start_ts = timestamp_from_json(require(j, "start_ts"), "start_ts");
  run.end_ts = timestamp_from_json(require(j, "end_ts"), "end_ts");
  auto nodes = get_string_list(j, "nodes");
  if (!nodes) throw FieldError("nodes", "is required");
  for (const auto& n : *nodes) {
    run.nodes.insert(with_field("nodes", [&] { return parse_node_id(n, topology); }));
  }
  if (auto it = j.find("exit_status"); it != j.end()) {
    if (!it->is_string()) throw FieldError("exit_status", "expected a string");
    run.exit_status = with_field("exit_status", [&] { return parse_exit_status(it->get<std::string>()); });
  }
  with_field("run", [&] { run.validate(); return 0; });
  return run;
}

Json to_json(const EventTypeDef& def) {
  return Json{{"type_id", def.type_id},
              {"display_name", def.display_name},
              {"category", std::string(to_string(def.category))},
              {"severity", std::string(to_string(def.severity))},
              {"patterns", def.patterns}};
}

Json to_json(const Topology& t) {
  return Json{{"rows", t.rows},
              {"cols", t.cols},
              {"cages_per_cabinet", t.cages_per_cabinet},
              {"slots_per_cage", t.slots_per_cage},
              {"nodes_per_slot", t.nodes_per_slot},
              {"node_count", t.node_count()}};
}

Topology topology_from_json(const Json& j) {
  if (!j.is_object()) throw FieldError("topology", "expected an object");
  Topology t;
  t.rows = get_u32(j, "rows", t.rows);
  t.cols = get_u32(j, "cols", t.cols);
  t.cages_per_cabinet = get_u32(j, "cages_per_cabinet", t.cages_per_cabinet);
  t.slots_per_cage = get_u32(j, "slots_per_cage", t.slots_per_cage);
  t.nodes_per_slot = get_u32(j, "nodes_per_slot", t.nodes_per_slot);
  with_field("topology", [&] { t.validate(); return 0; });
  return t;
}

Json to_json(const RingConfig& r) {
  return Json{{"storage_nodes", r.storage_nodes},
              {"vnodes_per_node", r.vnodes_per_node},
              {"replication_factor", r.replication_factor},
              {"hash", r.hash}};
}

RingConfig ring_from_json(const Json& j) {
  if (!j.is_object()) throw FieldError("ring", "expected an object");
  RingConfig r;
  r.storage_nodes = get_u32(j, "storage_nodes", r.storage_nodes);
  r.vnodes_per_node = get_u32(j, "vnodes_per_node", r.vnodes_per_node);
  r.replication_factor = get_u32(j, "replication_factor", r.replication_factor);
  if (j.contains("hash")) r.hash = get_string(j, "hash");
  with_field("ring", [&] { r.validate(); return 0; });
  return r;
}

Json to_json(const Context& ctx) {
  Json j{{"start", ctx.interval.start()}, {"end", ctx.interval.end()}};
  if (ctx.event_types) j["types"] = *ctx.event_types;
  if (ctx.locations) {
    Json locs = Json::array();
    for (const auto& s : *ctx.locations) locs.push_back(format_location_selector(s));
    j["locations"] = locs;
  }
  if (ctx.users) j["users"] = *ctx.users;
  if (ctx.apps) j["apps"] = *ctx.apps;
  return j;
}

Context context_from_json(const Json& j, const Topology& topology) {
  if (!j.is_object()) throw FieldError("context", "expected a JSON object");
  static const std::set<std::string> known = {"start", "end", "types", "locations", "users", "apps"};
  for (auto& [k, v] : j.items()) {
    if (!known.count(k)) throw FieldError(k, "unknown context field");
  }
  Timestamp start = timestamp_from_json(require(j, "start"), "start");
  Timestamp end = timestamp_from_json(require(j, "end"), "end");
  if (start >= end) throw FieldError("end", "must be greater than start");
  Context ctx(TimeInterval(start, end));
  if (auto types = get_string_list(j, "types")) ctx.event_types.emplace(types->begin(), types->end());
  if (auto locs = get_string_list(j, "locations")) {
    std::vector<LocationSelector> sels;
    for (const auto& s : *locs) {
      sels.push_back(with_field("locations", [&] { return parse_location_selector(s, topology); }));
    }
    ctx.locations = std::move(sels);
  }
  if (auto users = get_string_list(j, "users")) ctx.users.emplace(users->begin(), users->end());
  if (auto apps = get_string_list(j, "apps")) ctx.apps.emplace(apps->begin(), apps->end());
  return ctx;
}

Json to_json(const ContextResult& r) {
  Json events = Json::array();
  for (const auto& e : r.events) events.push_back(to_json(e));
  Json apps = Json::array();
  for (const auto& a : r.apps) apps.push_back(to_json(a));
  return Json{{"interval", {{"start", r.interval.start()}, {"end", r.interval.end()}}},
              {"events", events},
              {"apps", apps},
              {"truncated", r.truncated},
              {"limit", r.limit},
              {"total_events", r.total_events},
              {"index_used", r.index_used}};
}

Json to_json(const HeatMap& m) {
  Json counts = Json::object();
  for (const auto& [loc, c] : m.counts) counts[format_node_id(loc)] = c;
  return Json{{"type", m.type_id}, {"counts", counts}, {"max", m.max}, {"total", m.total},
              {"topology", to_json(m.topology)}};
}

Json to_json(const Distribution& d) {
  Json buckets = Json::array();
  for (const auto& [k, c] : d.buckets) {
    Json b{{"key", k}, {"count", c}};
    if (auto it = d.labels.find(k); it != d.labels.end()) b["app_name"] = it->second;
    buckets.push_back(b);
  }
  return Json{{"group_by", std::string(to_string(d.group_by))},
              {"buckets", buckets},
              {"total", d.total},
              {"multi_attributed", d.multi_attributed}};
}

Json to_json(const Histogram& h) {
  Json bins = Json::array();
  for (const auto& [start, c] : h.bins) bins.push_back(Json{{"start", start}, {"count", c}});
  return Json{{"interval", {{"start", h.interval.start()}, {"end", h.interval.end()}}},
              {"bin_width_ms", h.bin_width_ms},
              {"bins", bins},
              {"total", h.total}};
}

Json placements_to_json(Timestamp ts, const std::vector<ApplicationRun>& runs) {
  Json arr = Json::array();
  for (const auto& r : runs) arr.push_back(to_json(r));
  return Json{{"ts", ts}, {"runs", arr}};
}

Json to_json(const TEResult& te) {
  return Json{{"te_y_to_x", te.te_y_to_x},
              {"te_x_to_y", te.te_x_to_y},
              {"n_samples", te.n_samples},
              {"threshold", te.threshold},
              {"history_length", te.history_length}};
}

Json to_json(const std::vector<TEWindow>& windows) {
  Json arr = Json::array();
  for (const auto& w : windows) {
    arr.push_back(Json{{"window_start", w.window_start},
                       {"te_a_to_b", w.result.te_x_to_y},
                       {"te_b_to_a", w.result.te_y_to_x},
                       {"n_samples", w.result.n_samples},
                       {"low_support", w.low_support}});
  }
  return Json{{"units", "bits"}, {"windows", arr}};
}

Json to_json(const TermStats& s, std::size_t limit) {
  Json terms = Json::array();
  for (std::size_t i = 0; i < s.terms.size() && i < limit; ++i) {
    const auto& t = s.terms[i];
    terms.push_back(Json{{"term", t.term}, {"count", t.raw_count}, {"doc_frequency", t.doc_frequency}});
  }
  return Json{{"documents", s.documents}, {"tokens", s.tokens}, {"distinct_terms", s.terms.size()},
              {"terms", terms}};
}

Json to_json(const TfIdfResult& r, std::size_t limit) {
  Json terms = Json::array();
  for (std::size_t i = 0; i < r.terms.size() && i < limit; ++i) {
    const auto& t = r.terms[i];
    terms.push_back(Json{{"term", t.term},
                         {"count", t.raw_count},
                         {"doc_frequency", t.doc_frequency},
                         {"score", t.score}});
  }
  Json j{{"documents", r.documents}, {"distinct_terms", r.terms.size()}, {"terms", terms}};
  if (!r.per_document.empty()) {
    Json docs = Json::array();
    for (const auto& d : r.per_document) {
      Json scores = Json::object();
      for (const auto& [t, v] : d.scores) scores[t] = v;
      docs.push_back(Json{{"doc", d.doc_id}, {"scores", scores}});
    }
    j["per_document"] = docs;
  }
  return j;
}

Json to_json(const ImportStats& s) {
  Json q = Json::array();
  for (const auto& e : s.quarantine) {
    q.push_back(Json{{"origin", e.origin}, {"line", e.line}, {"reason", e.reason}});
  }
  return Json{{"lines_read", s.lines_read},
              {"lines_matched", s.lines_matched},
              {"lines_unmatched", s.lines_unmatched},
              {"lines_quarantined", s.lines_quarantined},
              {"records_written", s.records_written},
              {"coalesced_away", s.coalesced_away},
              {"apps_written", s.apps_written},
              {"per_type", s.per_type},
              {"file_errors", s.file_errors},
              {"quarantine", q}};
}

Json to_json(const StoreStats& s) {
  Json nodes = Json::array();
  for (std::size_t i = 0; i < s.nodes.size(); ++i) {
    const auto& n = s.nodes[i];
    nodes.push_back(Json{{"node", i}, {"partitions", n.partitions}, {"rows", n.rows}, {"bytes", n.bytes}});
  }
  return Json{{"nodes", nodes},
              {"total_partitions", s.total_partitions},
              {"total_rows", s.total_rows},
              {"total_bytes", s.total_bytes},
              {"event_records", s.event_records},
              {"event_occurrences", s.event_occurrences},
              {"applications", s.applications},
              {"event_types", s.event_types}};
}

}  // namespace lognition
