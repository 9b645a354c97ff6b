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

#include "lognition/synth.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>

#include <boost/regex.hpp>

#include "lognition/catalog.hpp"
#include "lognition/error.hpp"

namespace lognition {
namespace {

const std::set<std::string>& known_types() {
  static const std::set<std::string> types{"MCE", "MEMERR", "GPUXID", "PANIC", "LustreError", "HSN"};
  return types;
}

template <typename T>
T get_field(const Json& j, const char* key, const std::string& path, T fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  try {
    return it->template get<T>();
  } catch (const nlohmann::json::exception&) {
    throw FieldError(path + key, "has the wrong type");
  }
}

Timestamp get_ts(const Json& j, const char* key, const std::string& path, Timestamp fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  return timestamp_from_json(*it, path + key);
}

void reject_unknown(const Json& j, std::initializer_list<const char*> allowed,
                    const std::string& path) {
  if (!j.is_object()) throw FieldError(path.empty() ? "spec" : path.substr(0, path.size() - 1),
                                       "must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = std::any_of(allowed.begin(), allowed.end(),
                          [&](const char* a) { return it.key() == a; });
    if (!ok) throw FieldError(path + it.key(), "unknown field");
  }
}

/// Reads an optional phenomenon: absent keeps `current`, null disables it.
template <typename T, typename Parse>
std::optional<T> get_phenomenon(const Json& j, const char* key, std::optional<T> current,
                                Parse parse) {
  auto it = j.find(key);
  if (it == j.end()) return current;
  if (it->is_null()) return std::nullopt;
  return parse(*it, std::string(key) + ".", current.value_or(T{}));
}

HotNodeSpec hot_from_json(const Json& j, const std::string& p, HotNodeSpec d) {
  reject_unknown(j, {"type", "location", "factor"}, p);
  d.type_id = get_field(j, "type", p, d.type_id);
  d.location = get_field(j, "location", p, d.location);
  d.factor = get_field(j, "factor", p, d.factor);
  return d;
}

CouplingSpec coupling_from_json(const Json& j, const std::string& p, CouplingSpec d) {
  reject_unknown(j, {"type_a", "type_b", "lag_ms", "strength", "driver_probability", "offset_ms",
                     "duration_ms"},
                 p);
  d.type_a = get_field(j, "type_a", p, d.type_a);
  d.type_b = get_field(j, "type_b", p, d.type_b);
  d.lag_ms = get_field(j, "lag_ms", p, d.lag_ms);
  d.strength = get_field(j, "strength", p, d.strength);
  d.driver_probability = get_field(j, "driver_probability", p, d.driver_probability);
  d.offset_ms = get_field(j, "offset_ms", p, d.offset_ms);
  d.duration_ms = get_field(j, "duration_ms", p, d.duration_ms);
  return d;
}

FloodSpec flood_from_json(const Json& j, const std::string& p, FloodSpec d) {
  reject_unknown(j, {"type", "token", "offset_ms", "duration_ms", "volume"}, p);
  d.type_id = get_field(j, "type", p, d.type_id);
  d.token = get_field(j, "token", p, d.token);
  d.offset_ms = get_field(j, "offset_ms", p, d.offset_ms);
  d.duration_ms = get_field(j, "duration_ms", p, d.duration_ms);
  d.volume = get_field(j, "volume", p, d.volume);
  return d;
}

AppMixSpec apps_from_json(const Json& j, const std::string& p, AppMixSpec d) {
  reject_unknown(j, {"runs", "min_nodes", "max_nodes", "min_duration_ms", "max_duration_ms",
                     "failure_rate", "users", "apps"},
                 p);
  d.runs = get_field(j, "runs", p, d.runs);
  d.min_nodes = get_field(j, "min_nodes", p, d.min_nodes);
  d.max_nodes = get_field(j, "max_nodes", p, d.max_nodes);
  d.min_duration_ms = get_field(j, "min_duration_ms", p, d.min_duration_ms);
  d.max_duration_ms = get_field(j, "max_duration_ms", p, d.max_duration_ms);
  d.failure_rate = get_field(j, "failure_rate", p, d.failure_rate);
  d.users = get_field(j, "users", p, d.users);
  d.apps = get_field(j, "apps", p, d.apps);
  return d;
}

bool is_probability(double v) { return v >= 0.0 && v <= 1.0; }

void check_window(const SynthSpec& s, Timestamp offset, Timestamp duration, const char* what) {
  if (offset < 0 || duration <= 0 || offset + duration > s.duration_ms) {
    throw ArgumentError(std::string(what) + " window must lie inside the corpus interval");
  }
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string hex(std::uint64_t v, int width) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%0*llx", width, static_cast<unsigned long long>(v));
  return buf;
}

std::string ost_name(unsigned index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "OST%04X", index);
  return buf;
}

// ---------------------------------------------------------------------------
// Line bodies. Each must match its catalog pattern.

class Generator {
 public:
  explicit Generator(std::uint64_t seed) : rng_(seed) {}

  std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi) {
    return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng_);
  }
  Timestamp uniform_ts(Timestamp lo, Timestamp hi_exclusive) {
    return std::uniform_int_distribution<Timestamp>(lo, hi_exclusive - 1)(rng_);
  }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }
  std::uint64_t poisson(double mean) {
    if (mean <= 0.0) return 0;
    return std::poisson_distribution<std::uint64_t>(mean)(rng_);
  }
  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[uniform(0, v.size() - 1)];
  }

  std::string body(const std::string& type, const std::string& flood_token) {
    if (type == "MCE") {
      return "kernel: [Hardware Error]: Machine Check Exception: bank " +
             std::to_string(uniform(0, 8)) + " status 0x" + hex(rng_(), 16);
    }
    if (type == "MEMERR") {
      static const std::vector<std::string> ops{"read", "write", "scrub"};
      return "kernel: EDAC MC" + std::to_string(uniform(0, 1)) + ": 1 CE memory " + pick(ops) +
             " error on DIMM_" + std::string(1, static_cast<char>('A' + uniform(0, 7))) +
             std::to_string(uniform(0, 3)) + " (page 0x" + hex(uniform(0, 0xfffff), 5) + ")";
    }
    if (type == "GPUXID") {
      static const std::vector<std::string> xids{
          "13, Graphics Engine Exception on channel 0x" + std::string("00000010"),
          "31, GPU memory page fault detected",
          "48, An uncorrectable double bit error was detected on the framebuffer",
          "79, GPU has fallen off the bus"};
      return "kernel: NVRM: Xid (PCI:0000:02:00): " + pick(xids);
    }
    if (type == "PANIC") {
      static const std::vector<std::string> reasons{
          "Fatal machine check", "Out of memory and no killable processes",
          "Hard LOCKUP on cpu " + std::string("12"), "Attempted to kill init"};
      return "kernel: Kernel panic - not syncing: " + pick(reasons);
    }
    if (type == "LustreError") {
      std::string ost;
      do {
        ost = ost_name(static_cast<unsigned>(uniform(0, 0x3ff)));
      } while (ost == flood_token);
      static const std::vector<std::string> ops{"ost_connect", "ost_statfs", "obd_ping"};
      return "LustreError: 11-0: " + ost + "-osc-ffff88" + hex(uniform(0, 0xffffffff), 10) +
             ": operation " + pick(ops) + " to node 10.36." + std::to_string(uniform(0, 255)) +
             "." + std::to_string(uniform(1, 254)) + "@o2ib failed: rc = -19";
    }
    // HSN
    static const std::vector<std::string> conditions{"lane degraded", "link inactive",
                                                     "CRC error threshold exceeded"};
    return "HSN: LCB c0-0c0s" + std::to_string(uniform(0, 7)) + "a0l" +
           std::to_string(uniform(0, 47)) + " " + pick(conditions);
  }

  std::string flood_body(std::size_t i, const std::string& token) {
    switch (i % 4) {
      case 0:
        return "LustreError: 11-0: " + token + "-osc-ffff8803d1e7a000: operation ost_write to node " +
               "10.36.226.77@o2ib failed: rc = -107";
      case 1:
        return "LustreError: 167-0: This client was evicted by " + token +
               "; in progress operations using this service will fail.";
      case 2:
        return "LustreError: " + token +
               ": object storage target is not responding, request timed out after 100s";
      default:
        return "LustreError: 4231:0:(import.c:338:ptlrpc_invalidate_import()) " + token +
               ": rc = -110 waiting for callback";
    }
  }

  std::string noise_body() {
    switch (uniform(0, 3)) {
      case 0: return "systemd[1]: Started Session " + std::to_string(uniform(1, 99999)) +
                     " of user root.";
      case 1: return "sshd[" + std::to_string(uniform(1000, 65000)) + "]: Accepted publickey for user" +
                     std::to_string(uniform(1, 40)) + " from 10.1." + std::to_string(uniform(0, 255)) +
                     "." + std::to_string(uniform(1, 254)) + " port " +
                     std::to_string(uniform(1024, 65535)) + " ssh2";
      case 2: return "ntpd[" + std::to_string(uniform(1000, 65000)) + "]: time reset +0." +
                     std::to_string(uniform(100, 999)) + " s";
      default: return "kernel: Lustre: atlas2-MDT0000-mdc-ffff8803: Connection restored to service";
    }
  }

 private:
  std::mt19937_64 rng_;
};

struct Line {
  Timestamp ts;
  std::size_t file;  // 0 console.log, 1 network.log
  std::string text;
};

struct FileCounts {
  std::uint64_t matched = 0, unmatched = 0, malformed = 0;
};

}  // namespace

SynthSpec SynthSpec::demo() {
  SynthSpec s;
  s.base_rates = {{"MCE", 0.2},    {"MEMERR", 0.05},      {"GPUXID", 0.02},
                  {"PANIC", 0.01}, {"LustreError", 0.02}, {"HSN", 0.05}};
  s.hot_node = HotNodeSpec{};
  s.coupling = CouplingSpec{};
  s.flood = FloodSpec{};
  s.app_mix = AppMixSpec{};
  s.unmatched_line_fraction = 0.1;
  s.malformed_lines = 5;
  return s;
}

SynthSpec SynthSpec::from_json(const Json& j) {
  reject_unknown(j,
                 {"version", "seed", "start", "duration_ms", "cabinets", "base_rates", "hot_node",
                  "coupling", "flood", "app_mix", "unmatched_line_fraction", "malformed_lines"},
                 "");
  SynthSpec s = demo();
  s.version = get_field(j, "version", "", s.version);
  if (s.version != 1) throw FieldError("version", "unsupported version " + std::to_string(s.version));
  s.seed = get_field(j, "seed", "", s.seed);
  s.start = get_ts(j, "start", "", s.start);
  s.duration_ms = get_field(j, "duration_ms", "", s.duration_ms);
  s.cabinets = get_field(j, "cabinets", "", s.cabinets);
  s.base_rates = get_field(j, "base_rates", "", s.base_rates);
  s.hot_node = get_phenomenon(j, "hot_node", s.hot_node, hot_from_json);
  s.coupling = get_phenomenon(j, "coupling", s.coupling, coupling_from_json);
  s.flood = get_phenomenon(j, "flood", s.flood, flood_from_json);
  s.app_mix = get_phenomenon(j, "app_mix", s.app_mix, apps_from_json);
  s.unmatched_line_fraction = get_field(j, "unmatched_line_fraction", "", s.unmatched_line_fraction);
  s.malformed_lines = get_field(j, "malformed_lines", "", s.malformed_lines);
  return s;
}

Json SynthSpec::to_json() const {
  Json j{{"version", version},
         {"seed", seed},
         {"start", start},
         {"duration_ms", duration_ms},
         {"cabinets", cabinets},
         {"base_rates", base_rates},
         {"unmatched_line_fraction", unmatched_line_fraction},
         {"malformed_lines", malformed_lines}};
  j["hot_node"] = hot_node ? Json{{"type", hot_node->type_id},
                                  {"location", hot_node->location},
                                  {"factor", hot_node->factor}}
                           : Json(nullptr);
  j["coupling"] = coupling ? Json{{"type_a", coupling->type_a},
                                  {"type_b", coupling->type_b},
                                  {"lag_ms", coupling->lag_ms},
                                  {"strength", coupling->strength},
                                  {"driver_probability", coupling->driver_probability},
                                  {"offset_ms", coupling->offset_ms},
                                  {"duration_ms", coupling->duration_ms}}
                           : Json(nullptr);
  j["flood"] = flood ? Json{{"type", flood->type_id},
                            {"token", flood->token},
                            {"offset_ms", flood->offset_ms},
                            {"duration_ms", flood->duration_ms},
                            {"volume", flood->volume}}
                     : Json(nullptr);
  j["app_mix"] = app_mix ? Json{{"runs", app_mix->runs},
                                {"min_nodes", app_mix->min_nodes},
                                {"max_nodes", app_mix->max_nodes},
                                {"min_duration_ms", app_mix->min_duration_ms},
                                {"max_duration_ms", app_mix->max_duration_ms},
                                {"failure_rate", app_mix->failure_rate},
                                {"users", app_mix->users},
                                {"apps", app_mix->apps}}
                         : Json(nullptr);
  return j;
}

void SynthSpec::validate() const {
  if (start <= 0 || duration_ms <= 0 || start + duration_ms > kMaxTimestamp) {
    throw ArgumentError("corpus interval must be positive and within the timestamp range");
  }
  if (cabinets.empty()) throw ArgumentError("at least one cabinet is required");
  for (const auto& c : cabinets) {
    auto sel = parse_location_selector(c);
    if (sel.cage) throw ArgumentError("'" + c + "' is not a cabinet");
  }
  auto check_type = [](const std::string& t) {
    if (!known_types().count(t)) throw ArgumentError("no line template for type '" + t + "'");
  };
  for (const auto& [type, rate] : base_rates) {
    check_type(type);
    if (!(rate >= 0.0) || !std::isfinite(rate)) {
      throw ArgumentError("rate for '" + type + "' must be non-negative");
    }
  }
  if (!(unmatched_line_fraction >= 0.0 && unmatched_line_fraction < 1.0)) {
    throw ArgumentError("unmatched_line_fraction must lie in [0, 1)");
  }
  if (hot_node) {
    check_type(hot_node->type_id);
    if (!(hot_node->factor >= 0.0)) throw ArgumentError("hot node factor must be non-negative");
    auto loc = parse_node_id(hot_node->location);
    bool inside = std::any_of(cabinets.begin(), cabinets.end(), [&](const std::string& c) {
      return parse_location_selector(c).matches(loc);
    });
    if (!inside) throw ArgumentError("hot node lies outside the generated cabinets");
  }
  if (coupling) {
    check_type(coupling->type_a);
    check_type(coupling->type_b);
    if (coupling->lag_ms <= 0) throw ArgumentError("coupling lag must be positive");
    if (!is_probability(coupling->strength) || !is_probability(coupling->driver_probability)) {
      throw ArgumentError("coupling probabilities must lie in [0, 1]");
    }
    check_window(*this, coupling->offset_ms, coupling->duration_ms, "coupling");
    if (coupling->offset_ms + coupling->duration_ms + coupling->lag_ms > duration_ms) {
      throw ArgumentError("coupling responses would fall outside the corpus interval");
    }
  }
  if (flood) {
    check_type(flood->type_id);
    if (flood->type_id != "LustreError") throw ArgumentError("floods are LustreError messages");
    static const boost::regex ost("OST[0-9A-Fa-f]{4}");
    if (!boost::regex_match(flood->token, ost)) {
      throw ArgumentError("flood token must look like OSTxxxx");
    }
    check_window(*this, flood->offset_ms, flood->duration_ms, "flood");
  }
  if (app_mix) {
    const auto& a = *app_mix;
    if (a.min_nodes < 1 || a.max_nodes < a.min_nodes) throw ArgumentError("bad app node range");
    if (a.min_duration_ms <= 0 || a.max_duration_ms < a.min_duration_ms ||
        a.min_duration_ms > duration_ms) {
      throw ArgumentError("bad app duration range");
    }
    if (!is_probability(a.failure_rate)) throw ArgumentError("failure_rate must lie in [0, 1]");
    if (a.runs > 0 && (a.users.empty() || a.apps.empty())) {
      throw ArgumentError("app mix needs users and apps");
    }
  }
}

SynthCorpus synth_corpus(const SynthSpec& spec) {
  spec.validate();
  Topology topo;
  std::vector<NodeLocation> nodes;
  for (const auto& c : spec.cabinets) {
    for (const auto& n : parse_location_selector(c).expand(topo)) nodes.push_back(n);
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  const Timestamp t0 = spec.start;
  const Timestamp t1 = spec.start + spec.duration_ms;
  const double hours = static_cast<double>(spec.duration_ms) / kHourMs;
  const std::string flood_token = spec.flood ? spec.flood->token : std::string();

  Generator gen(spec.seed);
  std::vector<Line> lines;
  std::map<std::string, std::uint64_t> per_type;
  for (const auto& t : known_types()) per_type[t] = 0;
  FileCounts counts[2];

  auto emit = [&](Timestamp ts, const NodeLocation& loc, const std::string& type,
                  const std::string& body) {
    std::size_t file = type == "HSN" ? 1 : 0;
    lines.push_back({ts, file, format_timestamp(ts) + " " + format_node_id(loc) + " " + body});
    ++per_type[type];
    ++counts[file].matched;
  };

  // Background rates, one Poisson draw per (type, node).
  std::optional<NodeLocation> hot;
  if (spec.hot_node) hot = parse_node_id(spec.hot_node->location);
  std::uint64_t hot_count = 0;
  std::map<NodeLocation, std::uint64_t> hot_type_counts;
  for (const auto& [type, rate] : spec.base_rates) {
    for (const auto& node : nodes) {
      double r = rate;
      bool is_hot_type = spec.hot_node && spec.hot_node->type_id == type;
      if (is_hot_type && node == *hot) r *= spec.hot_node->factor;
      std::uint64_t n = gen.poisson(r * hours);
      for (std::uint64_t i = 0; i < n; ++i) {
        emit(gen.uniform_ts(t0, t1), node, type, gen.body(type, flood_token));
      }
      if (is_hot_type) hot_type_counts[node] += n;
    }
  }

  Json coupling_truth = nullptr;
  if (spec.coupling) {
    const auto& c = *spec.coupling;
    Timestamp ws = t0 + c.offset_ms, we = ws + c.duration_ms;
    std::uint64_t drivers = 0, responses = 0;
    for (Timestamp bin = ws; bin + c.lag_ms <= we; bin += c.lag_ms) {
      if (!gen.chance(c.driver_probability)) continue;
      const auto& node = gen.pick(nodes);
      Timestamp ts = gen.uniform_ts(bin, bin + c.lag_ms);
      emit(ts, node, c.type_a, gen.body(c.type_a, flood_token));
      ++drivers;
      if (spec.hot_node && spec.hot_node->type_id == c.type_a) ++hot_type_counts[node];
      if (gen.chance(c.strength)) {
        emit(ts + c.lag_ms, node, c.type_b, gen.body(c.type_b, flood_token));
        ++responses;
        if (spec.hot_node && spec.hot_node->type_id == c.type_b) ++hot_type_counts[node];
      }
    }
    coupling_truth = {{"type_a", c.type_a},         {"type_b", c.type_b},
                      {"lag_ms", c.lag_ms},         {"strength", c.strength},
                      {"window", {{"start", ws}, {"end", we}}},
                      {"driver_events", drivers},   {"response_events", responses}};
  }

  Json flood_truth = nullptr;
  if (spec.flood) {
    const auto& f = *spec.flood;
    Timestamp ws = t0 + f.offset_ms, we = ws + f.duration_ms;
    for (std::uint64_t i = 0; i < f.volume; ++i) {
      const auto& node = gen.pick(nodes);
      emit(gen.uniform_ts(ws, we), node, f.type_id, gen.flood_body(i, f.token));
      if (spec.hot_node && spec.hot_node->type_id == f.type_id) ++hot_type_counts[node];
    }
    flood_truth = {{"type", f.type_id},
                   {"token", f.token},
                   {"term", lower(f.token)},
                   {"window", {{"start", ws}, {"end", we}}},
                   {"volume", f.volume}};
  }

  // Lines that match an MCE pattern but carry a bad location or timestamp.
  for (std::uint64_t i = 0; i < spec.malformed_lines; ++i) {
    Timestamp ts = gen.uniform_ts(t0, t1);
    std::string body = gen.body("MCE", flood_token);
    std::string text = i % 2 == 0 ? format_timestamp(ts) + " c99-99c0s0n0 " + body
                                  : "2026-13-45T25:61:00.000Z " +
                                        format_node_id(gen.pick(nodes)) + " " + body;
    lines.push_back({ts, 0, std::move(text)});
    ++counts[0].malformed;
  }

  std::uint64_t pattern_lines = counts[0].matched + counts[1].matched + spec.malformed_lines;
  double f = spec.unmatched_line_fraction;
  auto unmatched =
      static_cast<std::uint64_t>(std::llround(f * static_cast<double>(pattern_lines) / (1.0 - f)));
  for (std::uint64_t i = 0; i < unmatched; ++i) {
    Timestamp ts = gen.uniform_ts(t0, t1);
    std::size_t file = gen.chance(0.8) ? 0 : 1;
    lines.push_back(
        {ts, file, format_timestamp(ts) + " " + format_node_id(gen.pick(nodes)) + " " + gen.noise_body()});
    ++counts[file].unmatched;
  }

  std::vector<ApplicationRun> runs;
  std::uint64_t failed = 0;
  if (spec.app_mix) {
    const auto& a = *spec.app_mix;
    for (std::uint64_t i = 0; i < a.runs; ++i) {
      ApplicationRun r;
      char id[32];
      std::snprintf(id, sizeof id, "job-%06llu", static_cast<unsigned long long>(i + 1));
      r.job_id = id;
      r.user = gen.pick(a.users);
      r.app_name = gen.pick(a.apps);
      r.start_ts = gen.uniform_ts(t0, t1 - a.min_duration_ms + 1);
      Timestamp d = static_cast<Timestamp>(gen.uniform(static_cast<std::uint64_t>(a.min_duration_ms),
                                                       static_cast<std::uint64_t>(a.max_duration_ms)));
      r.end_ts = std::min(r.start_ts + d, t1);
      std::size_t size = std::min<std::size_t>(gen.uniform(a.min_nodes, a.max_nodes), nodes.size());
      std::size_t first = gen.uniform(0, nodes.size() - size);
      r.nodes.insert(nodes.begin() + static_cast<std::ptrdiff_t>(first),
                     nodes.begin() + static_cast<std::ptrdiff_t>(first + size));
      bool fail = gen.chance(a.failure_rate);
      r.exit_status = fail ? ExitStatus::failed : ExitStatus::success;
      failed += fail;
      runs.push_back(std::move(r));
    }
    std::stable_sort(runs.begin(), runs.end(), [](const ApplicationRun& x, const ApplicationRun& y) {
      return x.start_ts < y.start_ts;
    });
  }

  std::stable_sort(lines.begin(), lines.end(),
                   [](const Line& x, const Line& y) { return x.ts < y.ts; });

  SynthCorpus out;
  out.files = {{"console.log", {}}, {"network.log", {}}, {"apps.jsonl", {}}};
  for (auto& l : lines) out.files[l.file].lines.push_back(std::move(l.text));
  for (const auto& r : runs) out.files[2].lines.push_back(lognition::to_json(r).dump());
  out.runs = std::move(runs);

  Json files = Json::object();
  FileCounts total;
  for (std::size_t i = 0; i < 2; ++i) {
    const auto& c = counts[i];
    files[out.files[i].name] = {{"lines", out.files[i].lines.size()},
                                {"matched", c.matched},
                                {"unmatched", c.unmatched},
                                {"malformed", c.malformed}};
    total.matched += c.matched;
    total.unmatched += c.unmatched;
    total.malformed += c.malformed;
  }
  files["apps.jsonl"] = {{"lines", out.files[2].lines.size()}};

  Json hot_truth = nullptr;
  if (spec.hot_node) {
    std::uint64_t max_other = 0, other_total = 0;
    hot_count = hot_type_counts[*hot];
    for (const auto& n : nodes) {
      if (n == *hot) continue;
      std::uint64_t c = hot_type_counts.count(n) ? hot_type_counts.at(n) : 0;
      max_other = std::max(max_other, c);
      other_total += c;
    }
    double mean_other =
        nodes.size() > 1 ? static_cast<double>(other_total) / static_cast<double>(nodes.size() - 1) : 0.0;
    hot_truth = {{"type", spec.hot_node->type_id},  {"location", spec.hot_node->location},
                 {"factor", spec.hot_node->factor}, {"count", hot_count},
                 {"max_other_count", max_other},    {"mean_other_count", mean_other}};
  }

  Json events_per_type = Json::object();
  for (const auto& [t, n] : per_type) {
    if (n > 0) events_per_type[t] = n;
  }

  out.ground_truth = {
      {"version", 1},
      {"seed", spec.seed},
      {"interval", {{"start", t0}, {"end", t1}}},
      {"cabinets", spec.cabinets},
      {"nodes", nodes.size()},
      {"files", files},
      {"totals",
       {{"lines", total.matched + total.unmatched + total.malformed},
        {"matched", total.matched},
        {"unmatched", total.unmatched},
        {"malformed", total.malformed}}},
      {"events_per_type", events_per_type},
      {"hot_node", hot_truth},
      {"coupling", coupling_truth},
      {"flood", flood_truth},
      {"apps", {{"runs", out.runs.size()}, {"failed", failed}}},
  };
  return out;
}

Json synth_generate(const SynthSpec& spec, const std::filesystem::path& out_dir) {
  SynthCorpus corpus = synth_corpus(spec);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error("cannot create '" + out_dir.string() + "': " + ec.message());
  auto write = [&](const std::string& name, auto&& body) {
    std::ofstream out(out_dir / name, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + (out_dir / name).string() + "'");
    body(out);
    if (!out) throw Error("write failed for '" + (out_dir / name).string() + "'");
  };
  for (const auto& f : corpus.files) {
    write(f.name, [&](std::ofstream& out) {
      for (const auto& l : f.lines) out << l << '\n';
    });
  }
  write("ground_truth.json", [&](std::ofstream& out) { out << corpus.ground_truth.dump(2) << '\n'; });
  return corpus.ground_truth;
}

}  // namespace lognition
