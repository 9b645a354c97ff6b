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

#include "lognition/store.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <mutex>
#include <set>
#include <sstream>

#include <json.hpp>

#include "lognition/codec.hpp"

namespace lognition {

using json = nlohmann::json;
namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Segment log
//
// Frame layout (little-endian):
//   u32 payload_length
//   payload: u8 op | u16 key_length | key bytes | record body
// Segments are named segment-NNNNNN.log; a fresh segment is started on every
// open so existing files are never rewritten. manifest.json lists each
// segment's durable length and, per partition key (hex), the (segment index,
// frame offset) pairs in write order.

class SegmentLog {
 public:
  using Visitor = std::function<void(std::uint8_t, const std::string&, std::string_view)>;

  explicit SegmentLog(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

  ~SegmentLog() {
    try {
      flush();
    } catch (...) {
    }
  }

  void recover(const Visitor& visit) {
    std::map<std::string, std::string> contents;
    auto load = [&](const std::string& name) -> const std::string& {
      auto it = contents.find(name);
      if (it != contents.end()) return it->second;
      std::ifstream in(dir_ / name, std::ios::binary);
      std::ostringstream buf;
      buf << in.rdbuf();
      return contents.emplace(name, buf.str()).first->second;
    };

    std::set<std::string> covered;
    fs::path manifest = dir_ / "manifest.json";
    if (fs::exists(manifest)) {
      json m;
      try {
        std::ifstream in(manifest);
        m = json::parse(in);
      } catch (const json::exception& e) {
        throw StorageError("corrupt manifest " + manifest.string() + ": " + e.what());
      }
      for (const auto& s : m.at("segments")) {
        segments_.push_back({s.at("name").get<std::string>(), s.at("length").get<std::uint64_t>()});
        covered.insert(segments_.back().name);
      }
      for (const auto& [hex_key, offsets] : m.at("partitions").items()) {
        std::string key = codec::from_hex(hex_key);
        for (const auto& pos : offsets) {
          auto seg = pos.at(0).get<std::uint32_t>();
          auto off = pos.at(1).get<std::uint64_t>();
          if (seg >= segments_.size()) throw StorageError("manifest references missing segment");
          const std::string& data = load(segments_[seg].name);
          auto frame = read_frame(data, off);
          if (!frame || frame->key != key) {
            throw StorageError("manifest offset does not hold a frame for its partition");
          }
          visit(frame->op, frame->key, frame->body);
          index_[key].emplace_back(seg, off);
        }
      }
      // Frames appended after the last manifest write.
      for (std::uint32_t seg = 0; seg < segments_.size(); ++seg) {
        const std::string& data = load(segments_[seg].name);
        segments_[seg].length = replay_from(seg, data, segments_[seg].length, visit);
      }
    }

    std::vector<std::string> loose;
    for (const auto& entry : fs::directory_iterator(dir_)) {
      std::string name = entry.path().filename().string();
      if (name.rfind("segment-", 0) == 0 && !covered.count(name)) loose.push_back(name);
    }
    std::sort(loose.begin(), loose.end());
    for (const auto& name : loose) {
      segments_.push_back({name, 0});
      auto seg = static_cast<std::uint32_t>(segments_.size() - 1);
      segments_[seg].length = replay_from(seg, load(name), 0, visit);
    }

    char name[32];
    std::snprintf(name, sizeof name, "segment-%06zu.log", next_segment_number());
    segments_.push_back({name, 0});
    out_.open(dir_ / name, std::ios::binary | std::ios::trunc);
    if (!out_) throw StorageError("cannot open segment " + (dir_ / name).string());
  }

  void append(std::uint8_t op, const std::string& key, std::string_view body) {
    codec::Writer w;
    std::uint32_t payload = static_cast<std::uint32_t>(1 + 2 + key.size() + body.size());
    w.u32(payload);
    w.u8(op);
    w.u16(static_cast<std::uint16_t>(key.size()));
    std::string frame = std::move(w).bytes();
    frame += key;
    frame.append(body);
    auto seg = static_cast<std::uint32_t>(segments_.size() - 1);
    index_[key].emplace_back(seg, segments_.back().length);
    out_.write(frame.data(), static_cast<std::streamsize>(frame.size()));
    segments_.back().length += frame.size();
    dirty_ = true;
  }

  void flush() {
    if (!dirty_) return;
    out_.flush();
    if (!out_) throw StorageError("segment write failed in " + dir_.string());
    json m;
    m["version"] = 1;
    m["segments"] = json::array();
    for (const auto& s : segments_) m["segments"].push_back({{"name", s.name}, {"length", s.length}});
    json parts = json::object();
    for (const auto& [key, offsets] : index_) {
      json arr = json::array();
      for (const auto& [seg, off] : offsets) arr.push_back({seg, off});
      parts[codec::to_hex(key)] = std::move(arr);
    }
    m["partitions"] = std::move(parts);
    fs::path tmp = dir_ / "manifest.json.tmp";
    {
      std::ofstream out(tmp, std::ios::trunc);
      out << m.dump();
      if (!out) throw StorageError("cannot write manifest in " + dir_.string());
    }
    fs::rename(tmp, dir_ / "manifest.json");
    dirty_ = false;
  }

 private:
  struct Frame {
    std::uint8_t op;
    std::string key;
    std::string_view body;
    std::uint64_t next;
  };
  struct Segment {
    std::string name;
    std::uint64_t length;
  };

  static std::optional<Frame> read_frame(const std::string& data, std::uint64_t off) {
    if (off + 4 > data.size()) return std::nullopt;
    codec::Reader hdr(std::string_view(data).substr(off, 4));
    std::uint32_t len = hdr.u32();
    if (len < 3 || off + 4 + len > data.size()) return std::nullopt;
    std::string_view payload = std::string_view(data).substr(off + 4, len);
    codec::Reader in(payload);
    Frame f;
    f.op = in.u8();
    std::uint16_t klen = in.u16();
    if (3u + klen > len) return std::nullopt;
    f.key = std::string(payload.substr(3, klen));
    f.body = payload.substr(3 + klen);
    f.next = off + 4 + len;
    return f;
  }

  // Replays complete frames from `off`; returns the end of the last one. A
  // torn trailing frame is ignored.
  std::uint64_t replay_from(std::uint32_t seg, const std::string& data, std::uint64_t off,
                            const Visitor& visit) {
    while (auto frame = read_frame(data, off)) {
      visit(frame->op, frame->key, frame->body);
      index_[frame->key].emplace_back(seg, off);
      off = frame->next;
    }
    return off;
  }

  std::size_t next_segment_number() const {
    std::size_t n = 0;
    for (const auto& s : segments_) {
      n = std::max<std::size_t>(n, std::stoul(s.name.substr(8, 6)) + 1);
    }
    return n;
  }

  fs::path dir_;
  std::vector<Segment> segments_;
  std::ofstream out_;
  std::map<std::string, std::vector<std::pair<std::uint32_t, std::uint64_t>>> index_;
  bool dirty_ = false;
};

// ---------------------------------------------------------------------------

namespace {

std::uint64_t estimated_bytes(const EventRecord& r) {
  std::uint64_t n = 8 + 4 + r.type_id.size() + 10 + 4 + 4 + r.raw_message.size() + 4;
  for (const auto& [k, v] : r.attributes) n += 8 + k.size() + v.size();
  return n;
}

std::uint64_t estimated_bytes(const ApplicationRun& r) {
  return 12 + r.job_id.size() + r.user.size() + r.app_name.size() + 16 + 4 +
         10 * r.nodes.size() + 1;
}

bool run_before(const ApplicationRun& a, const ApplicationRun& b) {
  if (a.start_ts != b.start_ts) return a.start_ts < b.start_ts;
  return a.job_id < b.job_id;
}

json type_to_json(const EventTypeDef& d) {
  return {{"type_id", d.type_id},
          {"display_name", d.display_name},
          {"category", std::string(to_string(d.category))},
          {"severity", std::string(to_string(d.severity))},
          {"patterns", d.patterns}};
}

EventTypeDef type_from_json(const json& j) {
  EventTypeDef d;
  d.type_id = j.at("type_id").get<std::string>();
  d.display_name = j.at("display_name").get<std::string>();
  d.category = parse_category(j.at("category").get<std::string>());
  d.severity = parse_severity(j.at("severity").get<std::string>());
  d.patterns = j.at("patterns").get<std::vector<std::string>>();
  return d;
}

}  // namespace

EventStore::EventStore(StoreOptions options)
    : options_(std::move(options)), ring_(options_.ring) {
  options_.topology.validate();
  shards_.resize(options_.ring.storage_nodes);
  if (options_.directory) open_directory();
}

EventStore::~EventStore() {
  try {
    flush();
  } catch (...) {
  }
}

void EventStore::open_directory() {
  const fs::path& dir = *options_.directory;
  fs::create_directories(dir);
  fs::path meta = dir / "store.json";
  if (fs::exists(meta)) {
    json m;
    try {
      std::ifstream in(meta);
      m = json::parse(in);
      const auto& r = m.at("ring");
      RingConfig stored{r.at("storage_nodes").get<std::uint32_t>(),
                        r.at("vnodes_per_node").get<std::uint32_t>(),
                        r.at("replication_factor").get<std::uint32_t>(),
                        r.at("hash").get<std::string>()};
      const auto& t = m.at("topology");
      Topology topo{t.at("rows").get<std::uint32_t>(), t.at("cols").get<std::uint32_t>(),
                    t.at("cages_per_cabinet").get<std::uint32_t>(),
                    t.at("slots_per_cage").get<std::uint32_t>(),
                    t.at("nodes_per_slot").get<std::uint32_t>()};
      if (!(stored == options_.ring) || !(topo == options_.topology)) {
        throw StorageError("store at " + dir.string() +
                           " was created with a different ring or topology");
      }
      for (const auto& t : m.at("types")) {
        auto def = type_from_json(t);
        types_[def.type_id] = def;
      }
    } catch (const json::exception& e) {
      throw StorageError("corrupt store metadata " + meta.string() + ": " + e.what());
    }
  }
  for (std::uint32_t node = 0; node < shards_.size(); ++node) {
    char name[32];
    std::snprintf(name, sizeof name, "node-%03u", node);
    shards_[node].log = std::make_unique<SegmentLog>(dir / name);
    shards_[node].log->recover(
        [&](std::uint8_t op, const std::string& key, std::string_view body) {
          replay(node, op, key, body);
        });
  }
  rebuild_derived();
  save_meta();
}

void EventStore::save_meta() const {
  if (!options_.directory) return;
  json m;
  m["version"] = 1;
  m["ring"] = {{"storage_nodes", options_.ring.storage_nodes},
               {"vnodes_per_node", options_.ring.vnodes_per_node},
               {"replication_factor", options_.ring.replication_factor},
               {"hash", options_.ring.hash}};
  const auto& t = options_.topology;
  m["topology"] = {{"rows", t.rows},
                   {"cols", t.cols},
                   {"cages_per_cabinet", t.cages_per_cabinet},
                   {"slots_per_cage", t.slots_per_cage},
                   {"nodes_per_slot", t.nodes_per_slot}};
  m["types"] = json::array();
  for (const auto& [id, def] : types_) m["types"].push_back(type_to_json(def));
  fs::path tmp = *options_.directory / "store.json.tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << m.dump(2);
    if (!out) throw StorageError("cannot write store metadata");
  }
  fs::rename(tmp, *options_.directory / "store.json");
}

void EventStore::replay(std::uint32_t node, std::uint8_t op, const std::string& key_bytes,
                        std::string_view body) {
  PartitionKey key = PartitionKey::decode(key_bytes, options_.topology);
  switch (static_cast<Op>(op)) {
    case Op::event_put:
      apply_event(node, key, codec::decode_event(body, options_.topology), false, nullptr);
      break;
    case Op::app_put:
      apply_app_put(node, key, codec::decode_run(body, options_.topology), false);
      break;
    case Op::app_delete:
      apply_app_delete(node, key, std::string(body), false);
      break;
    default:
      throw StorageError("unknown segment op " + std::to_string(op));
  }
}

void EventStore::rebuild_derived() {
  synopsis_.clear();
  runs_.clear();
  hours_.clear();
  for (std::uint32_t node = 0; node < shards_.size(); ++node) {
    for (const auto& [bytes, part] : shards_[node].events) {
      PartitionKey key = PartitionKey::decode(bytes, options_.topology);
      if (key.kind() != PartitionKey::Kind::event_by_time || ring_.primary(key) != node) continue;
      hours_.insert(key.hour());
      auto& slot = synopsis_[{key.type_id(), key.hour()}];
      for (const auto& r : part.rows) slot += r.count;
    }
    for (const auto& [bytes, part] : shards_[node].apps) {
      PartitionKey key = PartitionKey::decode(bytes, options_.topology);
      if (key.kind() == PartitionKey::Kind::app_by_time) hours_.insert(key.hour());
      if (key.kind() != PartitionKey::Kind::app_by_user || ring_.primary(key) != node) continue;
      for (const auto& run : part.rows) runs_[run.job_id] = run;
    }
  }
}

void EventStore::register_type(const EventTypeDef& def) {
  if (def.type_id.empty()) throw ArgumentError("type_id must be non-empty");
  std::unique_lock lock(mutex_);
  types_[def.type_id] = def;
  save_meta();
}

bool EventStore::has_type(const std::string& type_id) const {
  std::shared_lock lock(mutex_);
  return types_.count(type_id) > 0;
}

std::vector<EventTypeDef> EventStore::types() const {
  std::shared_lock lock(mutex_);
  std::vector<EventTypeDef> out;
  for (const auto& [id, def] : types_) out.push_back(def);
  return out;
}

void EventStore::check_location(const NodeLocation& loc) const {
  const auto& t = options_.topology;
  if (loc.cabinet_row() >= t.rows || loc.cabinet_col() >= t.cols ||
      loc.cage() >= t.cages_per_cabinet || loc.slot() >= t.slots_per_cage ||
      loc.node() >= t.nodes_per_slot) {
    throw RangeError("location " + format_node_id(loc) + " is outside the store topology");
  }
}

bool EventStore::apply_event(std::uint32_t node, const PartitionKey& key,
                             const EventRecord& record, bool log,
                             std::int64_t* synopsis_delta) {
  auto& rows = shards_[node].events[key.bytes()].rows;
  auto it = std::lower_bound(rows.begin(), rows.end(), record, EventRowOrder{});
  bool created = false;
  std::int64_t delta = 0;
  if (it != rows.end() && same_row(*it, record)) {
    // Max-merge: the larger count wins and carries its representative
    // message; ties keep what is stored.
    if (record.count > it->count) {
      delta = std::int64_t{record.count} - it->count;
      *it = record;
    }
  } else {
    rows.insert(it, record);
    created = true;
    delta = record.count;
  }
  if (synopsis_delta) *synopsis_delta = delta;
  if (log && (created || delta != 0) && shards_[node].log) {
    shards_[node].log->append(static_cast<std::uint8_t>(Op::event_put), key.bytes(),
                              codec::encode_event(record));
  }
  return created;
}

std::vector<Timestamp> EventStore::occupied_hours(const TimeInterval& interval) const {
  auto lo = hours_.lower_bound(hour_of(interval.start()));
  auto hi = hours_.lower_bound(interval.end());
  return std::vector<Timestamp>(lo, hi);
}

WriteReceipt EventStore::write_event(const EventRecord& record) {
  record.validate();
  check_location(record.location);
  const Timestamp hour = hour_of(record.timestamp);
  PartitionKey by_time = PartitionKey::event_by_time(hour, record.type_id);
  PartitionKey by_loc = PartitionKey::event_by_location(hour, record.location);
  auto time_replicas = ring_.locate(by_time);
  auto loc_replicas = ring_.locate(by_loc);

  std::unique_lock lock(mutex_);
  if (!types_.count(record.type_id)) throw UnknownTypeError(record.type_id);

  WriteReceipt receipt;
  std::int64_t delta = 0;
  for (std::size_t i = 0; i < time_replicas.size(); ++i) {
    bool created = apply_event(time_replicas[i], by_time, record, true, i == 0 ? &delta : nullptr);
    if (i == 0) receipt.created = created;
  }
  for (auto node : loc_replicas) apply_event(node, by_loc, record, true, nullptr);
  if (delta != 0) synopsis_[{record.type_id, hour}] += static_cast<std::uint64_t>(delta);
  hours_.insert(hour);

  receipt.partitions = {by_time, by_loc};
  receipt.replicas = {std::move(time_replicas), std::move(loc_replicas)};
  return receipt;
}

std::vector<PartitionKey> EventStore::app_keys(const ApplicationRun& run) {
  std::vector<PartitionKey> keys;
  const Timestamp end = std::max(run.end_ts, run.start_ts + 1);
  std::set<std::pair<unsigned, unsigned>> cabinets;
  for (const auto& n : run.nodes) cabinets.emplace(n.cabinet_row(), n.cabinet_col());
  for (Timestamp h = hour_of(run.start_ts); h < end; h += kHourMs) {
    keys.push_back(PartitionKey::app_by_time(h));
    for (auto [row, col] : cabinets) keys.push_back(PartitionKey::app_by_location(h, row, col));
  }
  keys.push_back(PartitionKey::app_by_user(run.user));
  return keys;
}

void EventStore::apply_app_put(std::uint32_t node, const PartitionKey& key,
                               const ApplicationRun& run, bool log) {
  auto& rows = shards_[node].apps[key.bytes()].rows;
  std::erase_if(rows, [&](const ApplicationRun& r) { return r.job_id == run.job_id; });
  rows.insert(std::lower_bound(rows.begin(), rows.end(), run, run_before), run);
  if (log && shards_[node].log) {
    shards_[node].log->append(static_cast<std::uint8_t>(Op::app_put), key.bytes(),
                              codec::encode_run(run));
  }
}

void EventStore::apply_app_delete(std::uint32_t node, const PartitionKey& key,
                                  const std::string& job_id, bool log) {
  auto& apps = shards_[node].apps;
  auto it = apps.find(key.bytes());
  if (it != apps.end()) {
    std::erase_if(it->second.rows, [&](const ApplicationRun& r) { return r.job_id == job_id; });
    if (it->second.rows.empty()) apps.erase(it);
  }
  if (log && shards_[node].log) {
    shards_[node].log->append(static_cast<std::uint8_t>(Op::app_delete), key.bytes(), job_id);
  }
}

WriteReceipt EventStore::write_application(const ApplicationRun& run) {
  run.validate();
  for (const auto& n : run.nodes) check_location(n);
  auto keys = app_keys(run);

  std::unique_lock lock(mutex_);
  if (auto old = runs_.find(run.job_id); old != runs_.end()) {
    for (const auto& key : app_keys(old->second)) {
      for (auto node : ring_.locate(key)) apply_app_delete(node, key, run.job_id, true);
    }
  }
  WriteReceipt receipt;
  receipt.created = !runs_.count(run.job_id);
  for (const auto& key : keys) {
    auto replicas = ring_.locate(key);
    for (auto node : replicas) apply_app_put(node, key, run, true);
    if (key.kind() == PartitionKey::Kind::app_by_time) hours_.insert(key.hour());
    receipt.partitions.push_back(key);
    receipt.replicas.push_back(std::move(replicas));
  }
  runs_[run.job_id] = run;
  return receipt;
}

std::vector<EventRecord> EventStore::scan_events_by_type(const std::string& type_id,
                                                         const TimeInterval& interval,
                                                         ScanTrace* trace) const {
  std::shared_lock lock(mutex_);
  if (!types_.count(type_id)) throw UnknownTypeError(type_id);
  std::vector<EventRecord> out;
  for (Timestamp hour : occupied_hours(interval)) {
    PartitionKey key = PartitionKey::event_by_time(hour, type_id);
    const auto& events = shards_[ring_.primary(key)].events;
    if (trace) ++trace->partitions_touched;
    auto it = events.find(key.bytes());
    if (it == events.end()) continue;
    const auto& rows = it->second.rows;
    auto lo = std::partition_point(rows.begin(), rows.end(), [&](const EventRecord& r) {
      return r.timestamp < interval.start();
    });
    auto hi = std::partition_point(lo, rows.end(), [&](const EventRecord& r) {
      return r.timestamp < interval.end();
    });
    out.insert(out.end(), lo, hi);
  }
  return out;
}

std::vector<EventRecord> EventStore::scan_events_by_location(const LocationSelector& location,
                                                             const TimeInterval& interval,
                                                             ScanTrace* trace) const {
  auto nodes = location.expand(options_.topology);
  std::shared_lock lock(mutex_);
  auto hours = occupied_hours(interval);
  std::vector<EventRecord> out;
  for (const auto& node : nodes) {
    for (Timestamp hour : hours) {
      PartitionKey key = PartitionKey::event_by_location(hour, node);
      const auto& events = shards_[ring_.primary(key)].events;
      if (trace) ++trace->partitions_touched;
      auto it = events.find(key.bytes());
      if (it == events.end()) continue;
      const auto& rows = it->second.rows;
      auto lo = std::partition_point(rows.begin(), rows.end(), [&](const EventRecord& r) {
        return r.timestamp < interval.start();
      });
      auto hi = std::partition_point(lo, rows.end(), [&](const EventRecord& r) {
        return r.timestamp < interval.end();
      });
      out.insert(out.end(), lo, hi);
    }
  }
  if (nodes.size() > 1) std::sort(out.begin(), out.end(), EventRowOrder{});
  return out;
}

std::vector<ApplicationRun> EventStore::scan_apps(const AppSelector& selector) const {
  std::shared_lock lock(mutex_);
  std::map<std::string, const ApplicationRun*> found;
  auto read = [&](const PartitionKey& key, auto&& keep) {
    const auto& apps = shards_[ring_.primary(key)].apps;
    auto it = apps.find(key.bytes());
    if (it == apps.end()) return;
    for (const auto& run : it->second.rows) {
      if (keep(run)) found.emplace(run.job_id, &run);
    }
  };

  switch (selector.kind()) {
    case AppSelector::Kind::interval: {
      const auto& iv = *selector.interval();
      for (Timestamp hour : occupied_hours(iv)) {
        read(PartitionKey::app_by_time(hour),
             [&](const ApplicationRun& r) { return run_overlaps(r, iv); });
      }
      break;
    }
    case AppSelector::Kind::user:
      read(PartitionKey::app_by_user(selector.text()), [](const ApplicationRun&) { return true; });
      break;
    case AppSelector::Kind::app_name:
      for (const auto& [id, run] : runs_) {
        if (run.app_name == selector.text()) found.emplace(id, &run);
      }
      break;
    case AppSelector::Kind::location: {
      const auto& iv = *selector.interval();
      const auto& sel = selector.location();
      for (Timestamp hour : occupied_hours(iv)) {
        read(PartitionKey::app_by_location(hour, sel.row, sel.col), [&](const ApplicationRun& r) {
          return run_overlaps(r, iv) &&
                 std::any_of(r.nodes.begin(), r.nodes.end(),
                             [&](const NodeLocation& n) { return sel.matches(n); });
        });
      }
      break;
    }
  }
  std::vector<ApplicationRun> out;
  out.reserve(found.size());
  for (const auto& [id, run] : found) out.push_back(*run);
  std::sort(out.begin(), out.end(), run_before);
  return out;
}

std::optional<ApplicationRun> EventStore::find_application(const std::string& job_id) const {
  std::shared_lock lock(mutex_);
  auto it = runs_.find(job_id);
  if (it == runs_.end()) return std::nullopt;
  return it->second;
}

std::uint64_t EventStore::synopsis(const std::string& type_id, Timestamp hour) const {
  std::shared_lock lock(mutex_);
  auto it = synopsis_.find({type_id, hour_of(hour)});
  return it == synopsis_.end() ? 0 : it->second;
}

std::map<std::pair<std::string, Timestamp>, std::uint64_t> EventStore::synopsis_table() const {
  std::shared_lock lock(mutex_);
  return synopsis_;
}

StoreStats EventStore::stats() const {
  std::shared_lock lock(mutex_);
  StoreStats s;
  s.nodes.resize(shards_.size());
  for (std::uint32_t node = 0; node < shards_.size(); ++node) {
    auto& ns = s.nodes[node];
    for (const auto& [bytes, part] : shards_[node].events) {
      ++ns.partitions;
      ns.rows += part.rows.size();
      for (const auto& r : part.rows) ns.bytes += estimated_bytes(r);
      if (bytes.front() == static_cast<char>(PartitionKey::Kind::event_by_time) &&
          ring_.primary(PartitionKey::decode(bytes, options_.topology)) == node) {
        s.event_records += part.rows.size();
        for (const auto& r : part.rows) s.event_occurrences += r.count;
      }
    }
    for (const auto& [bytes, part] : shards_[node].apps) {
      ++ns.partitions;
      ns.rows += part.rows.size();
      for (const auto& r : part.rows) ns.bytes += estimated_bytes(r);
    }
    s.total_partitions += ns.partitions;
    s.total_rows += ns.rows;
    s.total_bytes += ns.bytes;
  }
  s.applications = runs_.size();
  s.event_types = types_.size();
  return s;
}

std::vector<EventRecord> EventStore::dump_event_view(PartitionKey::Kind kind) const {
  std::shared_lock lock(mutex_);
  std::map<std::string, const EventPartition*> parts;
  for (std::uint32_t node = 0; node < shards_.size(); ++node) {
    for (const auto& [bytes, part] : shards_[node].events) {
      if (bytes.front() != static_cast<char>(kind)) continue;
      if (ring_.primary(PartitionKey::decode(bytes, options_.topology)) != node) continue;
      parts.emplace(bytes, &part);
    }
  }
  std::vector<EventRecord> out;
  for (const auto& [bytes, part] : parts) out.insert(out.end(), part->rows.begin(), part->rows.end());
  return out;
}

std::vector<std::pair<PartitionKey, std::vector<std::string>>> EventStore::dump_app_view(
    PartitionKey::Kind kind) const {
  std::shared_lock lock(mutex_);
  std::map<std::string, const AppPartition*> parts;
  for (std::uint32_t node = 0; node < shards_.size(); ++node) {
    for (const auto& [bytes, part] : shards_[node].apps) {
      if (bytes.front() != static_cast<char>(kind)) continue;
      if (ring_.primary(PartitionKey::decode(bytes, options_.topology)) != node) continue;
      parts.emplace(bytes, &part);
    }
  }
  std::vector<std::pair<PartitionKey, std::vector<std::string>>> out;
  for (const auto& [bytes, part] : parts) {
    std::vector<std::string> ids;
    for (const auto& r : part->rows) ids.push_back(r.job_id);
    out.emplace_back(PartitionKey::decode(bytes, options_.topology), std::move(ids));
  }
  return out;
}

std::vector<EventRecord> EventStore::partition_rows(const PartitionKey& key,
                                                    std::uint32_t node) const {
  std::shared_lock lock(mutex_);
  if (node >= shards_.size()) throw ArgumentError("no such storage node");
  const auto& events = shards_[node].events;
  auto it = events.find(key.bytes());
  return it == events.end() ? std::vector<EventRecord>{} : it->second.rows;
}

std::string EventStore::digest() const {
  std::shared_lock lock(mutex_);
  std::map<std::string, std::string> content;
  for (std::uint32_t node = 0; node < shards_.size(); ++node) {
    for (const auto& [bytes, part] : shards_[node].events) {
      if (ring_.primary(PartitionKey::decode(bytes, options_.topology)) != node) continue;
      std::string& blob = content[bytes];
      for (const auto& r : part.rows) blob += codec::encode_event(r);
    }
    for (const auto& [bytes, part] : shards_[node].apps) {
      if (ring_.primary(PartitionKey::decode(bytes, options_.topology)) != node) continue;
      std::string& blob = content[bytes];
      for (const auto& r : part.rows) blob += codec::encode_run(r);
    }
  }
  std::uint64_t h = 0;
  for (const auto& [key, blob] : content) {
    h = stable_hash64(key, h);
    h = stable_hash64(blob, h);
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void EventStore::flush() {
  std::unique_lock lock(mutex_);
  for (auto& shard : shards_) {
    if (shard.log) shard.log->flush();
  }
}

}  // namespace lognition
