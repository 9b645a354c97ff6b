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

#include "lognition/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <future>
#include <limits>
#include <thread>

#include <json.hpp>

#include "lognition/json_io.hpp"

namespace lognition {

namespace fs = std::filesystem;

std::optional<EventRecord> parse_line(const PatternCatalog& catalog, const RawLine& line,
                                      const Topology& topology) {
  auto match = catalog.match(line.text);
  if (!match) return std::nullopt;
  const EventTypeDef& def = catalog.types()[match->type_index];
  auto& caps = match->captures;

  EventRecord record;
  record.type_id = def.type_id;
  try {
    record.timestamp = parse_timestamp(caps.at("timestamp"), catalog.timestamp_format(line.source));
  } catch (const std::exception& e) {
    throw MalformedCaptureError(def.type_id + ": bad timestamp capture: " + e.what());
  }
  if (record.timestamp <= 0) {
    throw MalformedCaptureError(def.type_id + ": timestamp precedes the epoch");
  }
  try {
    record.location = parse_node_id(caps.at("location"), topology);
  } catch (const std::exception& e) {
    throw MalformedCaptureError(def.type_id + ": bad location capture: " + e.what());
  }
  auto msg = caps.find("message");
  record.raw_message = msg != caps.end() ? msg->second : line.text;
  for (auto& [name, value] : caps) {
    if (name == "timestamp" || name == "location" || name == "message" || value.empty()) continue;
    record.attributes[name] = value;
  }
  return record;
}

// ---------------------------------------------------------------------------

Coalescer::Coalescer(Timestamp window_ms) : window_ms_(window_ms) {
  if (window_ms_ <= 0) throw ArgumentError("coalescing window must be positive");
}

void Coalescer::add(const EventRecord& record) {
  Key key{align_down(record.timestamp, window_ms_), record.type_id, record.location};
  auto [it, inserted] = groups_.try_emplace(std::move(key));
  Group& g = it->second;
  auto earlier = [](const EventRecord& a, const EventRecord& b) {
    if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
    if (a.raw_message != b.raw_message) return a.raw_message < b.raw_message;
    return a.attributes < b.attributes;
  };
  if (inserted || earlier(record, g.representative)) g.representative = record;
  g.count += record.count;
  if (!g.dirty) {
    g.dirty = true;
    ++dirty_;
  }
}

EventRecord Coalescer::merged(const Key& key, const Group& g) const {
  EventRecord out = g.representative;
  out.timestamp = key.window;
  out.count = static_cast<std::uint32_t>(
      std::min<std::uint64_t>(g.count, std::numeric_limits<std::uint32_t>::max()));
  return out;
}

std::vector<EventRecord> Coalescer::take_dirty(std::optional<Timestamp> closed_before) {
  std::vector<EventRecord> out;
  for (auto& [key, g] : groups_) {
    if (!g.dirty) continue;
    if (closed_before && key.window + window_ms_ > *closed_before) continue;
    out.push_back(merged(key, g));
    g.dirty = false;
    --dirty_;
  }
  // Map order is (window, type, location), which is clustering order for
  // window-stamped records.
  return out;
}

void Coalescer::evict_before(Timestamp ts) {
  for (auto it = groups_.begin(); it != groups_.end();) {
    if (it->first.window + window_ms_ <= ts && !it->second.dirty) {
      it = groups_.erase(it);
    } else {
      ++it;
    }
  }
}

std::vector<EventRecord> coalesce(const std::vector<EventRecord>& batch, Timestamp window_ms) {
  Coalescer c(window_ms);
  for (const auto& r : batch) c.add(r);
  return c.take_dirty();
}

// ---------------------------------------------------------------------------

ImportSources ImportSources::discover(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw ArgumentError("not a directory: " + dir.string());
  ImportSources out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto& p = entry.path();
    std::string name = p.filename().string();
    if (p.extension() == ".log") {
      out.log_files.push_back(p);
    } else if (p.extension() == ".jsonl" && name.rfind("apps", 0) == 0) {
      out.app_files.push_back(p);
    }
  }
  std::sort(out.log_files.begin(), out.log_files.end());
  std::sort(out.app_files.begin(), out.app_files.end());
  return out;
}

LogSource source_for_file(const fs::path& path) {
  std::string stem = path.filename().string();
  auto cut = stem.find_first_of("-._");
  std::string prefix = stem.substr(0, cut);
  try {
    return parse_log_source(prefix);
  } catch (const ParseError&) {
    return LogSource::console;
  }
}

namespace {

struct FileResult {
  std::vector<EventRecord> records;
  ImportStats stats;
};

FileResult parse_file(const PatternCatalog& catalog, const fs::path& path,
                      const Topology& topology) {
  FileResult result;
  std::ifstream in(path);
  if (!in) {
    result.stats.file_errors.push_back(path.string() + ": cannot open");
    return result;
  }
  RawLine raw;
  raw.source = source_for_file(path);
  std::uint64_t line_no = 0;
  auto& st = result.stats;
  while (std::getline(in, raw.text)) {
    ++line_no;
    if (!raw.text.empty() && raw.text.back() == '\r') raw.text.pop_back();
    if (raw.text.empty()) continue;
    ++st.lines_read;
    try {
      if (auto rec = parse_line(catalog, raw, topology)) {
        ++st.lines_matched;
        ++st.per_type[rec->type_id];
        result.records.push_back(std::move(*rec));
      } else {
        ++st.lines_unmatched;
      }
    } catch (const MalformedCaptureError& e) {
      ++st.lines_matched;
      ++st.lines_quarantined;
      st.quarantine.push_back({path.string(), line_no, e.what(), raw.text});
    }
  }
  if (in.bad()) st.file_errors.push_back(path.string() + ": read error");
  return result;
}

}  // namespace

ImportStats batch_import(const PatternCatalog& catalog, const ImportSources& sources,
                         EventStore& store, const ImportOptions& options) {
  for (const auto& def : catalog.types()) {
    if (!store.has_type(def.type_id)) store.register_type(def);
  }

  const auto& files = sources.log_files;
  unsigned threads = options.threads ? options.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(files.size())));

  // Files are split round-robin across workers; results are merged back in
  // file order so the outcome does not depend on scheduling.
  std::vector<FileResult> results(files.size());
  std::vector<std::future<void>> workers;
  for (unsigned w = 0; w < threads; ++w) {
    workers.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < files.size(); i += threads) {
        results[i] = parse_file(catalog, files[i], store.topology());
      }
    }));
  }
  for (auto& f : workers) f.get();

  ImportStats stats;
  Coalescer coalescer(options.window_ms);
  std::uint64_t parsed = 0;
  for (auto& r : results) {
    const auto& s = r.stats;
    stats.lines_read += s.lines_read;
    stats.lines_matched += s.lines_matched;
    stats.lines_unmatched += s.lines_unmatched;
    stats.lines_quarantined += s.lines_quarantined;
    for (const auto& [t, n] : s.per_type) stats.per_type[t] += n;
    stats.file_errors.insert(stats.file_errors.end(), s.file_errors.begin(), s.file_errors.end());
    stats.quarantine.insert(stats.quarantine.end(), s.quarantine.begin(), s.quarantine.end());
    for (const auto& rec : r.records) coalescer.add(rec);
    parsed += r.records.size();
  }

  for (const auto& rec : coalescer.take_dirty()) {
    store.write_event(rec);
    ++stats.records_written;
  }
  stats.coalesced_away = parsed - stats.records_written;

  for (const auto& path : sources.app_files) {
    try {
      for (const auto& run : read_apps_file(path, store.topology())) {
        store.write_application(run);
        ++stats.apps_written;
      }
    } catch (const Error& e) {
      stats.file_errors.push_back(path.string() + ": " + e.what());
    }
  }

  if (options.quarantine_path && !stats.quarantine.empty()) {
    std::ofstream q(*options.quarantine_path, std::ios::app);
    for (const auto& e : stats.quarantine) {
      q << e.origin << ':' << e.line << '\t' << e.reason << '\t' << e.text << '\n';
    }
  }
  return stats;
}

std::vector<ApplicationRun> read_apps_file(const fs::path& path, const Topology& topology) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::vector<ApplicationRun> runs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      runs.push_back(run_from_json(nlohmann::json::parse(line), topology));
    } catch (const std::exception& e) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return runs;
}

}  // namespace lognition
