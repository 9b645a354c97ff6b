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
#include <optional>
#include <string>
#include <vector>

#include "lognition/catalog.hpp"
#include "lognition/model.hpp"
#include "lognition/store.hpp"

namespace lognition {

struct RawLine {
  LogSource source = LogSource::console;
  Timestamp received_ts = 0;
  std::string text;
};

/// A line whose pattern matched but whose captures could not be used.
struct QuarantineEntry {
  std::string origin;  // file path or bus topic
  std::uint64_t line = 0;
  std::string reason;
  std::string text;
};

/// lines_read = lines_matched + lines_unmatched. Quarantined lines matched a
/// pattern and are counted in lines_matched as well as lines_quarantined.
struct ImportStats {
  std::uint64_t lines_read = 0;
  std::uint64_t lines_matched = 0;
  std::uint64_t lines_unmatched = 0;
  std::uint64_t lines_quarantined = 0;
  std::uint64_t records_written = 0;
  std::uint64_t coalesced_away = 0;
  std::uint64_t apps_written = 0;
  /// Matched-and-parsed lines per event type.
  std::map<std::string, std::uint64_t> per_type;
  std::vector<std::string> file_errors;
  std::vector<QuarantineEntry> quarantine;
};

/// Matches `line` against the catalog (first pattern wins). Returns nothing
/// when no pattern matches. Throws MalformedCaptureError when a pattern
/// matched but the timestamp or location capture does not parse. The stored
/// message is the `message` capture if the pattern has one, else the line.
std::optional<EventRecord> parse_line(const PatternCatalog& catalog, const RawLine& line,
                                      const Topology& topology = Topology{});

/// Merges records that share (type, location, timestamp truncated to the
/// window). The merged record is stamped with the window start, carries the
/// summed count, and takes its message and attributes from the earliest
/// member (ties broken by message text), so the result is independent of
/// input order.
class Coalescer {
 public:
  explicit Coalescer(Timestamp window_ms = kSecondMs);

  void add(const EventRecord& record);

  /// Groups changed since their last take, restricted to windows ending at
  /// or before `closed_before` when given. Sorted in clustering order.
  std::vector<EventRecord> take_dirty(std::optional<Timestamp> closed_before = std::nullopt);
  /// Forgets groups whose window ends at or before `ts`.
  void evict_before(Timestamp ts);

  std::size_t groups() const noexcept { return groups_.size(); }
  bool has_dirty() const noexcept { return dirty_ > 0; }

 private:
  struct Key {
    Timestamp window;
    std::string type_id;
    NodeLocation location;
    auto operator<=>(const Key&) const = default;
  };
  struct Group {
    std::uint64_t count = 0;
    EventRecord representative;
    bool dirty = false;
  };
  EventRecord merged(const Key& key, const Group& g) const;

  Timestamp window_ms_;
  std::map<Key, Group> groups_;
  std::size_t dirty_ = 0;
};

/// One-shot coalescing of a batch (input order does not matter).
std::vector<EventRecord> coalesce(const std::vector<EventRecord>& batch,
                                  Timestamp window_ms = kSecondMs);

struct ImportSources {
  /// Raw log files; the source is taken from the file name prefix
  /// ("console", "application", "network"), defaulting to console.
  std::vector<std::filesystem::path> log_files;
  /// JSON-lines application run files.
  std::vector<std::filesystem::path> app_files;

  /// Collects `*.log` files and `apps*.jsonl` files in `dir`, sorted by name.
  /// Throws ArgumentError when `dir` is not a directory.
  static ImportSources discover(const std::filesystem::path& dir);
};

struct ImportOptions {
  Timestamp window_ms = kSecondMs;
  /// Parser threads; 0 picks the hardware concurrency.
  unsigned threads = 0;
  /// Appends one "origin:line<TAB>reason<TAB>text" row per quarantined line.
  std::optional<std::filesystem::path> quarantine_path;
};

LogSource source_for_file(const std::filesystem::path& path);

/// Batch ETL: parse every file (in parallel, each file in order), coalesce
/// all occurrences, write them, then write application runs. Unreadable
/// files are reported in file_errors and skipped. Catalog types missing from
/// the store are registered first.
ImportStats batch_import(const PatternCatalog& catalog, const ImportSources& sources,
                         EventStore& store, const ImportOptions& options = {});

/// Reads a JSON-lines run file. Throws ParseError naming the bad line.
std::vector<ApplicationRun> read_apps_file(const std::filesystem::path& path,
                                           const Topology& topology = Topology{});

}  // namespace lognition
