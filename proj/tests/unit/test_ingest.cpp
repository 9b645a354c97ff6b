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

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>

#include <unistd.h>

#include "lognition/error.hpp"
#include "lognition/ingest.hpp"
#include "lognition/synth.hpp"
#include "oracle.hpp"

using namespace lognition;
namespace fs = std::filesystem;

namespace {

constexpr Timestamp kT0 = 1'767'225'600'000;

fs::path temp_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("lognition_ingest_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

void write_lines(const fs::path& p, const std::vector<std::string>& lines) {
  std::ofstream out(p);
  for (const auto& l : lines) out << l << '\n';
}

EventRecord occ(Timestamp ts, std::string type, NodeLocation loc, std::string msg = "m") {
  EventRecord r;
  r.timestamp = ts;
  r.type_id = std::move(type);
  r.location = loc;
  r.raw_message = std::move(msg);
  return r;
}

std::uint64_t total_count(const std::vector<EventRecord>& v) {
  return std::accumulate(v.begin(), v.end(), std::uint64_t{0},
                         [](std::uint64_t s, const EventRecord& r) { return s + r.count; });
}

}  // namespace

TEST(ParseLine, MessageAndAttributes) {
  RawLine line{LogSource::console, 0,
               "2026-01-01T00:00:01.500Z c1-0c2s3n1 kernel: Machine Check Exception: bank 4 status 0xab"};
  auto r = parse_line(PatternCatalog::builtin(), line);
  ASSERT_TRUE(r);
  EXPECT_EQ(r->type_id, "MCE");
  EXPECT_EQ(r->timestamp, kT0 + 1500);
  EXPECT_EQ(r->location, parse_node_id("c1-0c2s3n1"));
  EXPECT_EQ(r->raw_message, "Machine Check Exception: bank 4 status 0xab");
  EXPECT_EQ(r->attributes.at("bank"), "4");
  EXPECT_EQ(r->attributes.at("status"), "0xab");
  EXPECT_EQ(r->count, 1u);
}

TEST(ParseLine, UnmatchedAndMalformed) {
  const auto& c = PatternCatalog::builtin();
  EXPECT_FALSE(parse_line(c, {LogSource::console, 0, "2026-01-01T00:00:01Z c0-0c0s0n0 hello"}));
  EXPECT_THROW(parse_line(c, {LogSource::console, 0,
                              "2026-01-01T00:00:01Z c99-99c0s0n0 kernel: Kernel panic - not syncing: x"}),
               MalformedCaptureError);
  EXPECT_THROW(parse_line(c, {LogSource::console, 0,
                              "2026-13-45T25:61:00.000Z c0-0c0s0n0 kernel: Kernel panic - not syncing: x"}),
               MalformedCaptureError);
}

TEST(Coalesce, FiveSameSecondOccurrencesBecomeOneRow) {
  NodeLocation n(0, 1, 0, 0, 0);
  std::vector<EventRecord> batch;
  for (int i = 0; i < 5; ++i) batch.push_back(occ(kT0 + 1000 + i * 150, "MCE", n, "m" + std::to_string(4 - i)));
  auto out = coalesce(batch);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].count, 5u);
  EXPECT_EQ(out[0].timestamp, kT0 + 1000);
  EXPECT_EQ(out[0].raw_message, "m4");  // earliest member
}

TEST(Coalesce, DistinctKeysStaySeparate) {
  NodeLocation a(0, 1, 0, 0, 0), b(0, 1, 0, 0, 1);
  std::vector<EventRecord> batch{occ(kT0, "MCE", a), occ(kT0, "MCE", b), occ(kT0, "PANIC", a),
                                 occ(kT0 + 1000, "MCE", a)};
  EXPECT_EQ(coalesce(batch).size(), 4u);
}

TEST(Coalesce, CountConservedAndOrderIndependent) {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    oracle::CorpusShape shape;
    shape.events = 400;
    auto batch = oracle::random_corpus(seed, shape).events;
    std::mt19937_64 rng(seed);
    for (auto& e : batch) e.timestamp += static_cast<Timestamp>(rng() % 3000);
    auto a = coalesce(batch);
    std::shuffle(batch.begin(), batch.end(), rng);
    auto b = coalesce(batch);
    EXPECT_EQ(total_count(a), total_count(batch));
    EXPECT_EQ(a, b);
    for (std::size_t i = 1; i < a.size(); ++i) EXPECT_FALSE(same_row(a[i - 1], a[i]));
  }
}

TEST(Coalescer, DirtyGroupsCarryCumulativeCounts) {
  Coalescer c(kSecondMs);
  NodeLocation n;
  c.add(occ(kT0 + 10, "MCE", n));
  c.add(occ(kT0 + 2500, "MCE", n));
  auto closed = c.take_dirty(kT0 + 1000);
  ASSERT_EQ(closed.size(), 1u);
  EXPECT_EQ(closed[0].count, 1u);
  c.add(occ(kT0 + 20, "MCE", n));  // straggler for the written window
  auto all = c.take_dirty();
  ASSERT_EQ(all.size(), 2u);
  EXPECT_EQ(all[0].count, 2u);
  EXPECT_FALSE(c.has_dirty());
  c.evict_before(kT0 + 3000);
  EXPECT_EQ(c.groups(), 0u);
  EXPECT_THROW(Coalescer(0), ArgumentError);
}

TEST(ImportSources, DiscoverAndSourceNames) {
  auto dir = temp_dir("discover");
  write_lines(dir / "network.log", {});
  write_lines(dir / "console.log", {});
  write_lines(dir / "apps.jsonl", {});
  write_lines(dir / "notes.txt", {});
  auto s = ImportSources::discover(dir);
  ASSERT_EQ(s.log_files.size(), 2u);
  EXPECT_EQ(s.log_files[0].filename(), "console.log");
  EXPECT_EQ(s.app_files.size(), 1u);
  EXPECT_EQ(source_for_file("network-2.log"), LogSource::network);
  EXPECT_EQ(source_for_file("application.log"), LogSource::application);
  EXPECT_EQ(source_for_file("whatever.log"), LogSource::console);
  EXPECT_THROW(ImportSources::discover(dir / "missing"), ArgumentError);
  fs::remove_all(dir);
}

TEST(BatchImport, AccountingMatchesGeneratorGroundTruth) {
  auto dir = temp_dir("truth");
  auto spec = SynthSpec::demo();
  spec.duration_ms = 16 * kHourMs;
  Json truth = synth_generate(spec, dir);
  EventStore store;
  ImportOptions opts;
  opts.threads = 3;
  opts.quarantine_path = dir / "quarantine.tsv";
  auto stats = batch_import(PatternCatalog::builtin(), ImportSources::discover(dir), store, opts);
  const auto& t = truth["totals"];
  EXPECT_EQ(stats.lines_read, t["lines"].get<std::uint64_t>());
  EXPECT_EQ(stats.lines_read, stats.lines_matched + stats.lines_unmatched);
  EXPECT_EQ(stats.lines_unmatched, t["unmatched"].get<std::uint64_t>());
  EXPECT_EQ(stats.lines_matched, t["matched"].get<std::uint64_t>() + t["malformed"].get<std::uint64_t>());
  EXPECT_EQ(stats.lines_quarantined, t["malformed"].get<std::uint64_t>());
  for (const auto& [type, n] : truth["events_per_type"].items()) {
    EXPECT_EQ(stats.per_type[type], n.get<std::uint64_t>()) << type;
  }
  EXPECT_EQ(stats.apps_written, truth["apps"]["runs"].get<std::uint64_t>());
  EXPECT_TRUE(stats.file_errors.empty());

  auto st = store.stats();
  EXPECT_EQ(st.event_records, stats.records_written);
  EXPECT_EQ(st.event_occurrences, t["matched"].get<std::uint64_t>());
  EXPECT_EQ(stats.records_written + stats.coalesced_away, t["matched"].get<std::uint64_t>());

  std::ifstream q(dir / "quarantine.tsv");
  std::string row;
  std::size_t rows = 0;
  while (std::getline(q, row)) {
    ++rows;
    EXPECT_EQ(std::count(row.begin(), row.end(), '\t'), 2) << row;
    EXPECT_NE(row.find("console.log:"), std::string::npos);
  }
  EXPECT_EQ(rows, t["malformed"].get<std::size_t>());

  // A second import of the same files changes nothing.
  auto digest = store.digest();
  auto rows_before = st.total_rows;
  batch_import(PatternCatalog::builtin(), ImportSources::discover(dir), store, opts);
  EXPECT_EQ(store.digest(), digest);
  EXPECT_EQ(store.stats().total_rows, rows_before);
  fs::remove_all(dir);
}

TEST(BatchImport, ThreadCountDoesNotChangeResult) {
  auto dir = temp_dir("threads");
  auto spec = SynthSpec::demo();
  spec.duration_ms = 4 * kHourMs;
  spec.coupling.reset();
  spec.flood.reset();
  synth_generate(spec, dir);
  std::string digest;
  for (unsigned threads : {1u, 2u, 5u}) {
    EventStore store;
    ImportOptions opts;
    opts.threads = threads;
    batch_import(PatternCatalog::builtin(), ImportSources::discover(dir), store, opts);
    if (digest.empty()) digest = store.digest();
    EXPECT_EQ(store.digest(), digest) << threads;
  }
  fs::remove_all(dir);
}

TEST(BatchImport, EmptyDirectoryAndUnreadableFiles) {
  auto dir = temp_dir("empty");
  EventStore store;
  auto stats = batch_import(PatternCatalog::builtin(), ImportSources::discover(dir), store);
  EXPECT_EQ(stats.lines_read, 0u);
  EXPECT_EQ(stats.records_written, 0u);

  ImportSources missing;
  missing.log_files.push_back(dir / "gone.log");
  stats = batch_import(PatternCatalog::builtin(), missing, store);
  EXPECT_EQ(stats.file_errors.size(), 1u);
  fs::remove_all(dir);
}

TEST(BatchImport, BlankLinesAreNotCounted) {
  auto dir = temp_dir("blank");
  write_lines(dir / "console.log",
              {"", "2026-01-01T00:00:01Z c0-0c0s0n0 kernel: Kernel panic - not syncing: x", "",
               "noise"});
  EventStore store;
  auto stats = batch_import(PatternCatalog::builtin(), ImportSources::discover(dir), store);
  EXPECT_EQ(stats.lines_read, 2u);
  EXPECT_EQ(stats.lines_matched, 1u);
  EXPECT_EQ(stats.lines_unmatched, 1u);
  fs::remove_all(dir);
}

TEST(ReadAppsFile, ReportsBadLine) {
  auto dir = temp_dir("apps");
  write_lines(dir / "apps.jsonl",
              {R"({"job_id":"j1","user":"u","app_name":"a","start_ts":10,"end_ts":20,"nodes":["c0-0c0s0n0"],"exit_status":"success"})",
               "{not json"});
  try {
    read_apps_file(dir / "apps.jsonl");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find(":2"), std::string::npos) << e.what();
  }
  fs::remove_all(dir);
}
