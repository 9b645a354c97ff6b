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

#include <filesystem>
#include <fstream>
#include <mutex>
#include <random>
#include <thread>

#include <unistd.h>

#include "lognition/bus.hpp"
#include "lognition/error.hpp"
#include "lognition/json_io.hpp"
#include "lognition/stream.hpp"
#include "lognition/synth.hpp"

using namespace lognition;
namespace fs = std::filesystem;
using namespace std::chrono_literals;

namespace {

fs::path temp_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("lognition_stream_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

SynthSpec small_spec() {
  auto spec = SynthSpec::demo();
  spec.duration_ms = 3 * kHourMs;
  spec.coupling->offset_ms = kHourMs;
  spec.coupling->duration_ms = kHourMs;
  spec.flood->offset_ms = kHourMs;
  spec.flood->volume = 400;
  return spec;
}

std::vector<std::string> all_topics() {
  return {topic_for(LogSource::console), topic_for(LogSource::network), std::string(kAppsTopic)};
}

std::string batch_digest(const fs::path& dir) {
  EventStore store;
  batch_import(PatternCatalog::builtin(), ImportSources::discover(dir), store);
  return store.digest();
}

ConsumerOptions fast_options() {
  ConsumerOptions o;
  o.poll_wait = 5ms;
  o.backoff_initial = 1ms;
  o.backoff_max = 10ms;
  return o;
}

}  // namespace

TEST(InProcessBus, OffsetsAndFetch) {
  InProcessBus bus;
  EXPECT_EQ(bus.end_offset("t"), 0u);
  EXPECT_EQ(bus.publish("t", "a"), 0u);
  EXPECT_EQ(bus.publish("t", "b"), 1u);
  auto m = bus.fetch("t", 1, 10, 0ms);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m[0].payload, "b");
  EXPECT_TRUE(bus.fetch("t", 2, 10, 1ms).empty());
  bus.set_unavailable(true);
  EXPECT_THROW(bus.fetch("t", 0, 1, 0ms), BusError);
  bus.set_unavailable(false);
  bus.skip_offsets("t", 3);
  EXPECT_EQ(bus.publish("t", "c"), 5u);
}

TEST(BusPayload, RoundTripAndRejects) {
  RawLine raw{LogSource::network, 42, "hello"};
  auto p = decode_payload(encode_payload(raw));
  EXPECT_EQ(p.kind, BusPayload::Kind::raw);
  EXPECT_EQ(p.raw.text, "hello");
  EXPECT_EQ(p.raw.source, LogSource::network);
  EXPECT_THROW(decode_payload("{nope"), ParseError);
  EXPECT_THROW(decode_payload(R"({"kind":"martian"})"), Error);
}

TEST(FileTailBus, DeliversOnlyCompleteLines) {
  auto dir = temp_dir("tail");
  {
    std::ofstream out(dir / "console.log");
    out << "one\ntwo\nthr";
  }
  FileTailBus bus(dir);
  auto topic = topic_for(LogSource::console);
  auto m = bus.fetch(topic, 0, 10, 0ms);
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(decode_payload(m[1].payload).raw.text, "two");
  {
    std::ofstream out(dir / "console.log", std::ios::app);
    out << "ee\n";
  }
  m = bus.fetch(topic, 2, 10, 0ms);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m[0].offset, 2u);
  EXPECT_EQ(decode_payload(m[0].payload).raw.text, "three");
  EXPECT_EQ(bus.end_offset(topic), 3u);
  // Re-reading from an earlier offset works after the cursor moved on.
  EXPECT_EQ(bus.fetch(topic, 0, 1, 0ms)[0].offset, 0u);
  EXPECT_THROW(FileTailBus(dir / "missing"), BusError);
  fs::remove_all(dir);
}

TEST(StreamConsumer, ConvergesToBatchImport) {
  auto dir = temp_dir("converge");
  auto corpus = synth_corpus(small_spec());
  synth_generate(small_spec(), dir);
  const std::string want = batch_digest(dir);

  // Publish every line, shuffled within each topic and interleaved across
  // topics, so windows are revisited after they were written.
  InProcessBus bus;
  std::mt19937_64 rng(9);
  EventStore store;
  auto consumer = stream_consume(bus, all_topics(), store, PatternCatalog::builtin(), fast_options());
  std::vector<std::pair<std::string, std::string>> msgs;
  for (const auto& f : corpus.files) {
    if (f.name == "apps.jsonl") {
      for (const auto& r : corpus.runs) msgs.emplace_back(std::string(kAppsTopic), encode_payload(r));
    } else {
      LogSource src = f.name == "network.log" ? LogSource::network : LogSource::console;
      auto lines = f.lines;
      // Local disorder only: swap within small blocks.
      for (std::size_t i = 0; i + 8 < lines.size(); i += 8) {
        std::shuffle(lines.begin() + static_cast<long>(i), lines.begin() + static_cast<long>(i + 8), rng);
      }
      for (const auto& l : lines) msgs.emplace_back(topic_for(src), encode_payload(RawLine{src, 0, l}));
    }
  }
  std::shuffle(msgs.begin(), msgs.end(), rng);
  for (const auto& [t, p] : msgs) bus.publish(t, p);
  ASSERT_TRUE(consumer->wait_until_idle(60s));
  EXPECT_EQ(store.digest(), want);
  auto stats = consumer->stats();
  EXPECT_EQ(stats.messages, msgs.size());
  EXPECT_EQ(stats.gaps, 0u);

  // Replaying everything from offset 0 into the same store is idempotent.
  ConsumerOptions replay = fast_options();
  auto again = stream_consume(bus, all_topics(), store, PatternCatalog::builtin(), replay);
  ASSERT_TRUE(again->wait_until_idle(60s));
  EXPECT_EQ(store.digest(), want);
  fs::remove_all(dir);
}

TEST(StreamConsumer, SurvivesOutageAndReportsGaps) {
  InProcessBus bus;
  EventStore store;
  auto topic = topic_for(LogSource::console);
  std::vector<EventRecord> written;
  std::mutex mu;
  auto consumer = stream_consume(bus, {topic}, store, PatternCatalog::builtin(), fast_options(),
                                 [&](const std::vector<EventRecord>& r) {
                                   std::lock_guard lock(mu);
                                   written.insert(written.end(), r.begin(), r.end());
                                 });
  bus.set_unavailable(true);
  std::this_thread::sleep_for(30ms);
  bus.set_unavailable(false);
  bus.publish(topic, encode_payload(RawLine{LogSource::console, 0,
                                            "2026-01-01T00:00:01Z c0-0c0s0n0 kernel: Kernel panic - not syncing: a"}));
  bus.skip_offsets(topic, 2);
  bus.publish(topic, encode_payload(RawLine{LogSource::console, 0, "not a log line"}));
  bus.publish(topic, "{garbage");
  ASSERT_TRUE(consumer->wait_until_idle(10s));
  auto s = consumer->stats();
  EXPECT_GE(s.retries, 1u);
  EXPECT_EQ(s.gaps, 1u);
  EXPECT_EQ(s.lines_matched, 1u);
  EXPECT_EQ(s.lines_unmatched, 1u);
  EXPECT_EQ(s.rejected, 1u);
  EXPECT_EQ(s.records_written, 1u);
  EXPECT_EQ(consumer->offset(topic), 5u);
  std::lock_guard lock(mu);
  ASSERT_EQ(written.size(), 1u);
  EXPECT_EQ(written[0].type_id, "PANIC");
}

TEST(StreamConsumer, StartOffsetsSkipConsumedMessages) {
  InProcessBus bus;
  EventStore store;
  auto topic = topic_for(LogSource::console);
  for (int i = 0; i < 3; ++i) {
    bus.publish(topic, encode_payload(RawLine{LogSource::console, 0,
                                              "2026-01-01T00:00:0" + std::to_string(i) +
                                                  "Z c0-0c0s0n0 kernel: Kernel panic - not syncing: a"}));
  }
  auto opts = fast_options();
  opts.start_offsets[topic] = 2;
  auto consumer = stream_consume(bus, {topic}, store, PatternCatalog::builtin(), opts);
  ASSERT_TRUE(consumer->wait_until_idle(10s));
  EXPECT_EQ(store.stats().event_records, 1u);
  EXPECT_THROW(consumer->offset("other"), ArgumentError);
}

TEST(StreamConsumer, FollowsFilesAsTheyGrow) {
  auto dir = temp_dir("follow");
  { std::ofstream out(dir / "console.log"); }
  FileTailBus bus(dir);
  EventStore store;
  auto consumer = stream_consume(bus, {topic_for(LogSource::console)}, store,
                                 PatternCatalog::builtin(), fast_options());
  {
    std::ofstream out(dir / "console.log", std::ios::app);
    out << "2026-01-01T00:00:01Z c0-0c0s0n0 kernel: Kernel panic - not syncing: a\n";
    out << "2026-01-01T00:00:09Z c0-0c0s0n1 kernel: Kernel panic - not syncing: b\n";
  }
  ASSERT_TRUE(consumer->wait_until_idle(10s));
  EXPECT_EQ(store.stats().event_records, 2u);
  consumer->stop();
  consumer->join();
  fs::remove_all(dir);
}
