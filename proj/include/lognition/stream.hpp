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

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "lognition/bus.hpp"
#include "lognition/catalog.hpp"
#include "lognition/ingest.hpp"
#include "lognition/store.hpp"

namespace lognition {

struct ConsumerOptions {
  Timestamp window_ms = kSecondMs;
  /// A window is written once the newest event seen is this far past its end.
  Timestamp lateness_ms = 2 * kSecondMs;
  /// Written windows older than this behind the slowest busy topic are
  /// forgotten; a later straggler for such a window can no longer raise its
  /// count.
  Timestamp retention_ms = 10 * 60 * kSecondMs;
  std::size_t batch = 1024;
  std::chrono::milliseconds poll_wait{100};
  std::chrono::milliseconds backoff_initial{10};
  std::chrono::milliseconds backoff_max{2000};
  /// Per-topic starting offsets; topics not listed start at 0.
  std::map<std::string, std::uint64_t> start_offsets;
  std::optional<std::filesystem::path> quarantine_path;
};

struct ConsumerStats {
  std::uint64_t messages = 0;
  std::uint64_t lines_matched = 0;
  std::uint64_t lines_unmatched = 0;
  std::uint64_t lines_quarantined = 0;
  /// Payloads that failed to decode or named an unknown type.
  std::uint64_t rejected = 0;
  std::uint64_t records_written = 0;
  std::uint64_t apps_written = 0;
  std::uint64_t gaps = 0;
  std::uint64_t retries = 0;
};

/// Called after each batch of store writes with the records as written.
using WrittenCallback = std::function<void(const std::vector<EventRecord>&)>;

/// Consumes bus topics into the store, one thread per topic.
///
/// Events pass through a coalescer shared by all topics. A window's record
/// is written when the window closes and rewritten with its new cumulative
/// count if more occurrences arrive later; the store's max-merge makes the
/// final state equal to a batch import of the same events. When a topic
/// runs dry every pending window is written. Replaying from offset 0 is
/// idempotent.
class StreamConsumer {
 public:
  StreamConsumer(MessageBus& bus, std::vector<std::string> topics, EventStore& store,
                 PatternCatalog catalog, ConsumerOptions options = {},
                 WrittenCallback on_written = {});
  ~StreamConsumer();

  StreamConsumer(const StreamConsumer&) = delete;
  StreamConsumer& operator=(const StreamConsumer&) = delete;

  void start();
  /// Asks the threads to finish; pending windows are written before exit.
  void stop();
  void join();

  /// Next offset to consume on `topic`.
  std::uint64_t offset(const std::string& topic) const;
  std::map<std::string, std::uint64_t> offsets() const;
  ConsumerStats stats() const;

  /// Waits until every topic has consumed up to the bus end and all pending
  /// windows are written. Returns false on timeout.
  bool wait_until_idle(std::chrono::milliseconds timeout);

 private:
  struct TopicState {
    std::string name;
    std::atomic<std::uint64_t> next{0};
    std::atomic<bool> idle{false};
    /// Newest event timestamp seen on this topic; 0 before the first event.
    std::atomic<Timestamp> watermark{0};
    std::thread thread;
  };

  void run(TopicState& t);
  void handle(TopicState& t, const BusMessage& msg);
  void flush(std::optional<Timestamp> closed_before);
  /// Oldest watermark among topics still delivering events; windows behind
  /// it by more than the retention are safe to forget.
  Timestamp eviction_watermark() const;
  bool sleep_for(std::chrono::milliseconds d);

  MessageBus& bus_;
  EventStore& store_;
  PatternCatalog catalog_;
  ConsumerOptions options_;
  WrittenCallback on_written_;
  std::vector<std::unique_ptr<TopicState>> topics_;

  mutable std::mutex mu_;  // coalescer, watermark, stats
  std::condition_variable stop_cv_;
  Coalescer coalescer_;
  Timestamp watermark_ = 0;
  int inflight_ = 0;  // flushes taken from the coalescer but not yet written
  ConsumerStats stats_;
  std::atomic<bool> stopping_{false};
  bool started_ = false;
};

/// Registers catalog types in the store, then starts a consumer.
std::unique_ptr<StreamConsumer> stream_consume(MessageBus& bus, std::vector<std::string> topics,
                                               EventStore& store, PatternCatalog catalog,
                                               ConsumerOptions options = {},
                                               WrittenCallback on_written = {});

}  // namespace lognition
