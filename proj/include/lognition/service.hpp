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

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "lognition/bus.hpp"
#include "lognition/catalog.hpp"
#include "lognition/json_io.hpp"
#include "lognition/store.hpp"
#include "lognition/stream.hpp"

namespace lognition {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  /// 0 binds an ephemeral port.
  int port = 8080;
  /// Persistent store directory; in-memory when absent.
  std::optional<std::filesystem::path> store_path;
  RingConfig ring;
  Topology topology;
  /// Pattern catalog file; the built-in catalog when absent.
  std::optional<std::filesystem::path> catalog_path;
  /// Directory followed with a file-tail bus for live ingestion.
  std::optional<std::filesystem::path> follow_dir;

  std::size_t result_limit = 50'000;
  std::size_t stream_buffer = 10'000;
  std::chrono::milliseconds heartbeat{15'000};
  unsigned threads = 16;
  std::size_t max_histogram_bins = 1'000'000;
  std::size_t max_te_windows = 100'000;

  /// Reads the JSON config; absent keys keep their defaults. Throws
  /// FieldError.
  static ServiceConfig from_json(const Json& j);
  static ServiceConfig load(const std::filesystem::path& path);
  /// Applies LOGNITION_HOST, _PORT, _STORE, _CATALOG, _FOLLOW, _RESULT_LIMIT,
  /// _STREAM_BUFFER, _HEARTBEAT_MS, _THREADS, _STORAGE_NODES, _VNODES and
  /// _REPLICATION from the environment.
  void apply_env();
  Json to_json() const;
};

// ---------------------------------------------------------------------------
// Live event stream

struct StreamFrame {
  std::uint64_t seq = 0;
  std::vector<EventRecord> events;
};

Json to_json(const StreamFrame& frame);

/// One subscriber's queue. Sequence numbers start at 1 and have no gaps.
class StreamSubscription {
 public:
  enum class Status { frame, timeout, overflow, closed };

  /// Pops the next frame, waiting up to `wait`.
  Status next(StreamFrame& out, std::chrono::milliseconds wait);
  std::uint64_t last_seq() const;

 private:
  friend class StreamHub;
  StreamSubscription(std::optional<std::set<std::string>> filter, std::size_t capacity)
      : filter_(std::move(filter)), capacity_(capacity) {}
  void push(const std::vector<EventRecord>& records);
  void close();

  const std::optional<std::set<std::string>> filter_;
  const std::size_t capacity_;
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::deque<StreamFrame> queue_;
  std::uint64_t seq_ = 0;
  bool overflow_ = false;
  bool closed_ = false;
};

/// Fans newly written events out to subscribers and keeps a bounded log for
/// long-polling clients.
class StreamHub {
 public:
  explicit StreamHub(std::size_t buffer_frames = 10'000, std::size_t poll_history = 10'000);

  std::shared_ptr<StreamSubscription> subscribe(std::optional<std::set<std::string>> filter = {});
  void unsubscribe(const std::shared_ptr<StreamSubscription>& sub);
  void publish(const std::vector<EventRecord>& records);
  std::size_t subscribers() const;

  struct PollResult {
    std::vector<StreamFrame> frames;
    /// Pass as `since` on the next poll.
    std::uint64_t cursor = 0;
    /// Frames after `since` were already dropped from the log.
    bool gap = false;
  };
  /// Hub-wide frames with seq > since; frames without a matching event are
  /// skipped.
  PollResult poll(std::uint64_t since, const std::optional<std::set<std::string>>& filter,
                  std::size_t max) const;

  /// Closes every subscription; later subscribers are closed immediately.
  void shutdown();

 private:
  const std::size_t buffer_;
  const std::size_t history_;
  mutable std::mutex mu_;
  std::vector<std::shared_ptr<StreamSubscription>> subs_;
  std::deque<StreamFrame> log_;
  std::uint64_t seq_ = 0;
  bool shut_ = false;
};

// ---------------------------------------------------------------------------
// Request dispatch

struct ApiRequest {
  std::string method = "GET";
  std::string path;
  std::map<std::string, std::string> params;
  std::string body;
};

struct ApiResponse {
  int status = 200;
  Json body;
};

/// Transport-independent endpoint logic. Responses are
/// {"status":"ok","data":...} or {"status":"error","error":{code, message,
/// field?}}. Validation failures map to 4xx; anything unexpected to 500 with
/// an opaque id whose detail is logged.
class ApiHandler {
 public:
  ApiHandler(EventStore& store, PatternCatalog catalog, ServiceConfig config,
             StreamHub* hub = nullptr, MessageBus* ingest_bus = nullptr);

  ApiResponse dispatch(const ApiRequest& request) const;

  const ServiceConfig& config() const noexcept { return config_; }
  const PatternCatalog& catalog() const noexcept { return catalog_; }

 private:
  Json route(const ApiRequest& request, int& status) const;

  EventStore& store_;
  PatternCatalog catalog_;
  ServiceConfig config_;
  StreamHub* hub_;
  MessageBus* ingest_bus_;
};

// ---------------------------------------------------------------------------
// HTTP server

/// HTTP/1.1 front end over ApiHandler, the /stream server-sent-events
/// channel and the live ingestion consumers.
class Service {
 public:
  /// Opens the configured store and catalog.
  explicit Service(ServiceConfig config);
  /// Serves an existing store (kept alive by the caller).
  Service(EventStore& store, PatternCatalog catalog, ServiceConfig config);
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds and serves in the background. Returns the bound port. Throws
  /// Error when the address cannot be bound.
  int start();
  /// Stops accepting, closes streams and drains in-flight requests.
  void stop();
  /// Blocks until stop() is called from elsewhere (e.g. a signal handler).
  void wait();

  EventStore& store() noexcept { return *store_; }
  StreamHub& hub() noexcept { return hub_; }
  const ApiHandler& handler() const noexcept { return *handler_; }
  InProcessBus& ingest_bus() noexcept { return ingest_bus_; }
  /// True once every live consumer has drained its topics.
  bool wait_ingest_idle(std::chrono::milliseconds timeout);

 private:
  struct Http;
  void init(PatternCatalog catalog);

  ServiceConfig config_;
  std::unique_ptr<EventStore> owned_store_;
  EventStore* store_;
  StreamHub hub_;
  InProcessBus ingest_bus_;
  std::unique_ptr<FileTailBus> follow_bus_;
  std::unique_ptr<ApiHandler> handler_;
  std::vector<std::unique_ptr<StreamConsumer>> consumers_;
  std::unique_ptr<Http> http_;
  std::thread listener_;
  std::mutex stop_mu_;
  std::condition_variable stop_cv_;
  bool stopped_ = false;
};

}  // namespace lognition
