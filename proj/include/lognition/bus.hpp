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
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lognition/ingest.hpp"
#include "lognition/model.hpp"

namespace lognition {

struct BusMessage {
  std::string topic;
  std::string payload;
  std::uint64_t offset = 0;
};

/// Topic carrying raw lines of one source: "events.<source>".
std::string topic_for(LogSource source);
inline constexpr std::string_view kAppsTopic = "apps";

/// Minimal log-structured message bus. Offsets start at 0 and increase by one
/// per message within a topic. Implementations throw BusError when the
/// transport is unavailable.
class MessageBus {
 public:
  virtual ~MessageBus() = default;

  /// Appends and returns the new message's offset.
  virtual std::uint64_t publish(const std::string& topic, const std::string& payload) = 0;
  /// Up to `max` messages with offset >= `from`, in offset order. Blocks up
  /// to `wait` when none are available yet.
  virtual std::vector<BusMessage> fetch(const std::string& topic, std::uint64_t from,
                                        std::size_t max, std::chrono::milliseconds wait) = 0;
  /// Offset the next published message will get.
  virtual std::uint64_t end_offset(const std::string& topic) = 0;
};

class InProcessBus : public MessageBus {
 public:
  std::uint64_t publish(const std::string& topic, const std::string& payload) override;
  std::vector<BusMessage> fetch(const std::string& topic, std::uint64_t from, std::size_t max,
                                std::chrono::milliseconds wait) override;
  std::uint64_t end_offset(const std::string& topic) override;

  /// Test hooks: make every call throw BusError while set, or burn offsets
  /// so consumers observe a gap.
  void set_unavailable(bool unavailable);
  void skip_offsets(const std::string& topic, std::uint64_t n);

 private:
  struct Topic {
    std::vector<BusMessage> messages;
    std::uint64_t next = 0;
  };
  std::mutex mu_;
  std::condition_variable cv_;
  std::map<std::string, Topic> topics_;
  bool unavailable_ = false;
};

/// Follows plain files in a directory: topic "events.<source>" is
/// `<dir>/<source>.log` and "apps" is `<dir>/apps.jsonl`. The offset of a
/// message is its 0-based line number; a trailing line without a newline is
/// not delivered until it is completed. Fetched payloads are encoded like
/// published ones (raw lines or runs). A missing directory raises BusError.
class FileTailBus : public MessageBus {
 public:
  explicit FileTailBus(std::filesystem::path dir);

  std::uint64_t publish(const std::string& topic, const std::string& payload) override;
  std::vector<BusMessage> fetch(const std::string& topic, std::uint64_t from, std::size_t max,
                                std::chrono::milliseconds wait) override;
  std::uint64_t end_offset(const std::string& topic) override;

  std::filesystem::path file_for(const std::string& topic) const;

 private:
  struct Cursor {
    std::uint64_t line = 0;
    std::streamoff pos = 0;
  };
  std::vector<BusMessage> read_from(const std::string& topic, std::uint64_t from,
                                    std::size_t max);

  std::filesystem::path dir_;
  std::mutex mu_;
  std::map<std::string, Cursor> cursors_;
};

/// Decoded bus payload: JSON with "kind" raw, event or app.
struct BusPayload {
  enum class Kind { raw, event, app };
  Kind kind = Kind::raw;
  RawLine raw;
  EventRecord event;
  std::optional<ApplicationRun> app;
};

std::string encode_payload(const RawLine& line);
std::string encode_payload(const EventRecord& record);
std::string encode_payload(const ApplicationRun& run);
/// Throws ParseError (or FieldError) on malformed payloads.
BusPayload decode_payload(std::string_view payload, const Topology& topology = Topology{});

}  // namespace lognition
