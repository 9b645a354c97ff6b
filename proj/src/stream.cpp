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

#include "lognition/stream.hpp"

#include <algorithm>
#include <fstream>

#include <spdlog/spdlog.h>

namespace lognition {

StreamConsumer::StreamConsumer(MessageBus& bus, std::vector<std::string> topics, EventStore& store,
                               PatternCatalog catalog, ConsumerOptions options,
                               WrittenCallback on_written)
    : bus_(bus),
      store_(store),
      catalog_(std::move(catalog)),
      options_(std::move(options)),
      on_written_(std::move(on_written)),
      coalescer_(options_.window_ms) {
  if (topics.empty()) throw ArgumentError("consumer needs at least one topic");
  std::sort(topics.begin(), topics.end());
  topics.erase(std::unique(topics.begin(), topics.end()), topics.end());
  for (auto& name : topics) {
    auto t = std::make_unique<TopicState>();
    t->name = name;
    if (auto it = options_.start_offsets.find(name); it != options_.start_offsets.end()) {
      t->next = it->second;
    }
    topics_.push_back(std::move(t));
  }
}

StreamConsumer::~StreamConsumer() {
  stop();
  join();
}

void StreamConsumer::start() {
  if (started_) return;
  started_ = true;
  for (auto& t : topics_) {
    TopicState* ts = t.get();
    ts->thread = std::thread([this, ts] { run(*ts); });
  }
}

void StreamConsumer::stop() {
  {
    std::lock_guard lock(mu_);
    stopping_ = true;
  }
  stop_cv_.notify_all();
}

void StreamConsumer::join() {
  for (auto& t : topics_) {
    if (t->thread.joinable()) t->thread.join();
  }
}

std::uint64_t StreamConsumer::offset(const std::string& topic) const {
  for (const auto& t : topics_) {
    if (t->name == topic) return t->next.load();
  }
  throw ArgumentError("consumer does not follow topic '" + topic + "'");
}

std::map<std::string, std::uint64_t> StreamConsumer::offsets() const {
  std::map<std::string, std::uint64_t> out;
  for (const auto& t : topics_) out[t->name] = t->next.load();
  return out;
}

ConsumerStats StreamConsumer::stats() const {
  std::lock_guard lock(mu_);
  return stats_;
}

bool StreamConsumer::sleep_for(std::chrono::milliseconds d) {
  std::unique_lock lock(mu_);
  return !stop_cv_.wait_for(lock, d, [this] { return stopping_.load(); });
}

bool StreamConsumer::wait_until_idle(std::chrono::milliseconds timeout) {
  auto deadline = std::chrono::steady_clock::now() + timeout;
  while (std::chrono::steady_clock::now() < deadline) {
    bool idle = true;
    for (const auto& t : topics_) {
      try {
        if (!t->idle.load() || t->next.load() < bus_.end_offset(t->name)) idle = false;
      } catch (const BusError&) {
        idle = false;
      }
    }
    if (idle) {
      std::lock_guard lock(mu_);
      if (!coalescer_.has_dirty() && inflight_ == 0) return true;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  return false;
}

Timestamp StreamConsumer::eviction_watermark() const {
  std::optional<Timestamp> slowest;
  for (const auto& t : topics_) {
    Timestamp wm = t->watermark.load();
    if (wm == 0 || t->idle.load()) continue;
    slowest = slowest ? std::min(*slowest, wm) : wm;
  }
  return slowest.value_or(watermark_);
}

void StreamConsumer::flush(std::optional<Timestamp> closed_before) {
  std::vector<EventRecord> records;
  {
    std::lock_guard lock(mu_);
    records = coalescer_.take_dirty(closed_before);
    if (records.empty()) return;
    ++inflight_;
  }
  std::vector<EventRecord> written;
  std::uint64_t rejected = 0;
  for (const auto& r : records) {
    try {
      store_.write_event(r);
      written.push_back(r);
    } catch (const Error& e) {
      ++rejected;
      spdlog::warn("stream: dropping {} record: {}", r.type_id, e.what());
    }
  }
  {
    std::lock_guard lock(mu_);
    stats_.records_written += written.size();
    stats_.rejected += rejected;
    --inflight_;
    if (options_.retention_ms > 0) coalescer_.evict_before(eviction_watermark() - options_.retention_ms);
  }
  if (on_written_ && !written.empty()) on_written_(written);
}

void StreamConsumer::handle(TopicState& t, const BusMessage& msg) {
  std::optional<EventRecord> record;
  std::optional<ApplicationRun> run;
  std::uint64_t matched = 0, unmatched = 0, quarantined = 0, rejected = 0;
  try {
    BusPayload p = decode_payload(msg.payload, store_.topology());
    switch (p.kind) {
      case BusPayload::Kind::raw:
        try {
          record = parse_line(catalog_, p.raw, store_.topology());
          ++(record ? matched : unmatched);
        } catch (const MalformedCaptureError& e) {
          ++matched;
          ++quarantined;
          if (options_.quarantine_path) {
            std::lock_guard lock(mu_);
            std::ofstream q(*options_.quarantine_path, std::ios::app);
            q << t.name << ':' << msg.offset << '\t' << e.what() << '\t' << p.raw.text << '\n';
          }
        }
        break;
      case BusPayload::Kind::event:
        if (!store_.has_type(p.event.type_id)) throw UnknownTypeError(p.event.type_id);
        record = std::move(p.event);
        break;
      case BusPayload::Kind::app:
        run = std::move(p.app);
        break;
    }
  } catch (const Error& e) {
    ++rejected;
    spdlog::warn("stream: {}@{} rejected: {}", t.name, msg.offset, e.what());
  }

  if (run) {
    try {
      store_.write_application(*run);
    } catch (const Error& e) {
      spdlog::warn("stream: {}@{} run not written: {}", t.name, msg.offset, e.what());
      run.reset();
      ++rejected;
    }
  }
  std::lock_guard lock(mu_);
  ++stats_.messages;
  stats_.lines_matched += matched;
  stats_.lines_unmatched += unmatched;
  stats_.lines_quarantined += quarantined;
  stats_.rejected += rejected;
  if (run) ++stats_.apps_written;
  if (record) {
    watermark_ = std::max(watermark_, record->timestamp);
    if (record->timestamp > t.watermark.load()) t.watermark = record->timestamp;
    coalescer_.add(*record);
  }
}

void StreamConsumer::run(TopicState& t) {
  auto backoff = options_.backoff_initial;
  while (!stopping_) {
    std::vector<BusMessage> msgs;
    try {
      msgs = bus_.fetch(t.name, t.next, options_.batch, options_.poll_wait);
    } catch (const BusError& e) {
      {
        std::lock_guard lock(mu_);
        ++stats_.retries;
      }
      spdlog::warn("stream: {} fetch failed ({}), retrying in {} ms", t.name, e.what(),
                   backoff.count());
      if (!sleep_for(backoff)) break;
      backoff = std::min(backoff * 2, options_.backoff_max);
      continue;
    }
    backoff = options_.backoff_initial;

    if (msgs.empty()) {
      flush(std::nullopt);
      t.idle = true;
      continue;
    }
    t.idle = false;
    for (const auto& m : msgs) {
      if (m.offset > t.next) {
        spdlog::warn("stream: {} gap, offsets {}..{} missing", t.name, t.next.load(), m.offset - 1);
        std::lock_guard lock(mu_);
        ++stats_.gaps;
      }
      handle(t, m);
      t.next = m.offset + 1;
    }
    Timestamp wm;
    {
      std::lock_guard lock(mu_);
      wm = watermark_;
    }
    flush(wm - options_.lateness_ms);
  }
  flush(std::nullopt);
}

std::unique_ptr<StreamConsumer> stream_consume(MessageBus& bus, std::vector<std::string> topics,
                                               EventStore& store, PatternCatalog catalog,
                                               ConsumerOptions options,
                                               WrittenCallback on_written) {
  for (const auto& def : catalog.types()) {
    if (!store.has_type(def.type_id)) store.register_type(def);
  }
  auto c = std::make_unique<StreamConsumer>(bus, std::move(topics), store, std::move(catalog),
                                            std::move(options), std::move(on_written));
  c->start();
  return c;
}

}  // namespace lognition
