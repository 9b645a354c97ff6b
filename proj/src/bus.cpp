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

#include "lognition/bus.hpp"

#include <fstream>
#include <thread>

#include "lognition/json_io.hpp"

namespace lognition {

namespace fs = std::filesystem;

std::string topic_for(LogSource source) { return "events." + std::string(to_string(source)); }

// ---------------------------------------------------------------------------

std::uint64_t InProcessBus::publish(const std::string& topic, const std::string& payload) {
  std::uint64_t offset;
  {
    std::lock_guard lock(mu_);
    if (unavailable_) throw BusError("bus unavailable");
    Topic& t = topics_[topic];
    offset = t.next++;
    t.messages.push_back({topic, payload, offset});
  }
  cv_.notify_all();
  return offset;
}

std::vector<BusMessage> InProcessBus::fetch(const std::string& topic, std::uint64_t from,
                                            std::size_t max, std::chrono::milliseconds wait) {
  std::unique_lock lock(mu_);
  auto ready = [&] {
    if (unavailable_) return true;
    auto it = topics_.find(topic);
    return it != topics_.end() && it->second.next > from;
  };
  cv_.wait_for(lock, wait, ready);
  if (unavailable_) throw BusError("bus unavailable");
  std::vector<BusMessage> out;
  auto it = topics_.find(topic);
  if (it == topics_.end()) return out;
  const auto& msgs = it->second.messages;
  auto pos = std::lower_bound(msgs.begin(), msgs.end(), from,
                              [](const BusMessage& m, std::uint64_t o) { return m.offset < o; });
  for (; pos != msgs.end() && out.size() < max; ++pos) out.push_back(*pos);
  return out;
}

std::uint64_t InProcessBus::end_offset(const std::string& topic) {
  std::lock_guard lock(mu_);
  if (unavailable_) throw BusError("bus unavailable");
  auto it = topics_.find(topic);
  return it == topics_.end() ? 0 : it->second.next;
}

void InProcessBus::set_unavailable(bool unavailable) {
  {
    std::lock_guard lock(mu_);
    unavailable_ = unavailable;
  }
  cv_.notify_all();
}

void InProcessBus::skip_offsets(const std::string& topic, std::uint64_t n) {
  std::lock_guard lock(mu_);
  topics_[topic].next += n;
}

// ---------------------------------------------------------------------------

FileTailBus::FileTailBus(fs::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  if (!fs::is_directory(dir_, ec)) throw BusError("bus directory '" + dir_.string() + "' does not exist");
}

fs::path FileTailBus::file_for(const std::string& topic) const {
  if (topic == kAppsTopic) return dir_ / "apps.jsonl";
  const std::string prefix = "events.";
  if (topic.rfind(prefix, 0) == 0) {
    auto source = parse_log_source(topic.substr(prefix.size()));
    return dir_ / (std::string(to_string(source)) + ".log");
  }
  throw ArgumentError("file bus has no topic '" + topic + "'");
}

std::uint64_t FileTailBus::publish(const std::string& topic, const std::string& payload) {
  fs::path path = file_for(topic);
  BusPayload p = decode_payload(payload);
  std::string line;
  if (topic == kAppsTopic) {
    if (p.kind != BusPayload::Kind::app) throw ArgumentError("apps topic takes run payloads");
    line = to_json(*p.app).dump();
  } else {
    if (p.kind != BusPayload::Kind::raw) throw ArgumentError("file bus event topics take raw lines");
    line = p.raw.text;
  }
  if (line.find('\n') != std::string::npos) throw ArgumentError("payload spans several lines");
  std::lock_guard lock(mu_);
  if (!fs::is_directory(dir_)) throw BusError("bus directory missing: " + dir_.string());
  std::uint64_t offset = 0;
  {
    std::ifstream in(path);
    std::string l;
    while (std::getline(in, l)) {
      if (!in.eof()) ++offset;
    }
  }
  std::ofstream out(path, std::ios::app);
  out << line << '\n';
  if (!out) throw BusError("cannot append to " + path.string());
  return offset;
}

std::vector<BusMessage> FileTailBus::read_from(const std::string& topic, std::uint64_t from,
                                               std::size_t max) {
  std::vector<BusMessage> out;
  if (!fs::is_directory(dir_)) throw BusError("bus directory missing: " + dir_.string());
  fs::path path = file_for(topic);
  std::ifstream in(path, std::ios::binary);
  if (!in) return out;

  Cursor& cur = cursors_[topic];
  if (from < cur.line) cur = Cursor{};
  in.seekg(cur.pos);
  const bool apps = topic == kAppsTopic;
  LogSource source = apps ? LogSource::console : parse_log_source(topic.substr(7));
  std::string line;
  while (out.size() < max && std::getline(in, line)) {
    if (in.eof()) break;  // incomplete trailing line
    std::uint64_t offset = cur.line++;
    cur.pos = in.tellg();
    if (offset < from) continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string payload;
    if (apps) {
      payload = Json{{"kind", "app"}, {"run", Json::parse(line, nullptr, false)}}.dump();
    } else {
      payload = encode_payload(RawLine{source, 0, line});
    }
    out.push_back({topic, std::move(payload), offset});
  }
  return out;
}

std::vector<BusMessage> FileTailBus::fetch(const std::string& topic, std::uint64_t from,
                                           std::size_t max, std::chrono::milliseconds wait) {
  auto deadline = std::chrono::steady_clock::now() + wait;
  while (true) {
    {
      std::lock_guard lock(mu_);
      auto msgs = read_from(topic, from, max);
      if (!msgs.empty()) return msgs;
    }
    if (std::chrono::steady_clock::now() >= deadline) return {};
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
}

std::uint64_t FileTailBus::end_offset(const std::string& topic) {
  std::lock_guard lock(mu_);
  if (!fs::is_directory(dir_)) throw BusError("bus directory missing: " + dir_.string());
  std::ifstream in(file_for(topic), std::ios::binary);
  std::uint64_t n = 0;
  std::string l;
  while (std::getline(in, l)) {
    if (!in.eof()) ++n;
  }
  return n;
}

// ---------------------------------------------------------------------------

std::string encode_payload(const RawLine& line) {
  return Json{{"kind", "raw"},
              {"source", std::string(to_string(line.source))},
              {"received_ts", line.received_ts},
              {"text", line.text}}
      .dump();
}

std::string encode_payload(const EventRecord& record) {
  return Json{{"kind", "event"}, {"record", to_json(record)}}.dump();
}

std::string encode_payload(const ApplicationRun& run) {
  return Json{{"kind", "app"}, {"run", to_json(run)}}.dump();
}

BusPayload decode_payload(std::string_view payload, const Topology& topology) {
  Json j = Json::parse(payload, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw ParseError("bus payload is not a JSON object");
  auto kind = j.find("kind");
  if (kind == j.end() || !kind->is_string()) throw ParseError("bus payload without kind");
  BusPayload p;
  const std::string k = kind->get<std::string>();
  if (k == "raw") {
    p.kind = BusPayload::Kind::raw;
    auto text = j.find("text");
    if (text == j.end() || !text->is_string() || text->get<std::string>().empty()) {
      throw ParseError("raw payload needs non-empty text");
    }
    p.raw.text = text->get<std::string>();
    if (auto s = j.find("source"); s != j.end() && s->is_string()) {
      p.raw.source = parse_log_source(s->get<std::string>());
    }
    if (auto r = j.find("received_ts"); r != j.end() && r->is_number_integer()) {
      p.raw.received_ts = r->get<Timestamp>();
    }
  } else if (k == "event") {
    p.kind = BusPayload::Kind::event;
    auto rec = j.find("record");
    if (rec == j.end()) throw ParseError("event payload without record");
    p.event = event_from_json(*rec, topology);
  } else if (k == "app") {
    p.kind = BusPayload::Kind::app;
    auto run = j.find("run");
    if (run == j.end()) throw ParseError("app payload without run");
    p.app = run_from_json(*run, topology);
  } else {
    throw ParseError("unknown bus payload kind '" + k + "'");
  }
  return p;
}

}  // namespace lognition
