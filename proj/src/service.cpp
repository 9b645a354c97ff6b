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

#include "lognition/service.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include <httplib.h>
#include <spdlog/spdlog.h>

#include "lognition/analytics.hpp"
#include "lognition/query.hpp"

namespace lognition {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Config

namespace {

std::uint64_t json_uint(const Json& j, const char* field) {
  if (!j.is_number_integer() || (!j.is_number_unsigned() && j.get<std::int64_t>() < 0)) {
    throw FieldError(field, "expected a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

std::string json_string(const Json& j, const char* field) {
  if (!j.is_string()) throw FieldError(field, "expected a string");
  return j.get<std::string>();
}

std::int64_t parse_int(const std::string& text, const std::string& field) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw FieldError(field, "expected an integer");
  }
  return v;
}

}  // namespace

ServiceConfig ServiceConfig::from_json(const Json& j) {
  if (!j.is_object()) throw FieldError("config", "expected a JSON object");
  ServiceConfig c;
  for (auto& [key, v] : j.items()) {
    if (key == "host") {
      c.host = json_string(v, "host");
    } else if (key == "port") {
      auto p = json_uint(v, "port");
      if (p > 65535) throw FieldError("port", "out of range");
      c.port = static_cast<int>(p);
    } else if (key == "store") {
      if (!v.is_null()) c.store_path = json_string(v, "store");
    } else if (key == "catalog") {
      if (!v.is_null()) c.catalog_path = json_string(v, "catalog");
    } else if (key == "follow") {
      if (!v.is_null()) c.follow_dir = json_string(v, "follow");
    } else if (key == "ring") {
      c.ring = ring_from_json(v);
    } else if (key == "topology") {
      c.topology = topology_from_json(v);
    } else if (key == "limits") {
      if (!v.is_object()) throw FieldError("limits", "expected an object");
      for (auto& [lk, lv] : v.items()) {
        auto n = json_uint(lv, lk.c_str());
        if (lk == "result_limit") c.result_limit = n;
        else if (lk == "stream_buffer") c.stream_buffer = n;
        else if (lk == "heartbeat_ms") c.heartbeat = std::chrono::milliseconds(n);
        else if (lk == "threads") c.threads = static_cast<unsigned>(std::max<std::uint64_t>(n, 1));
        else if (lk == "max_histogram_bins") c.max_histogram_bins = n;
        else if (lk == "max_te_windows") c.max_te_windows = n;
        else throw FieldError(lk, "unknown limit");
      }
    } else {
      throw FieldError(key, "unknown config key");
    }
  }
  return c;
}

ServiceConfig ServiceConfig::load(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot read config " + path.string());
  Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded()) throw ParseError("config " + path.string() + " is not valid JSON");
  return from_json(j);
}

void ServiceConfig::apply_env() {
  auto env = [](const char* name) -> std::optional<std::string> {
    const char* v = std::getenv(name);
    if (!v) return std::nullopt;
    return std::string(v);
  };
  auto num = [&](const char* name) -> std::optional<std::int64_t> {
    auto v = env(name);
    if (!v) return std::nullopt;
    auto n = parse_int(*v, name);
    if (n < 0) throw FieldError(name, "must be non-negative");
    return n;
  };
  if (auto v = env("LOGNITION_HOST")) host = *v;
  if (auto v = num("LOGNITION_PORT")) {
    if (*v > 65535) throw FieldError("LOGNITION_PORT", "out of range");
    port = static_cast<int>(*v);
  }
  if (auto v = env("LOGNITION_STORE")) store_path = *v;
  if (auto v = env("LOGNITION_CATALOG")) catalog_path = *v;
  if (auto v = env("LOGNITION_FOLLOW")) follow_dir = *v;
  if (auto v = num("LOGNITION_RESULT_LIMIT")) result_limit = static_cast<std::size_t>(*v);
  if (auto v = num("LOGNITION_STREAM_BUFFER")) stream_buffer = static_cast<std::size_t>(*v);
  if (auto v = num("LOGNITION_HEARTBEAT_MS")) heartbeat = std::chrono::milliseconds(*v);
  if (auto v = num("LOGNITION_THREADS")) threads = static_cast<unsigned>(std::max<std::int64_t>(*v, 1));
  if (auto v = num("LOGNITION_STORAGE_NODES")) ring.storage_nodes = static_cast<std::uint32_t>(*v);
  if (auto v = num("LOGNITION_VNODES")) ring.vnodes_per_node = static_cast<std::uint32_t>(*v);
  if (auto v = num("LOGNITION_REPLICATION")) ring.replication_factor = static_cast<std::uint32_t>(*v);
  ring.validate();
}

Json ServiceConfig::to_json() const {
  Json j{{"host", host},
         {"port", port},
         {"ring", lognition::to_json(ring)},
         {"topology", lognition::to_json(topology)},
         {"limits",
          {{"result_limit", result_limit},
           {"stream_buffer", stream_buffer},
           {"heartbeat_ms", heartbeat.count()},
           {"threads", threads},
           {"max_histogram_bins", max_histogram_bins},
           {"max_te_windows", max_te_windows}}}};
  if (store_path) j["store"] = store_path->string();
  if (catalog_path) j["catalog"] = catalog_path->string();
  if (follow_dir) j["follow"] = follow_dir->string();
  return j;
}

// ---------------------------------------------------------------------------
// Stream hub

namespace {

std::vector<EventRecord> filtered(const std::vector<EventRecord>& records,
                                  const std::optional<std::set<std::string>>& filter) {
  if (!filter) return records;
  std::vector<EventRecord> out;
  for (const auto& r : records) {
    if (filter->count(r.type_id)) out.push_back(r);
  }
  return out;
}

}  // namespace

Json to_json(const StreamFrame& frame) {
  Json events = Json::array();
  for (const auto& e : frame.events) events.push_back(to_json(e));
  return Json{{"seq", frame.seq}, {"events", events}};
}

StreamSubscription::Status StreamSubscription::next(StreamFrame& out,
                                                    std::chrono::milliseconds wait) {
  std::unique_lock lock(mu_);
  cv_.wait_for(lock, wait, [&] { return !queue_.empty() || overflow_ || closed_; });
  if (overflow_) return Status::overflow;
  if (!queue_.empty()) {
    out = std::move(queue_.front());
    queue_.pop_front();
    return Status::frame;
  }
  return closed_ ? Status::closed : Status::timeout;
}

std::uint64_t StreamSubscription::last_seq() const {
  std::lock_guard lock(mu_);
  return seq_;
}

void StreamSubscription::push(const std::vector<EventRecord>& records) {
  auto events = filtered(records, filter_);
  if (events.empty()) return;
  {
    std::lock_guard lock(mu_);
    if (overflow_ || closed_) return;
    if (queue_.size() >= capacity_) {
      overflow_ = true;
      queue_.clear();
    } else {
      queue_.push_back({++seq_, std::move(events)});
    }
  }
  cv_.notify_all();
}

void StreamSubscription::close() {
  {
    std::lock_guard lock(mu_);
    closed_ = true;
  }
  cv_.notify_all();
}

StreamHub::StreamHub(std::size_t buffer_frames, std::size_t poll_history)
    : buffer_(std::max<std::size_t>(buffer_frames, 1)), history_(poll_history) {}

std::shared_ptr<StreamSubscription> StreamHub::subscribe(std::optional<std::set<std::string>> filter) {
  std::shared_ptr<StreamSubscription> sub(new StreamSubscription(std::move(filter), buffer_));
  std::lock_guard lock(mu_);
  if (shut_) {
    sub->close();
  } else {
    subs_.push_back(sub);
  }
  return sub;
}

void StreamHub::unsubscribe(const std::shared_ptr<StreamSubscription>& sub) {
  std::lock_guard lock(mu_);
  std::erase(subs_, sub);
}

std::size_t StreamHub::subscribers() const {
  std::lock_guard lock(mu_);
  return subs_.size();
}

void StreamHub::publish(const std::vector<EventRecord>& records) {
  if (records.empty()) return;
  std::lock_guard lock(mu_);
  log_.push_back({++seq_, records});
  while (log_.size() > history_) log_.pop_front();
  for (const auto& s : subs_) s->push(records);
}

StreamHub::PollResult StreamHub::poll(std::uint64_t since,
                                      const std::optional<std::set<std::string>>& filter,
                                      std::size_t max) const {
  std::lock_guard lock(mu_);
  PollResult r;
  r.cursor = since;
  if (!log_.empty() && since + 1 < log_.front().seq) r.gap = true;
  for (const auto& f : log_) {
    if (f.seq <= since) continue;
    if (r.frames.size() >= max) break;
    r.cursor = f.seq;
    auto events = filtered(f.events, filter);
    if (!events.empty()) r.frames.push_back({f.seq, std::move(events)});
  }
  return r;
}

void StreamHub::shutdown() {
  std::lock_guard lock(mu_);
  shut_ = true;
  for (const auto& s : subs_) s->close();
  subs_.clear();
}

// ---------------------------------------------------------------------------
// Dispatch

namespace {

struct HttpError {
  int status;
  std::string code;
  std::string message;
  std::string field;
};

std::optional<std::string> param(const ApiRequest& req, const std::string& name) {
  auto it = req.params.find(name);
  if (it == req.params.end()) return std::nullopt;
  return it->second;
}

std::string required_param(const ApiRequest& req, const std::string& name) {
  auto v = param(req, name);
  if (!v || v->empty()) throw FieldError(name, "is required");
  return *v;
}

std::int64_t int_param(const ApiRequest& req, const std::string& name, std::int64_t fallback,
                       std::int64_t min, std::int64_t max) {
  auto v = param(req, name);
  if (!v) return fallback;
  auto n = parse_int(*v, name);
  if (n < min || n > max) {
    throw FieldError(name, "must be between " + std::to_string(min) + " and " + std::to_string(max));
  }
  return n;
}

bool bool_param(const ApiRequest& req, const std::string& name, bool fallback) {
  auto v = param(req, name);
  if (!v) return fallback;
  if (*v == "true" || *v == "1") return true;
  if (*v == "false" || *v == "0") return false;
  throw FieldError(name, "expected true or false");
}

// A present list parameter must be non-empty with no empty items.
std::vector<std::string> split_list(const std::string& text, const std::string& name) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    if (item.empty()) throw FieldError(name, "expected a comma-separated list of non-empty items");
    out.push_back(item);
  }
  if (out.empty() || text.back() == ',') {
    throw FieldError(name, "expected a comma-separated list of non-empty items");
  }
  return out;
}

std::optional<std::set<std::string>> type_filter(const ApiRequest& req) {
  auto v = param(req, "types");
  if (!v) return std::nullopt;
  auto items = split_list(*v, "types");
  return std::set<std::string>(items.begin(), items.end());
}

Context context_from_params(const ApiRequest& req, const Topology& topology) {
  Json j = Json::object();
  j["start"] = required_param(req, "start");
  j["end"] = required_param(req, "end");
  for (const char* list : {"types", "locations", "users", "apps"}) {
    if (auto v = param(req, list)) j[list] = split_list(*v, list);
  }
  return context_from_json(j, topology);
}

Json parse_body(const ApiRequest& req) {
  Json j = Json::parse(req.body, nullptr, false);
  if (j.is_discarded()) throw HttpError{400, "bad_json", "request body is not valid JSON", ""};
  if (!j.is_object()) throw HttpError{400, "bad_json", "request body must be a JSON object", ""};
  return j;
}

void require_type(const EventStore& store, const std::string& type, const std::string& field) {
  if (!store.has_type(type)) throw FieldError(field, "unknown event type '" + type + "'");
}

Json ok(Json data) { return Json{{"status", "ok"}, {"data", std::move(data)}}; }

Json error_body(const std::string& code, const std::string& message, const std::string& field) {
  Json e{{"code", code}, {"message", message}};
  if (!field.empty()) e["field"] = field;
  return Json{{"status", "error"}, {"error", e}};
}

std::string opaque_id() {
  static std::atomic<std::uint64_t> counter{0};
  static const std::uint64_t salt = std::random_device{}();
  std::uint64_t v = stable_hash64(std::to_string(++counter), salt);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

ApiHandler::ApiHandler(EventStore& store, PatternCatalog catalog, ServiceConfig config,
                       StreamHub* hub, MessageBus* ingest_bus)
    : store_(store),
      catalog_(std::move(catalog)),
      config_(std::move(config)),
      hub_(hub),
      ingest_bus_(ingest_bus) {}

ApiResponse ApiHandler::dispatch(const ApiRequest& request) const {
  ApiResponse resp;
  try {
    int status = 200;
    resp.body = route(request, status);
    resp.status = status;
  } catch (const HttpError& e) {
    resp.status = e.status;
    resp.body = error_body(e.code, e.message, e.field);
  } catch (const FieldError& e) {
    resp.status = 400;
    resp.body = error_body("invalid_argument", e.what(), e.field());
  } catch (const UnknownTypeError& e) {
    resp.status = 400;
    resp.body = error_body("unknown_type", e.what(), "type");
  } catch (const InsufficientDataError& e) {
    resp.status = 422;
    resp.body = error_body("insufficient_data", e.what(), "");
  } catch (const ArgumentError& e) {
    resp.status = 400;
    resp.body = error_body("invalid_argument", e.what(), "");
  } catch (const ParseError& e) {
    resp.status = 400;
    resp.body = error_body("invalid_argument", e.what(), "");
  } catch (const RangeError& e) {
    resp.status = 400;
    resp.body = error_body("invalid_argument", e.what(), "");
  } catch (const nlohmann::json::exception& e) {
    resp.status = 400;
    resp.body = error_body("bad_json", e.what(), "");
  } catch (const std::exception& e) {
    std::string id = opaque_id();
    spdlog::error("request {} {} failed [{}]: {}", request.method, request.path, id, e.what());
    resp.status = 500;
    resp.body = error_body("internal", "internal error " + id, "");
  }
  return resp;
}

Json ApiHandler::route(const ApiRequest& req, int& status) const {
  const std::string& path = req.path;
  const bool get = req.method == "GET";
  const bool post = req.method == "POST";
  auto method_not_allowed = [&] {
    throw HttpError{405, "method_not_allowed", req.method + " not allowed on " + path, ""};
  };
  const Topology& topo = store_.topology();

  if (path == "/health") {
    if (!get) method_not_allowed();
    return Json{{"status", "ok"},
                {"data", {{"types", store_.types().size()}, {"persistent", store_.persistent()}}}};
  }
  if (path == "/query") {
    if (!post) method_not_allowed();
    Json body = parse_body(req);
    std::size_t limit = config_.result_limit;
    if (auto it = body.find("limit"); it != body.end()) {
      if (!it->is_number_integer() || it->get<std::int64_t>() < 0) {
        throw FieldError("limit", "expected a non-negative integer");
      }
      limit = std::min<std::size_t>(it->get<std::uint64_t>(), config_.result_limit);
      body.erase("limit");
    }
    Context ctx = context_from_json(body, topo);
    auto result = evaluate_context(store_, ctx, limit);
    Json r = ok(to_json(result));
    r["truncated"] = result.truncated;
    return r;
  }
  if (path == "/heatmap") {
    if (!get) method_not_allowed();
    std::string type = required_param(req, "type");
    Context ctx = context_from_params(req, topo);
    require_type(store_, type, "type");
    return ok(to_json(heatmap(store_, ctx, type)));
  }
  if (path == "/distribution") {
    if (!get) method_not_allowed();
    Context ctx = context_from_params(req, topo);
    GroupBy g = GroupBy::cabinet;
    if (auto v = param(req, "group_by")) {
      try {
        g = parse_group_by(*v);
      } catch (const ParseError& e) {
        throw FieldError("group_by", e.what());
      }
    }
    return ok(to_json(distribution(store_, ctx, g)));
  }
  if (path == "/histogram") {
    if (!get) method_not_allowed();
    Context ctx = context_from_params(req, topo);
    auto width = int_param(req, "bin_width_ms", kHourMs, 1, kMaxTimestamp);
    if (static_cast<std::uint64_t>(ctx.interval.length() / width) >= config_.max_histogram_bins) {
      throw FieldError("bin_width_ms", "too many bins for the interval");
    }
    return ok(to_json(histogram(store_, ctx, width)));
  }
  if (path == "/placements") {
    if (!get) method_not_allowed();
    Timestamp ts = parse_timestamp_param(required_param(req, "ts"), "ts");
    if (ts < -kMaxTimestamp || ts >= kMaxTimestamp) throw FieldError("ts", "out of range");
    return ok(placements_to_json(ts, placements_at(store_, ts)));
  }
  if (path == "/te") {
    if (!get) method_not_allowed();
    Context ctx = context_from_params(req, topo);
    std::string a = required_param(req, "type_a");
    std::string b = required_param(req, "type_b");
    require_type(store_, a, "type_a");
    require_type(store_, b, "type_b");
    TEWindowParams p;
    p.window_ms = int_param(req, "window_ms", p.window_ms, 1, kMaxTimestamp);
    p.step_ms = int_param(req, "step_ms", p.step_ms, 1, kMaxTimestamp);
    p.bin_width_ms = int_param(req, "bin_width_ms", p.bin_width_ms, 1, kMaxTimestamp);
    p.threshold = static_cast<std::uint64_t>(int_param(req, "threshold", 0, 0, 1LL << 32));
    p.history = static_cast<int>(int_param(req, "history", 1, 1, 2));
    if (p.window_ms < 3 * p.bin_width_ms) throw FieldError("window_ms", "must span at least 3 bins");
    auto windows = ctx.interval.length() >= p.window_ms
                       ? static_cast<std::uint64_t>((ctx.interval.length() - p.window_ms) / p.step_ms + 1)
                       : 0;
    if (windows > config_.max_te_windows) throw FieldError("step_ms", "too many windows");
    if (windows * static_cast<std::uint64_t>(p.window_ms / p.bin_width_ms) > 50'000'000ULL) {
      throw FieldError("bin_width_ms", "too many bins across windows");
    }
    Json data = to_json(te_windows(store_, ctx, a, b, p));
    data["type_a"] = a;
    data["type_b"] = b;
    data["window_ms"] = p.window_ms;
    data["step_ms"] = p.step_ms;
    data["bin_width_ms"] = p.bin_width_ms;
    return ok(std::move(data));
  }
  if (path == "/topterms") {
    if (!get) method_not_allowed();
    Context ctx = context_from_params(req, topo);
    auto limit = int_param(req, "limit", 20, 1, 100'000);
    return ok(to_json(word_count(store_, ctx, catalog_.filters()), static_cast<std::size_t>(limit)));
  }
  if (path == "/tfidf") {
    if (!get) method_not_allowed();
    Context ctx = context_from_params(req, topo);
    TfIdfOptions opt;
    if (auto v = param(req, "doc_unit")) {
      try {
        opt.doc_unit = parse_doc_unit(*v);
      } catch (const ParseError& e) {
        throw FieldError("doc_unit", e.what());
      }
    }
    opt.smoothed_idf = bool_param(req, "smoothed", false);
    opt.per_document = bool_param(req, "per_document", false);
    auto limit = int_param(req, "limit", 20, 1, 100'000);
    return ok(to_json(tf_idf(store_, ctx, opt, catalog_.filters()), static_cast<std::size_t>(limit)));
  }
  if (path == "/types") {
    if (!get) method_not_allowed();
    Json arr = Json::array();
    for (const auto& def : store_.types()) arr.push_back(to_json(def));
    return ok(Json{{"catalog_version", catalog_.version()}, {"types", arr}});
  }
  if (path == "/topology") {
    if (!get) method_not_allowed();
    return ok(Json{{"topology", to_json(topo)}, {"ring", to_json(store_.ring().config())}});
  }
  if (path == "/poll") {
    if (!get) method_not_allowed();
    if (!hub_) throw HttpError{404, "not_found", "live stream is not enabled", ""};
    auto since = int_param(req, "since", 0, 0, std::numeric_limits<std::int64_t>::max());
    auto max = int_param(req, "max", 1000, 1, 100'000);
    auto r = hub_->poll(static_cast<std::uint64_t>(since), type_filter(req), static_cast<std::size_t>(max));
    Json frames = Json::array();
    for (const auto& f : r.frames) frames.push_back(to_json(f));
    return ok(Json{{"frames", frames}, {"cursor", r.cursor}, {"gap", r.gap}});
  }
  if (path == "/ingest") {
    if (!post) method_not_allowed();
    if (!ingest_bus_) throw HttpError{404, "not_found", "ingestion is not enabled", ""};
    Json body = parse_body(req);
    for (const auto& [key, v] : body.items()) {
      if (key != "source" && key != "lines" && key != "records" && key != "runs") {
        throw FieldError(key, "unknown ingest field");
      }
    }
    // Validate everything first so a bad item publishes nothing.
    std::vector<std::pair<std::string, std::string>> out;
    LogSource source = LogSource::console;
    if (auto it = body.find("source"); it != body.end()) {
      if (!it->is_string()) throw FieldError("source", "expected a string");
      try {
        source = parse_log_source(it->get<std::string>());
      } catch (const ParseError& e) {
        throw FieldError("source", e.what());
      }
    }
    for (auto& [key, v] : body.items()) {
      if (key == "source") continue;
      if (!v.is_array()) throw FieldError(key, "expected an array");
      for (const auto& item : v) {
        if (key == "lines") {
          if (!item.is_string() || item.get<std::string>().empty() ||
              item.get<std::string>().find('\n') != std::string::npos) {
            throw FieldError("lines", "expected non-empty single-line strings");
          }
          out.emplace_back(topic_for(source), encode_payload(RawLine{source, 0, item.get<std::string>()}));
        } else if (key == "records") {
          EventRecord r = event_from_json(item, topo);
          require_type(store_, r.type_id, "records");
          out.emplace_back(topic_for(source), encode_payload(r));
        } else {
          out.emplace_back(std::string(kAppsTopic), encode_payload(run_from_json(item, topo)));
        }
      }
    }
    for (const auto& [topic, payload] : out) ingest_bus_->publish(topic, payload);
    status = 202;
    return ok(Json{{"published", out.size()}});
  }
  throw HttpError{404, "not_found", "no endpoint " + path, ""};
}

// ---------------------------------------------------------------------------
// HTTP

struct Service::Http {
  httplib::Server server;
};

Service::Service(ServiceConfig config)
    : config_(std::move(config)), hub_(config_.stream_buffer) {
  StoreOptions opts{config_.ring, config_.topology, config_.store_path};
  owned_store_ = std::make_unique<EventStore>(opts);
  store_ = owned_store_.get();
  init(config_.catalog_path ? PatternCatalog::load(*config_.catalog_path) : PatternCatalog::builtin());
}

Service::Service(EventStore& store, PatternCatalog catalog, ServiceConfig config)
    : config_(std::move(config)), store_(&store), hub_(config_.stream_buffer) {
  init(std::move(catalog));
}

void Service::init(PatternCatalog catalog) {
  handler_ = std::make_unique<ApiHandler>(*store_, catalog, config_, &hub_, &ingest_bus_);
  auto publish = [this](const std::vector<EventRecord>& records) { hub_.publish(records); };
  std::vector<std::string> topics = {topic_for(LogSource::console), topic_for(LogSource::application),
                                     topic_for(LogSource::network), std::string(kAppsTopic)};
  consumers_.push_back(stream_consume(ingest_bus_, topics, *store_, catalog, {}, publish));
  if (config_.follow_dir) {
    follow_bus_ = std::make_unique<FileTailBus>(*config_.follow_dir);
    consumers_.push_back(stream_consume(*follow_bus_, topics, *store_, catalog, {}, publish));
  }
  http_ = std::make_unique<Http>();
}

Service::~Service() { stop(); }

bool Service::wait_ingest_idle(std::chrono::milliseconds timeout) {
  for (auto& c : consumers_) {
    if (!c->wait_until_idle(timeout)) return false;
  }
  return true;
}

int Service::start() {
  auto& svr = http_->server;
  unsigned threads = std::max(config_.threads, 4u);
  svr.new_task_queue = [threads] { return new httplib::ThreadPool(threads); };

  auto to_api = [](const httplib::Request& req) {
    ApiRequest api;
    api.method = req.method;
    api.path = req.path;
    for (const auto& [k, v] : req.params) api.params.emplace(k, v);
    api.body = req.body;
    return api;
  };
  auto handle = [this, to_api](const httplib::Request& req, httplib::Response& res) {
    ApiResponse r = handler_->dispatch(to_api(req));
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };

  svr.Get("/stream", [this](const httplib::Request& req, httplib::Response& res) {
    std::optional<std::set<std::string>> filter;
    if (req.has_param("types")) {
      try {
        auto items = split_list(req.get_param_value("types"), "types");
        filter = std::set<std::string>(items.begin(), items.end());
      } catch (const FieldError& e) {
        res.status = 400;
        res.set_content(error_body("invalid_argument", e.what(), e.field()).dump(), "application/json");
        return;
      }
    }
    auto sub = hub_.subscribe(std::move(filter));
    auto heartbeat = config_.heartbeat;
    res.set_header("Cache-Control", "no-cache");
    res.set_chunked_content_provider(
        "text/event-stream",
        [sub, heartbeat](std::size_t, httplib::DataSink& sink) {
          StreamFrame frame;
          switch (sub->next(frame, heartbeat)) {
            case StreamSubscription::Status::frame: {
              std::string msg = "id: " + std::to_string(frame.seq) + "\nevent: events\ndata: " +
                                to_json(frame).dump() + "\n\n";
              return sink.write(msg.data(), msg.size());
            }
            case StreamSubscription::Status::timeout: {
              std::string msg = "event: heartbeat\ndata: " +
                                Json{{"seq", sub->last_seq()}}.dump() + "\n\n";
              return sink.write(msg.data(), msg.size());
            }
            case StreamSubscription::Status::overflow: {
              std::string msg = "event: overflow\ndata: " +
                                Json{{"code", "buffer_overflow"}, {"seq", sub->last_seq()}}.dump() +
                                "\n\n";
              sink.write(msg.data(), msg.size());
              sink.done();
              return true;
            }
            case StreamSubscription::Status::closed:
              sink.done();
              return true;
          }
          return false;
        },
        [this, sub](bool) { hub_.unsubscribe(sub); });
  });
  for (const char* pattern : {R"(/.*)"}) {
    svr.Get(pattern, handle);
    svr.Post(pattern, handle);
    svr.Put(pattern, handle);
    svr.Delete(pattern, handle);
    svr.Patch(pattern, handle);
    svr.Options(pattern, handle);
  }

  int port = config_.port;
  if (port == 0) {
    port = svr.bind_to_any_port(config_.host);
    if (port < 0) throw Error("cannot bind " + config_.host);
  } else if (!svr.bind_to_port(config_.host, port)) {
    throw Error("cannot bind " + config_.host + ":" + std::to_string(port));
  }
  listener_ = std::thread([this] { http_->server.listen_after_bind(); });
  svr.wait_until_ready();
  spdlog::info("serving on {}:{}", config_.host, port);
  return port;
}

void Service::stop() {
  {
    std::lock_guard lock(stop_mu_);
    if (stopped_) return;
    stopped_ = true;
  }
  stop_cv_.notify_all();
  hub_.shutdown();
  if (http_) http_->server.stop();
  if (listener_.joinable()) listener_.join();
  for (auto& c : consumers_) c->stop();
  for (auto& c : consumers_) c->join();
  if (store_) store_->flush();
}

void Service::wait() {
  std::unique_lock lock(stop_mu_);
  stop_cv_.wait(lock, [this] { return stopped_; });
}

}  // namespace lognition
