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

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lognition/analytics.hpp"
#include "lognition/ingest.hpp"
#include "lognition/model.hpp"
#include "lognition/query.hpp"
#include "lognition/ring.hpp"
#include "lognition/store.hpp"

// JSON forms shared by the service, the bus payloads and the CLI. Readers
// throw FieldError naming the offending field. Timestamps are written as
// epoch milliseconds and read as either epoch milliseconds or ISO-8601 text.

namespace lognition {

using Json = nlohmann::json;

Timestamp timestamp_from_json(const Json& value, const std::string& field);
/// Accepts a decimal string too, for query-string parameters.
Timestamp parse_timestamp_param(const std::string& text, const std::string& field);

Json to_json(const EventRecord& record);
EventRecord event_from_json(const Json& j, const Topology& topology = Topology{});

Json to_json(const ApplicationRun& run);
ApplicationRun run_from_json(const Json& j, const Topology& topology = Topology{});

Json to_json(const EventTypeDef& def);
Json to_json(const Topology& topology);
Topology topology_from_json(const Json& j);
Json to_json(const RingConfig& ring);
RingConfig ring_from_json(const Json& j);

/// Flat object: start, end, and optional types, locations, users, apps
/// arrays.
Json to_json(const Context& ctx);
Context context_from_json(const Json& j, const Topology& topology = Topology{});

Json to_json(const ContextResult& result);
Json to_json(const HeatMap& map);
Json to_json(const Distribution& dist);
Json to_json(const Histogram& hist);
Json placements_to_json(Timestamp ts, const std::vector<ApplicationRun>& runs);
Json to_json(const TEResult& te);
Json to_json(const std::vector<TEWindow>& windows);
Json to_json(const TermStats& stats, std::size_t limit);
Json to_json(const TfIdfResult& result, std::size_t limit);
Json to_json(const ImportStats& stats);
Json to_json(const StoreStats& stats);

}  // namespace lognition
