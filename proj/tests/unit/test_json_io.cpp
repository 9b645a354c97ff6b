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

#include <functional>

#include "lognition/error.hpp"
#include "lognition/json_io.hpp"

using namespace lognition;

namespace {

constexpr Timestamp kT0 = 1'767'225'600'000;

std::string field_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const FieldError& e) {
    return e.field();
  }
  return "<none>";
}

}  // namespace

TEST(JsonIo, EventRoundTrip) {
  EventRecord r;
  r.timestamp = kT0 + 7;
  r.type_id = "GPUXID";
  r.location = NodeLocation(24, 7, 2, 7, 3);
  r.count = 4;
  r.raw_message = "Xid 79";
  r.attributes = {{"xid", "79"}};
  Json j = to_json(r);
  EXPECT_EQ(j["location"], "c7-24c2s7n3");
  EXPECT_EQ(event_from_json(j), r);
}

TEST(JsonIo, EventAcceptsIsoTimestampAndDefaults) {
  auto r = event_from_json(Json{{"timestamp", "2026-01-01T00:00:01.250Z"}, {"type", "MCE"},
                                {"location", "c0-0c0s0n0"}});
  EXPECT_EQ(r.timestamp, kT0 + 1250);
  EXPECT_EQ(r.count, 1u);
}

TEST(JsonIo, EventErrorsNameTheField) {
  Json good{{"timestamp", kT0}, {"type", "MCE"}, {"location", "c0-0c0s0n0"}};
  auto with = [&](const std::string& k, Json v) {
    Json j = good;
    j[k] = std::move(v);
    return field_of([&] { event_from_json(j); });
  };
  EXPECT_EQ(with("timestamp", "yesterday"), "timestamp");
  EXPECT_EQ(with("timestamp", 1.5), "timestamp");
  EXPECT_EQ(with("type", 3), "type");
  EXPECT_EQ(with("location", "c99-0c0s0n0"), "location");
  EXPECT_EQ(with("location", "node7"), "location");
  EXPECT_EQ(with("count", 0), "count");
  EXPECT_EQ(with("count", -2), "count");
  EXPECT_EQ(with("attributes", Json{{"a", 1}}), "attributes");
  Json missing = good;
  missing.erase("type");
  EXPECT_EQ(field_of([&] { event_from_json(missing); }), "type");
  EXPECT_EQ(field_of([&] { event_from_json(Json::array()); }), "timestamp");
}

TEST(JsonIo, RunRoundTripAndErrors) {
  ApplicationRun run;
  run.job_id = "42";
  run.user = "carol";
  run.app_name = "s3d";
  run.start_ts = kT0;
  run.end_ts = kT0 + kHourMs;
  run.nodes = {NodeLocation(0, 1, 0, 0, 0), NodeLocation(0, 1, 0, 0, 1)};
  run.exit_status = ExitStatus::failed;
  EXPECT_EQ(run_from_json(to_json(run)), run);
  Json j = to_json(run);
  j["end_ts"] = kT0 - 1;
  EXPECT_EQ(field_of([&] { run_from_json(j); }), "run");
  j = to_json(run);
  j["exit_status"] = "exploded";
  EXPECT_EQ(field_of([&] { run_from_json(j); }), "exit_status");
  j.erase("nodes");
  EXPECT_EQ(field_of([&] { run_from_json(j); }), "nodes");
}

TEST(JsonIo, ContextRoundTripAndValidation) {
  Json j{{"start", kT0},
         {"end", "2026-01-01T01:00:00Z"},
         {"types", {"MCE"}},
         {"locations", {"c1-0", "c1-0c2s3", "c1-0c2s3n1"}},
         {"users", {"alice"}}};
  Context ctx = context_from_json(j);
  EXPECT_EQ(ctx.interval.end(), kT0 + kHourMs);
  ASSERT_TRUE(ctx.locations);
  EXPECT_EQ(ctx.locations->size(), 3u);
  EXPECT_FALSE(ctx.apps);
  Context again = context_from_json(to_json(ctx));
  EXPECT_EQ(again.interval.start(), ctx.interval.start());
  EXPECT_EQ(again.locations, ctx.locations);
  EXPECT_EQ(again.users, ctx.users);

  EXPECT_EQ(field_of([&] { context_from_json(Json{{"start", kT0}}); }), "end");
  EXPECT_EQ(field_of([&] { context_from_json(Json{{"start", kT0}, {"end", kT0 + 1}, {"types", "MCE"}}); }),
            "types");
  EXPECT_EQ(field_of([&] { context_from_json(Json{{"start", kT0}, {"end", kT0 + 1}, {"colour", 1}}); }),
            "colour");
  EXPECT_THROW(context_from_json(Json{{"start", kT0 + 1}, {"end", kT0}}), FieldError);
}

TEST(JsonIo, TimestampParams) {
  EXPECT_EQ(parse_timestamp_param("1767225600000", "start"), kT0);
  EXPECT_EQ(parse_timestamp_param("2026-01-01T00:00:00Z", "start"), kT0);
  EXPECT_EQ(field_of([] { parse_timestamp_param("12abc", "end"); }), "end");
  EXPECT_EQ(field_of([] { parse_timestamp_param("", "end"); }), "end");
}

TEST(JsonIo, TopologyAndRing) {
  Topology t;
  t.rows = 2;
  EXPECT_EQ(topology_from_json(to_json(t)).rows, 2u);
  EXPECT_THROW(topology_from_json(Json{{"rows", 0}}), FieldError);
  RingConfig r;
  r.storage_nodes = 5;
  r.replication_factor = 3;
  auto back = ring_from_json(to_json(r));
  EXPECT_EQ(back.storage_nodes, 5u);
  EXPECT_EQ(back.replication_factor, 3u);
  EXPECT_THROW(ring_from_json(Json{{"storage_nodes", 2}, {"replication_factor", 3}}), FieldError);
}

TEST(JsonIo, ImportStatsShape) {
  ImportStats s;
  s.lines_read = 10;
  s.lines_matched = 7;
  s.lines_unmatched = 3;
  Json j = to_json(s);
  EXPECT_EQ(j["lines_read"], 10);
  EXPECT_EQ(j["lines_matched"], 7);
  EXPECT_EQ(j["lines_unmatched"], 3);
}
