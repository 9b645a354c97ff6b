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

#include "lognition/catalog.hpp"
#include "lognition/error.hpp"
#include "lognition/model.hpp"

using namespace lognition;

TEST(Topology, TitanDefaults) {
  Topology t;
  EXPECT_EQ(t.node_count(), 19200u);
  EXPECT_EQ(t.cabinet_count(), 200u);
  EXPECT_EQ(enumerate_nodes(t).size(), 19200u);
}

TEST(NodeId, RoundTripsEveryNodeOfOneCabinet) {
  Topology t;
  for (const auto& n : LocationSelector::cabinet(24, 7).expand(t)) {
    EXPECT_EQ(parse_node_id(format_node_id(n)), n);
  }
}

TEST(NodeId, ColumnComesFirstInText) {
  auto n = parse_node_id("c3-1c2s7n0");
  EXPECT_EQ(n.cabinet_col(), 3u);
  EXPECT_EQ(n.cabinet_row(), 1u);
  EXPECT_EQ(n.cage(), 2u);
  EXPECT_EQ(n.slot(), 7u);
  EXPECT_EQ(n.node(), 0u);
}

TEST(NodeId, RejectsMalformedAndOutOfRange) {
  EXPECT_THROW(parse_node_id("c3-1c2s7"), ParseError);
  EXPECT_THROW(parse_node_id("node7"), ParseError);
  EXPECT_THROW(parse_node_id("c8-0c0s0n0"), RangeError);
  EXPECT_THROW(parse_node_id("c0-25c0s0n0"), RangeError);
  EXPECT_THROW(parse_node_id("c0-0c3s0n0"), RangeError);
  EXPECT_THROW(parse_node_id("c0-0c0s8n0"), RangeError);
  EXPECT_THROW(parse_node_id("c0-0c0s0n4"), RangeError);
}

TEST(LocationSelector, PrefixesExpandToTheirMembers) {
  Topology t;
  EXPECT_EQ(parse_location_selector("c3-1").expand(t).size(), 96u);
  EXPECT_EQ(parse_location_selector("c3-1c2").expand(t).size(), 32u);
  EXPECT_EQ(parse_location_selector("c3-1c2s4").expand(t).size(), 4u);
  EXPECT_EQ(parse_location_selector("c3-1c2s4n1").expand(t).size(), 1u);
  for (const char* text : {"c3-1", "c3-1c2", "c3-1c2s4", "c3-1c2s4n1"}) {
    EXPECT_EQ(format_location_selector(parse_location_selector(text)), text);
  }
}

TEST(LocationSelector, MatchesOnlyItsSubtree) {
  auto sel = parse_location_selector("c3-1c2");
  EXPECT_TRUE(sel.matches(parse_node_id("c3-1c2s0n0")));
  EXPECT_FALSE(sel.matches(parse_node_id("c3-1c1s0n0")));
  EXPECT_FALSE(sel.matches(parse_node_id("c4-1c2s0n0")));
}

TEST(TimeInterval, HalfOpenAndBounded) {
  TimeInterval iv(10, 20);
  EXPECT_TRUE(iv.contains(10));
  EXPECT_FALSE(iv.contains(20));
  EXPECT_THROW(TimeInterval(20, 20), ArgumentError);
  EXPECT_THROW(TimeInterval(20, 10), ArgumentError);
  EXPECT_THROW(TimeInterval(0, kMaxTimestamp + 1), ArgumentError);
}

TEST(TimeInterval, HoursCoverPartialBuckets) {
  TimeInterval iv(kHourMs + 5, 3 * kHourMs + 1);
  std::vector<Timestamp> want{kHourMs, 2 * kHourMs, 3 * kHourMs};
  EXPECT_EQ(iv.hours(), want);
}

TEST(EventRecord, Validation) {
  EventRecord r;
  r.timestamp = 1;
  r.type_id = "MCE";
  EXPECT_NO_THROW(r.validate());
  r.count = 0;
  EXPECT_THROW(r.validate(), ArgumentError);
  r.count = 1;
  r.timestamp = 0;
  EXPECT_THROW(r.validate(), ArgumentError);
  r.timestamp = kMaxTimestamp + 1;
  EXPECT_THROW(r.validate(), ArgumentError);
  r.timestamp = 1;
  r.type_id.clear();
  EXPECT_THROW(r.validate(), ArgumentError);
}

TEST(ApplicationRun, Validation) {
  ApplicationRun r;
  r.job_id = "j";
  r.start_ts = 100;
  r.end_ts = 200;
  r.nodes.insert(parse_node_id("c0-0c0s0n0"));
  EXPECT_NO_THROW(r.validate());
  r.end_ts = 50;
  EXPECT_THROW(r.validate(), ArgumentError);
  r.end_ts = 100 + kMaxRunSpanMs + 1;
  EXPECT_THROW(r.validate(), ArgumentError);
  r.end_ts = 200;
  r.nodes.clear();
  EXPECT_THROW(r.validate(), ArgumentError);
}

TEST(RunOverlap, ZeroLengthRunsOccupyOneMillisecond) {
  ApplicationRun r;
  r.start_ts = r.end_ts = 1000;
  EXPECT_TRUE(run_overlaps(r, TimeInterval(1000, 1001)));
  EXPECT_FALSE(run_overlaps(r, TimeInterval(1001, 2000)));
  EXPECT_FALSE(r.active_at(1000));
}

TEST(Timestamps, IsoRoundTrip) {
  const Timestamp ts = 1'767'225'600'123;
  EXPECT_EQ(format_timestamp(ts), "2026-01-01T00:00:00.123Z");
  EXPECT_EQ(parse_timestamp("2026-01-01T00:00:00.123Z"), ts);
  EXPECT_EQ(parse_timestamp("2026-01-01T01:00:00.123+01:00"), ts);
  EXPECT_EQ(parse_timestamp("2026-01-01T00:00:00Z"), ts - 123);
}

TEST(Timestamps, RejectsImpossibleDates) {
  EXPECT_THROW(parse_timestamp("2026-13-45T25:61:00.000Z"), ParseError);
  EXPECT_THROW(parse_timestamp("yesterday"), ParseError);
}

TEST(Enums, RoundTrip) {
  for (auto s : {ExitStatus::success, ExitStatus::failed, ExitStatus::aborted, ExitStatus::unknown}) {
    EXPECT_EQ(parse_exit_status(to_string(s)), s);
  }
  EXPECT_THROW(parse_exit_status("maybe"), ParseError);
  EXPECT_THROW(parse_category("weird"), ParseError);
  EXPECT_THROW(parse_severity("loud"), ParseError);
}
