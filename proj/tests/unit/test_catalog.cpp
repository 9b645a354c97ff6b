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

#include <fstream>
#include <sstream>

#include "lognition/catalog.hpp"
#include "lognition/error.hpp"

using namespace lognition;

namespace {

std::string read_file(const char* path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::string kPrefix = "2026-01-01T14:03:22.123Z c3-1c1s4n2 ";

}  // namespace

TEST(Catalog, BuiltinEqualsShippedFile) {
  EXPECT_EQ(default_catalog_text(), read_file(LOGNITION_DEFAULT_CATALOG_PATH));
  auto file = PatternCatalog::load(LOGNITION_DEFAULT_CATALOG_PATH);
  const auto& builtin = PatternCatalog::builtin();
  ASSERT_EQ(file.types().size(), builtin.types().size());
  for (std::size_t i = 0; i < file.types().size(); ++i) EXPECT_EQ(file.types()[i], builtin.types()[i]);
  EXPECT_EQ(file.filters().stopwords, builtin.filters().stopwords);
}

TEST(Catalog, BuiltinTypesInOrder) {
  std::vector<std::string> ids;
  for (const auto& t : PatternCatalog::builtin().types()) ids.push_back(t.type_id);
  std::vector<std::string> want{"MCE", "MEMERR", "GPUXID", "PANIC", "LustreError", "HSN"};
  EXPECT_EQ(ids, want);
}

TEST(Catalog, SerializeRoundTrip) {
  const auto& c = PatternCatalog::builtin();
  auto again = PatternCatalog::parse(c.serialize());
  EXPECT_EQ(again.version(), c.version());
  EXPECT_EQ(again.types(), c.types());
  EXPECT_EQ(again.filters().stopwords, c.filters().stopwords);
  EXPECT_EQ(again.serialize(), c.serialize());
}

TEST(Catalog, MatchesEachTypeAndCapturesFields) {
  const auto& c = PatternCatalog::builtin();
  struct Case {
    std::string body;
    std::string type;
    std::string capture;
    std::string value;
  };
  std::vector<Case> cases{
      {"kernel: [Hardware Error]: Machine Check Exception: bank 4 status 0xbe00000000800400", "MCE",
       "bank", "4"},
      {"kernel: EDAC MC0: 1 CE memory read error on DIMM_A1 (page 0x1f)", "MEMERR", "kind", "CE"},
      {"kernel: NVRM: Xid (PCI:0000:02:00): 79, GPU has fallen off the bus", "GPUXID", "xid", "79"},
      {"kernel: Kernel panic - not syncing: Fatal machine check", "PANIC", "message",
       "Kernel panic - not syncing: Fatal machine check"},
      {"LustreError: 11-0: OST00A7-osc-ffff88: operation ost_write failed", "LustreError", "target",
       "OST00A7"},
      {"HSN: LCB c0-0c0s1a0l12 lane degraded", "HSN", "condition", "lane degraded"},
  };
  for (const auto& k : cases) {
    auto m = c.match(kPrefix + k.body);
    ASSERT_TRUE(m) << k.body;
    EXPECT_EQ(c.types()[m->type_index].type_id, k.type);
    EXPECT_EQ(m->captures.at(k.capture), k.value);
    EXPECT_EQ(m->captures.at("location"), "c3-1c1s4n2");
  }
}

TEST(Catalog, FirstMatchWins) {
  // An MCE text that is also a kernel panic reason still types as PANIC:
  // the MCE pattern requires "Machine Check Exception", PANIC matches first
  // only when its own prefix is present.
  auto m = PatternCatalog::builtin().match(kPrefix + "kernel: Kernel panic - not syncing: Machine Check Exception: bank 1");
  ASSERT_TRUE(m);
  EXPECT_EQ(PatternCatalog::builtin().types()[m->type_index].type_id, "MCE");
}

TEST(Catalog, NoiseDoesNotMatch) {
  const auto& c = PatternCatalog::builtin();
  EXPECT_FALSE(c.match(kPrefix + "systemd[1]: Started Session 12 of user root."));
  EXPECT_FALSE(c.match(kPrefix + "kernel: Lustre: atlas2-MDT0000-mdc: Connection restored"));
  EXPECT_FALSE(c.match("garbage"));
  // Word boundary after the target: OST00A7_UUID is not a target.
  EXPECT_FALSE(c.match(kPrefix + "LustreError: OST00A7_UUID: rc = -110"));
}

TEST(Catalog, RejectsBadCatalogs) {
  EXPECT_THROW(PatternCatalog::parse("[type X]\npattern = (?<timestamp>\\S+)\n"), ParseError);
  EXPECT_THROW(PatternCatalog::parse("version = 1\n[type X]\npattern = (?<timestamp>\\S+)\n"),
               ParseError);
  EXPECT_THROW(PatternCatalog::parse("version = 1\n[type X]\npattern = (?<timestamp>\\S+) (?<location>\\S+\n"),
               ParseError);
  EXPECT_THROW(PatternCatalog::parse("version = 1\n[type X]\ndisplay_name = x\n"), ParseError);
  EXPECT_THROW(PatternCatalog::parse("version = 1\n[bogus]\n"), ParseError);
  std::string dup =
      "version = 1\n[type X]\npattern = (?<timestamp>\\S+) (?<location>\\S+)\n"
      "[type X]\npattern = (?<timestamp>\\S+) (?<location>\\S+)\n";
  EXPECT_THROW(PatternCatalog::parse(dup), ParseError);
  EXPECT_THROW(PatternCatalog::load("/nonexistent/catalog"), ParseError);
}

TEST(Catalog, SourceTimestampFormats) {
  auto c = PatternCatalog::parse(
      "version = 2\n[source network]\ntimestamp_format = epoch_s\n"
      "[type X]\npattern = (?<timestamp>\\S+) (?<location>\\S+)\n");
  EXPECT_EQ(c.version(), 2);
  EXPECT_EQ(c.timestamp_format(LogSource::network).kind, TimestampFormat::Kind::epoch_s);
  EXPECT_EQ(c.timestamp_format(LogSource::console).kind, TimestampFormat::Kind::iso8601);
  EXPECT_EQ(parse_timestamp("1767225600", {TimestampFormat::Kind::epoch_s, 0}), 1'767'225'600'000);
  EXPECT_EQ(parse_timestamp("1767225600123", {TimestampFormat::Kind::epoch_ms, 0}),
            1'767'225'600'123);
  EXPECT_EQ(parse_timestamp("2026-01-01T02:00:00", {TimestampFormat::Kind::iso8601, 120}),
            1'767'225'600'000);
}
