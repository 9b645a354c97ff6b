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

#include <cmath>
#include <map>
#include <random>

#include "lognition/analytics.hpp"
#include "lognition/error.hpp"
#include "oracle.hpp"

using namespace lognition;

namespace {

constexpr Timestamp kT0 = 1'767'225'600'000;

EventRecord msg(std::string text, Timestamp ts = kT0, NodeLocation loc = {}, std::uint32_t count = 1) {
  EventRecord r;
  r.timestamp = ts;
  r.type_id = "MCE";
  r.location = loc;
  r.count = count;
  r.raw_message = std::move(text);
  return r;
}

std::vector<std::uint8_t> bits(unsigned value, unsigned n) {
  std::vector<std::uint8_t> v(n);
  for (unsigned i = 0; i < n; ++i) v[i] = (value >> i) & 1u;
  return v;
}

}  // namespace

TEST(Tokenize, NormalizesAndFilters) {
  auto t = tokenize("LustreError: OST00A7-osc: the operation ost_write failed rc = -110 at 0x7f3a ffff8803 bad");
  std::vector<std::string> want{"lustreerror", "ost00a7", "osc", "operation", "ost", "write",
                                "failed",      "rc",      "bad"};
  EXPECT_EQ(t, want);
}

TEST(Tokenize, WhitelistKeepsNumericTokens) {
  auto f = TokenFilters::defaults();
  f.whitelist = {"79", "7f3a"};
  EXPECT_EQ(tokenize("xid 79 at 7f3a", f), (std::vector<std::string>{"xid", "79", "7f3a"}));
  f.drop_numbers = false;
  EXPECT_EQ(tokenize("bank 4", f), (std::vector<std::string>{"bank", "4"}));
}

TEST(TransferEntropy, MatchesEntropyIdentityExhaustively) {
  for (int k : {1, 2}) {
    for (unsigned n = 0; n <= 8; ++n) {
      for (unsigned xv = 0; xv < (1u << n); ++xv) {
        auto x = bits(xv, n);
        for (unsigned yv = 0; yv < (1u << n); ++yv) {
          auto y = bits(yv, n);
          double got = transfer_entropy_bits(x, y, k);
          double want = oracle::te_entropy_identity(x, y, k);
          ASSERT_NEAR(got, want, 1e-12) << "k=" << k << " n=" << n << " x=" << xv << " y=" << yv;
          ASSERT_GE(got, 0.0);
        }
      }
    }
  }
}

TEST(TransferEntropy, CopyWithLagIsOneBit) {
  std::mt19937_64 rng(3);
  std::bernoulli_distribution coin(0.5);
  const std::size_t n = 20'000;
  std::vector<std::uint64_t> x(n), y(n);
  for (auto& v : y) v = coin(rng);
  x[0] = 0;
  for (std::size_t t = 1; t < n; ++t) x[t] = y[t - 1];
  auto r = transfer_entropy(x, y);
  EXPECT_NEAR(r.te_y_to_x, 1.0, 0.01);
  EXPECT_LE(r.te_x_to_y, 0.01);
  EXPECT_EQ(r.n_samples, n - 1);
}

TEST(TransferEntropy, IndependentSeriesNearZero) {
  std::mt19937_64 rng(4);
  std::bernoulli_distribution coin(0.3);
  std::vector<std::uint64_t> x(20'000), y(20'000);
  for (auto& v : x) v = coin(rng);
  for (auto& v : y) v = coin(rng);
  auto r = transfer_entropy(x, y, 0, 2);
  EXPECT_LE(r.te_y_to_x, 0.01);
  EXPECT_LE(r.te_x_to_y, 0.01);
}

TEST(TransferEntropy, ThresholdBinarizes) {
  std::vector<std::uint64_t> y{0, 5, 1, 7, 0, 9, 2, 6}, x(8, 0);
  for (std::size_t t = 1; t < 8; ++t) x[t] = y[t - 1] > 3 ? 10 : 0;
  auto r = transfer_entropy(x, y, 3);
  std::vector<std::uint8_t> bx, by;
  for (auto v : x) bx.push_back(v > 3);
  for (auto v : y) by.push_back(v > 3);
  EXPECT_DOUBLE_EQ(r.te_y_to_x, oracle::te_entropy_identity(bx, by, 1));
  EXPECT_EQ(r.threshold, 3u);
}

TEST(TransferEntropy, RejectsBadInput) {
  std::vector<std::uint64_t> a{1, 0, 1}, b{1, 0};
  EXPECT_THROW(transfer_entropy(a, b), ArgumentError);
  EXPECT_THROW(transfer_entropy(a, a, 0, 3), ArgumentError);
  EXPECT_THROW(transfer_entropy(b, b), InsufficientDataError);
  std::vector<std::uint8_t> s{1, 0};
  EXPECT_EQ(transfer_entropy_bits(s, s, 2), 0.0);
}

TEST(BinSeries, SumsCountsPerBin) {
  TimeInterval iv(kT0, kT0 + 2500);
  std::vector<EventRecord> r{msg("a", kT0, {}, 2), msg("b", kT0 + 999), msg("c", kT0 + 2400, {}, 3),
                             msg("d", kT0 + 2500), msg("e", kT0 - 1)};
  auto s = bin_series(r, iv, 1000);
  EXPECT_EQ(s.values, (std::vector<std::uint64_t>{3, 0, 3}));
  EXPECT_THROW(bin_series(r, iv, 0), ArgumentError);
}

TEST(TeWindows, RecoversPlantedCouplingWindow) {
  EventStore store;
  for (const char* t : {"A", "B"}) store.register_type({t, t, EventCategory::other, {}, Severity::info});
  std::mt19937_64 rng(5);
  std::bernoulli_distribution coin(0.5);
  const Timestamp bin = 60 * kSecondMs;
  // A is random for 6 hours; B copies A one bin later during hours 2-3 only.
  for (int i = 0; i < 360; ++i) {
    Timestamp ts = kT0 + i * bin;
    bool a = coin(rng);
    if (a) store.write_event({ts, "A", NodeLocation(0, 0, 0, 0, 0), 1, "a", {}});
    bool coupled = i >= 120 && i < 180;
    bool b = coupled ? false : coin(rng);
    if (b) store.write_event({ts + 5, "B", NodeLocation(0, 0, 0, 0, 1), 1, "b", {}});
    if (coupled && a) store.write_event({ts + bin + 5, "B", NodeLocation(0, 0, 0, 0, 1), 1, "b", {}});
  }
  TEWindowParams p;
  p.window_ms = kHourMs;
  p.step_ms = kHourMs / 2;
  p.bin_width_ms = bin;
  auto w = te_windows(store, Context(TimeInterval(kT0, kT0 + 6 * kHourMs)), "A", "B", p);
  ASSERT_EQ(w.size(), 11u);
  std::size_t best = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    EXPECT_EQ(w[i].window_start, kT0 + static_cast<Timestamp>(i) * p.step_ms);
    if (w[i].result.te_x_to_y > w[best].result.te_x_to_y) best = i;
  }
  EXPECT_EQ(w[best].window_start, kT0 + 2 * kHourMs);
  EXPECT_GT(w[best].result.te_x_to_y, 0.5);

  EXPECT_THROW(te_windows(store, Context(TimeInterval(kT0, kT0 + kHourMs)), "A", "Z", p), UnknownTypeError);
  p.window_ms = 2 * bin;
  EXPECT_THROW(te_windows(store, Context(TimeInterval(kT0, kT0 + kHourMs)), "A", "B", p), ArgumentError);
}

TEST(WordCount, RanksByCountThenTerm) {
  std::vector<EventRecord> r{msg("disk failed failed", kT0, {}, 2), msg("disk ok", kT0 + 1),
                             msg("zeta alpha", kT0 + 2)};
  auto s = word_count(r);
  EXPECT_EQ(s.documents, 3u);
  // One document per stored record, whatever its occurrence count.
  ASSERT_EQ(s.terms.size(), 5u);
  EXPECT_EQ(s.terms[0].term, "disk");
  EXPECT_EQ(s.terms[0].raw_count, 2u);
  EXPECT_EQ(s.terms[0].doc_frequency, 2u);
  EXPECT_EQ(s.terms[1].term, "failed");
  EXPECT_EQ(s.terms[1].doc_frequency, 1u);
  EXPECT_EQ(s.terms[2].term, "alpha");
  EXPECT_EQ(s.tokens, 7u);
}

TEST(TfIdf, MatchesDirectComputation) {
  std::vector<EventRecord> r{msg("node down node", kT0), msg("node up", kT0 + 1), msg("link down", kT0 + 2),
                             msg("link flap", kT0 + 3)};
  auto res = tf_idf(r);
  EXPECT_EQ(res.documents, 4u);
  std::map<std::string, double> want;
  // tf summed over documents, times ln(N / df).
  want["node"] = 3 * std::log(4.0 / 2);
  want["down"] = 2 * std::log(4.0 / 2);
  want["link"] = 2 * std::log(4.0 / 2);
  want["up"] = std::log(4.0);
  want["flap"] = std::log(4.0);
  ASSERT_EQ(res.terms.size(), want.size());
  for (const auto& t : res.terms) EXPECT_NEAR(t.score, want.at(t.term), 1e-12) << t.term;
  EXPECT_EQ(res.terms[0].term, "node");
}

TEST(TfIdf, TermInEveryDocumentScoresExactlyZero) {
  std::vector<EventRecord> r{msg("lustre alpha", kT0), msg("lustre beta lustre", kT0 + 1), msg("gamma lustre", kT0 + 2)};
  TfIdfOptions o;
  o.per_document = true;
  auto res = tf_idf(r, o);
  for (const auto& t : res.terms) {
    if (t.term == "lustre") {
      EXPECT_EQ(t.score, 0.0);
    }
  }
  for (const auto& d : res.per_document) {
    for (const auto& [term, score] : d.scores) {
      if (term == "lustre") {
        EXPECT_EQ(score, 0.0);
      }
    }
  }
  o.smoothed_idf = true;
  for (const auto& t : tf_idf(r, o).terms) {
    if (t.term == "lustre") {
      EXPECT_NEAR(t.score, 4 * std::log(2.0), 1e-12);
    }
  }
}

TEST(TfIdf, NodeHourDocuments) {
  NodeLocation a(0, 0, 0, 0, 0), b(0, 0, 0, 0, 1);
  std::vector<EventRecord> r{msg("x y", kT0, a), msg("x", kT0 + 10, a), msg("x", kT0, b),
                             msg("y", kT0 + kHourMs, a)};
  TfIdfOptions o;
  o.doc_unit = DocUnit::node_hour;
  EXPECT_EQ(tf_idf(r, o).documents, 3u);
  EXPECT_THROW(tf_idf(std::vector<EventRecord>{}), InsufficientDataError);
  EXPECT_EQ(parse_doc_unit(to_string(DocUnit::node_hour)), DocUnit::node_hour);
  EXPECT_THROW(parse_doc_unit("page"), ParseError);
}
