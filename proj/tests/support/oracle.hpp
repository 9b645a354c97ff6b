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
// Reference implementations used as test oracles. They share no code paths
// with the library beyond the plain data types and location parsing.

#include <array>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "lognition/model.hpp"

namespace lognition::oracle {

/// Keeps every row in one flat map and answers queries by scanning it all.
class ReferenceStore {
 public:
  /// Same merge rule as the real store is documented to follow: for one
  /// (timestamp, type, location) the larger count wins, ties keep the row
  /// already present.
  void write_event(const EventRecord& r);
  /// Later writes of a job id replace earlier ones.
  void write_application(const ApplicationRun& run);

  std::vector<EventRecord> all_events() const;
  std::vector<ApplicationRun> all_runs() const;

  std::vector<EventRecord> by_type(const std::string& type, Timestamp start, Timestamp end) const;
  std::vector<EventRecord> by_location(const LocationSelector& sel, Timestamp start,
                                       Timestamp end) const;

  bool run_matches(const ApplicationRun& run, const Context& ctx) const;
  /// Events passing every filter; user/app filters require an active
  /// matching run on the event's node. Sorted (timestamp, type, location).
  std::vector<EventRecord> events(const Context& ctx) const;
  /// Sorted (start_ts, job_id).
  std::vector<ApplicationRun> apps(const Context& ctx) const;

  std::vector<ApplicationRun> apps_overlapping(Timestamp start, Timestamp end) const;
  std::vector<ApplicationRun> apps_of_user(const std::string& user) const;
  std::vector<ApplicationRun> apps_named(const std::string& name) const;
  std::vector<ApplicationRun> apps_at_location(const LocationSelector& sel, Timestamp start,
                                               Timestamp end) const;
  std::vector<ApplicationRun> placements(Timestamp ts) const;

  std::map<NodeLocation, std::uint64_t> heatmap(const Context& ctx, const std::string& type) const;
  /// Count per bin start; bins tile [start, end) from the interval start.
  std::vector<std::uint64_t> histogram(const Context& ctx, Timestamp width) const;
  /// Cabinet, blade or node keys (as cname prefixes) to summed counts.
  std::map<std::string, std::uint64_t> distribution(const Context& ctx,
                                                    const std::string& level) const;

 private:
  using Key = std::tuple<Timestamp, std::string, NodeLocation>;
  std::map<Key, EventRecord> rows_;
  std::map<std::string, ApplicationRun> runs_;
};

struct CorpusShape {
  std::size_t events = 1000;
  std::size_t runs = 50;
  /// Number of hours covered, starting at `start`.
  int hours = 6;
  Timestamp start = 1'767'225'600'000;
  /// Cabinets (row 0, cols 0..n-1) events and runs are placed in.
  unsigned cabinets = 2;
  std::vector<std::string> types = {"MCE", "MEMERR", "PANIC", "HSN"};
  std::vector<std::string> users = {"u1", "u2", "u3"};
  std::vector<std::string> apps = {"a1", "a2", "a3", "a4"};
  /// Fraction of events that reuse an earlier (timestamp, type, location).
  double duplicate_fraction = 0.1;
};

struct Corpus {
  std::vector<EventRecord> events;
  std::vector<ApplicationRun> runs;
};

Corpus random_corpus(std::uint64_t seed, const CorpusShape& shape = {});

/// Random context over the corpus shape: interval, and each of types,
/// locations, users and apps present with probability 1/2.
Context random_context(std::mt19937_64& rng, const CorpusShape& shape);

/// TE(Y->X) in bits from the entropy identity
///   H(X', Xk) - H(Xk) - H(X', Xk, Y) + H(Xk, Y)
/// evaluated with long double sums. Same sample range as the library:
/// t = k-1 .. n-2.
double te_entropy_identity(const std::vector<std::uint8_t>& x, const std::vector<std::uint8_t>& y,
                           int k);

/// Joint (next, past, source) counts the identity is evaluated on, indexed
/// (next * 4 + past) * 2 + source. Every marginal derives from this table.
using TeCounts = std::array<std::uint32_t, 16>;
TeCounts te_counts(const std::vector<std::uint8_t>& x, const std::vector<std::uint8_t>& y, int k);
double te_from_counts(const TeCounts& f_all);

}  // namespace lognition::oracle
