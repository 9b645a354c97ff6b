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

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lognition/json_io.hpp"
#include "lognition/model.hpp"

namespace lognition {

/// One node emits `factor` times the base rate of `type_id`.
struct HotNodeSpec {
  std::string type_id = "MCE";
  std::string location = "c1-0c2s3n1";
  double factor = 10.0;
};

/// Inside the window, each lag-wide bin fires a type_a event with
/// `driver_probability`; each such event is followed `lag_ms` later on the
/// same node by a type_b event with probability `strength`.
struct CouplingSpec {
  std::string type_a = "MEMERR";
  std::string type_b = "PANIC";
  Timestamp lag_ms = 60 * kSecondMs;
  double strength = 0.9;
  double driver_probability = 0.5;
  Timestamp offset_ms = 10 * kHourMs;
  Timestamp duration_ms = 2 * kHourMs;
};

/// `volume` messages of `type_id` naming `token`, spread over the window.
struct FloodSpec {
  std::string type_id = "LustreError";
  std::string token = "OST00A7";
  Timestamp offset_ms = 14 * kHourMs;
  Timestamp duration_ms = 10 * 60 * kSecondMs;
  std::uint64_t volume = 3000;
};

struct AppMixSpec {
  std::uint64_t runs = 150;
  unsigned min_nodes = 1;
  unsigned max_nodes = 32;
  Timestamp min_duration_ms = 10 * 60 * kSecondMs;
  Timestamp max_duration_ms = 4 * kHourMs;
  double failure_rate = 0.1;
  std::vector<std::string> users = {"alice", "bob", "carol", "dave"};
  std::vector<std::string> apps = {"lammps", "namd", "s3d", "xgc", "chimera"};
};

/// Synthetic corpus description. Offsets are relative to `start`.
struct SynthSpec {
  int version = 1;
  std::uint64_t seed = 42;
  Timestamp start = 1'767'225'600'000;  // 2026-01-01T00:00:00Z
  Timestamp duration_ms = 24 * kHourMs;
  /// Cabinet selectors ("c0-0"); every node inside is used.
  std::vector<std::string> cabinets = {"c0-0", "c1-0"};
  /// Events per node per hour.
  std::map<std::string, double> base_rates;
  std::optional<HotNodeSpec> hot_node;
  std::optional<CouplingSpec> coupling;
  std::optional<FloodSpec> flood;
  std::optional<AppMixSpec> app_mix;
  /// Share of all log lines that match no pattern.
  double unmatched_line_fraction = 0.0;
  /// Lines that match a pattern but carry an unusable location or timestamp.
  std::uint64_t malformed_lines = 0;

  /// Two cabinets, 24 h, six event types, one hot node, one coupling, one
  /// flood, 150 runs, 10% unmatched lines.
  static SynthSpec demo();
  /// Keys absent from `j` keep the demo values; phenomena set to null are
  /// disabled. Throws FieldError.
  static SynthSpec from_json(const Json& j);
  Json to_json() const;
  /// Throws ArgumentError: negative rates, strength or fractions outside
  /// [0, 1] (the unmatched fraction must stay below 1), windows outside the
  /// corpus, unknown types.
  void validate() const;
};

struct SynthFile {
  std::string name;
  std::vector<std::string> lines;
};

struct SynthCorpus {
  /// console.log, network.log and apps.jsonl, in that order.
  std::vector<SynthFile> files;
  std::vector<ApplicationRun> runs;
  /// Exact emitted counts and injected phenomena.
  Json ground_truth;
};

/// Deterministic for a fixed spec: equal specs give identical corpora.
SynthCorpus synth_corpus(const SynthSpec& spec);

/// Writes the corpus files plus ground_truth.json into `out_dir` (created if
/// needed). Returns the ground truth. Throws Error when the directory is not
/// writable.
Json synth_generate(const SynthSpec& spec, const std::filesystem::path& out_dir);

}  // namespace lognition
