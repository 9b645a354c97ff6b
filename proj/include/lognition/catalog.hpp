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

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lognition/model.hpp"
#include "lognition/text.hpp"

namespace lognition {

enum class LogSource { console, application, network };

std::string_view to_string(LogSource source);
LogSource parse_log_source(std::string_view text);

struct TimestampFormat {
  enum class Kind { iso8601, epoch_ms, epoch_s };
  Kind kind = Kind::iso8601;
  /// Applied to ISO-8601 timestamps that carry no zone designator.
  int utc_offset_minutes = 0;

  bool operator==(const TimestampFormat&) const = default;
};

/// Parses a timestamp capture. ISO-8601 accepts "YYYY-MM-DDTHH:MM:SS" with
/// optional fraction (first three digits kept) and optional "Z" / "+HH:MM" /
/// "+HHMM" zone. Throws ParseError.
Timestamp parse_timestamp(std::string_view text, const TimestampFormat& format = {});
/// Renders `ts` as "YYYY-MM-DDTHH:MM:SS.mmmZ".
std::string format_timestamp(Timestamp ts);

/// Ordered event-type patterns plus per-source timestamp formats and token
/// filters. Immutable once built; copies share the compiled regexes and are
/// safe to use from many threads.
class PatternCatalog {
 public:
  struct Match {
    std::size_t type_index;
    std::map<std::string, std::string> captures;
  };

  /// Compiles every pattern. Throws ParseError when a pattern does not
  /// compile, misses a `timestamp` or `location` capture, when type ids
  /// repeat, or when a type has no pattern.
  PatternCatalog(int version, std::vector<EventTypeDef> types,
                 std::map<LogSource, TimestampFormat> formats = {},
                 TokenFilters filters = TokenFilters::defaults());

  /// Reads the catalog text format (see data/default.catalog).
  static PatternCatalog parse(std::string_view text);
  static PatternCatalog load(const std::filesystem::path& path);
  /// The catalog shipped in data/default.catalog, compiled in.
  static const PatternCatalog& builtin();

  int version() const noexcept { return version_; }
  const std::vector<EventTypeDef>& types() const noexcept { return types_; }
  const EventTypeDef* find(std::string_view type_id) const;
  const TokenFilters& filters() const noexcept { return filters_; }
  const TimestampFormat& timestamp_format(LogSource source) const;

  /// First pattern (catalog order) matching the whole line.
  std::optional<Match> match(std::string_view line) const;

  /// Canonical text form; parse(serialize()) reproduces the catalog.
  std::string serialize() const;

 private:
  struct Compiled;

  int version_;
  std::vector<EventTypeDef> types_;
  std::map<LogSource, TimestampFormat> formats_;
  TokenFilters filters_;
  std::shared_ptr<const Compiled> compiled_;
};

/// Text of data/default.catalog as compiled into the library.
std::string_view default_catalog_text();

}  // namespace lognition
