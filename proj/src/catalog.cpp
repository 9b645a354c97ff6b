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

#include "lognition/catalog.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/regex.hpp>

namespace lognition {

// ---------------------------------------------------------------------------
// Timestamps

namespace {

// Days since 1970-01-01 for a proleptic Gregorian date (H. Hinnant).
constexpr std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

struct Civil {
  std::int64_t y;
  unsigned m, d;
};

constexpr Civil civil_from_days(std::int64_t z) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp < 10 ? mp + 3 : mp - 9;
  return {y + (m <= 2), m, d};
}

[[noreturn]] void bad_timestamp(std::string_view text) {
  throw ParseError("unparseable timestamp '" + std::string(text) + "'");
}

unsigned fixed_digits(std::string_view text, std::size_t pos, std::size_t n,
                      std::string_view whole) {
  if (pos + n > text.size()) bad_timestamp(whole);
  unsigned v = 0;
  for (std::size_t i = 0; i < n; ++i) {
    char c = text[pos + i];
    if (c < '0' || c > '9') bad_timestamp(whole);
    v = v * 10 + static_cast<unsigned>(c - '0');
  }
  return v;
}

Timestamp parse_iso8601(std::string_view s, int default_offset_minutes) {
  // YYYY-MM-DDTHH:MM:SS
  if (s.size() < 19 || s[4] != '-' || s[7] != '-' || (s[10] != 'T' && s[10] != ' ') ||
      s[13] != ':' || s[16] != ':') {
    bad_timestamp(s);
  }
  unsigned year = fixed_digits(s, 0, 4, s);
  unsigned month = fixed_digits(s, 5, 2, s);
  unsigned day = fixed_digits(s, 8, 2, s);
  unsigned hour = fixed_digits(s, 11, 2, s);
  unsigned minute = fixed_digits(s, 14, 2, s);
  unsigned second = fixed_digits(s, 17, 2, s);
  if (month < 1 || month > 12 || day < 1 || day > 31 || hour > 23 || minute > 59 || second > 60) {
    bad_timestamp(s);
  }
  std::size_t pos = 19;
  unsigned millis = 0;
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    std::size_t digits = 0;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
      if (digits < 3) millis = millis * 10 + static_cast<unsigned>(s[pos] - '0');
      ++digits;
      ++pos;
    }
    if (digits == 0) bad_timestamp(s);
    for (std::size_t i = digits; i < 3; ++i) millis *= 10;
  }
  int offset_minutes = default_offset_minutes;
  if (pos < s.size()) {
    if (s[pos] == 'Z') {
      offset_minutes = 0;
      ++pos;
    } else if (s[pos] == '+' || s[pos] == '-') {
      int sign = s[pos] == '+' ? 1 : -1;
      ++pos;
      unsigned oh = fixed_digits(s, pos, 2, s);
      pos += 2;
      if (pos < s.size() && s[pos] == ':') ++pos;
      unsigned om = fixed_digits(s, pos, 2, s);
      pos += 2;
      offset_minutes = sign * static_cast<int>(oh * 60 + om);
    }
  }
  if (pos != s.size()) bad_timestamp(s);
  std::int64_t days = days_from_civil(year, month, day);
  std::int64_t secs = days * 86400 + hour * 3600 + minute * 60 + second;
  return secs * 1000 + millis - std::int64_t{offset_minutes} * 60'000;
}

Timestamp parse_integer(std::string_view s) {
  Timestamp v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) bad_timestamp(s);
  return v;
}

}  // namespace

Timestamp parse_timestamp(std::string_view text, const TimestampFormat& format) {
  switch (format.kind) {
    case TimestampFormat::Kind::iso8601:
      return parse_iso8601(text, format.utc_offset_minutes);
    case TimestampFormat::Kind::epoch_ms:
      return parse_integer(text);
    case TimestampFormat::Kind::epoch_s:
      return parse_integer(text) * 1000;
  }
  bad_timestamp(text);
}

std::string format_timestamp(Timestamp ts) {
  std::int64_t days = align_down(ts, 86'400'000) / 86'400'000;
  std::int64_t rem = ts - days * 86'400'000;
  Civil c = civil_from_days(days);
  char buf[96];
  std::snprintf(buf, sizeof buf, "%04lld-%02u-%02uT%02lld:%02lld:%02lld.%03lldZ",
                static_cast<long long>(c.y), c.m, c.d, static_cast<long long>(rem / 3'600'000),
                static_cast<long long>(rem / 60'000 % 60), static_cast<long long>(rem / 1000 % 60),
                static_cast<long long>(rem % 1000));
  return buf;
}

std::string_view to_string(LogSource source) {
  switch (source) {
    case LogSource::console: return "console";
    case LogSource::application: return "application";
    case LogSource::network: return "network";
  }
  return "console";
}

LogSource parse_log_source(std::string_view text) {
  for (auto s : {LogSource::console, LogSource::application, LogSource::network}) {
    if (to_string(s) == text) return s;
  }
  throw ParseError("unknown log source '" + std::string(text) + "'");
}

// ---------------------------------------------------------------------------
// Catalog

struct PatternCatalog::Compiled {
  struct Pattern {
    std::size_t type_index;
    boost::regex regex;
    std::vector<std::string> names;
  };
  std::vector<Pattern> patterns;
};

namespace {

// Names of `(?<name>...)` / `(?P<name>...)` groups in pattern order.
std::vector<std::string> named_groups(const std::string& pattern) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i + 3 < pattern.size(); ++i) {
    if (pattern[i] != '(' || pattern[i + 1] != '?') continue;
    if (i > 0 && pattern[i - 1] == '\\') continue;
    std::size_t p = i + 2;
    if (pattern[p] == 'P') ++p;
    if (p >= pattern.size() || pattern[p] != '<') continue;
    ++p;
    std::size_t start = p;
    while (p < pattern.size() && (std::isalnum(static_cast<unsigned char>(pattern[p])) ||
                                  pattern[p] == '_')) {
      ++p;
    }
    if (p < pattern.size() && pattern[p] == '>' && p > start) {
      names.push_back(pattern.substr(start, p - start));
    }
  }
  return names;
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::set<std::string> split_words(std::string_view s) {
  std::set<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!cur.empty()) out.insert(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.insert(std::move(cur));
  return out;
}

std::string join_words(const std::set<std::string>& words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

TimestampFormat::Kind parse_format_kind(const std::string& v) {
  if (v == "iso8601") return TimestampFormat::Kind::iso8601;
  if (v == "epoch_ms") return TimestampFormat::Kind::epoch_ms;
  if (v == "epoch_s") return TimestampFormat::Kind::epoch_s;
  throw ParseError("unknown timestamp_format '" + v + "'");
}

std::string_view format_kind_name(TimestampFormat::Kind k) {
  switch (k) {
    case TimestampFormat::Kind::iso8601: return "iso8601";
    case TimestampFormat::Kind::epoch_ms: return "epoch_ms";
    case TimestampFormat::Kind::epoch_s: return "epoch_s";
  }
  return "iso8601";
}

}  // namespace

PatternCatalog::PatternCatalog(int version, std::vector<EventTypeDef> types,
                               std::map<LogSource, TimestampFormat> formats,
                               TokenFilters filters)
    : version_(version),
      types_(std::move(types)),
      formats_(std::move(formats)),
      filters_(std::move(filters)) {
  if (version_ < 1) throw ParseError("catalog version must be a positive integer");
  auto compiled = std::make_shared<Compiled>();
  std::set<std::string> ids;
  for (std::size_t t = 0; t < types_.size(); ++t) {
    const auto& def = types_[t];
    if (def.type_id.empty()) throw ParseError("catalog type with empty id");
    if (!ids.insert(def.type_id).second) {
      throw ParseError("duplicate catalog type id '" + def.type_id + "'");
    }
    if (def.patterns.empty()) throw ParseError("type '" + def.type_id + "' has no pattern");
    for (const auto& pattern : def.patterns) {
      Compiled::Pattern p{t, boost::regex(), named_groups(pattern)};
      try {
        p.regex.assign(pattern, boost::regex::perl);
      } catch (const boost::regex_error& e) {
        throw ParseError("type '" + def.type_id + "': pattern does not compile: " + e.what());
      }
      auto has = [&](const char* n) {
        return std::find(p.names.begin(), p.names.end(), n) != p.names.end();
      };
      if (!has("timestamp") || !has("location")) {
        throw ParseError("type '" + def.type_id +
                         "': every pattern must capture timestamp and location");
      }
      compiled->patterns.push_back(std::move(p));
    }
  }
  compiled_ = std::move(compiled);
}

PatternCatalog PatternCatalog::parse(std::string_view text) {
  std::optional<int> version;
  std::vector<EventTypeDef> types;
  std::map<LogSource, TimestampFormat> formats;
  TokenFilters filters = TokenFilters::defaults();

  enum class Section { none, source, filters, type } section = Section::none;
  LogSource current_source = LogSource::console;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  auto fail = [&](const std::string& why) -> ParseError {
    return ParseError("catalog line " + std::to_string(line_no) + ": " + why);
  };

  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw fail("unterminated section header");
      std::string header = trim(std::string_view(line).substr(1, line.size() - 2));
      auto space = header.find(' ');
      std::string kind = header.substr(0, space);
      std::string arg = space == std::string::npos ? "" : trim(header.substr(space + 1));
      if (kind == "source") {
        section = Section::source;
        current_source = parse_log_source(arg);
        formats[current_source];
      } else if (kind == "filters") {
        section = Section::filters;
      } else if (kind == "type") {
        if (arg.empty()) throw fail("type section needs an id");
        section = Section::type;
        types.push_back(EventTypeDef{arg, arg, EventCategory::other, {}, Severity::info});
      } else {
        throw fail("unknown section '" + kind + "'");
      }
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) throw fail("expected key = value");
    std::string key = trim(std::string_view(line).substr(0, eq));
    std::string value = trim(std::string_view(line).substr(eq + 1));
    try {
      switch (section) {
        case Section::none:
          if (key != "version") throw fail("unknown top-level key '" + key + "'");
          {
            int v = 0;
            auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
            if (ec != std::errc{} || p != value.data() + value.size()) {
              throw fail("version must be an integer");
            }
            version = v;
          }
          break;
        case Section::source:
          if (key == "timestamp_format") {
            formats[current_source].kind = parse_format_kind(value);
          } else if (key == "utc_offset_minutes") {
            formats[current_source].utc_offset_minutes = std::stoi(value);
          } else {
            throw fail("unknown source key '" + key + "'");
          }
          break;
        case Section::filters:
          if (key == "stopwords") {
            filters.stopwords = split_words(value);
          } else if (key == "whitelist") {
            filters.whitelist = split_words(value);
          } else if (key == "drop_numbers") {
            filters.drop_numbers = value == "true";
          } else if (key == "drop_hex") {
            filters.drop_hex = value == "true";
          } else {
            throw fail("unknown filters key '" + key + "'");
          }
          break;
        case Section::type: {
          auto& def = types.back();
          if (key == "display_name") {
            def.display_name = value;
          } else if (key == "category") {
            def.category = parse_category(value);
          } else if (key == "severity") {
            def.severity = parse_severity(value);
          } else if (key == "pattern") {
            def.patterns.push_back(value);
          } else {
            throw fail("unknown type key '" + key + "'");
          }
          break;
        }
      }
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      throw fail(e.what());
    }
  }
  if (!version) throw ParseError("catalog is missing its version");
  return PatternCatalog(*version, std::move(types), std::move(formats), std::move(filters));
}

PatternCatalog PatternCatalog::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read catalog " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

const PatternCatalog& PatternCatalog::builtin() {
  static const PatternCatalog catalog = parse(default_catalog_text());
  return catalog;
}

const EventTypeDef* PatternCatalog::find(std::string_view type_id) const {
  for (const auto& t : types_) {
    if (t.type_id == type_id) return &t;
  }
  return nullptr;
}

const TimestampFormat& PatternCatalog::timestamp_format(LogSource source) const {
  static const TimestampFormat kDefault{};
  auto it = formats_.find(source);
  return it == formats_.end() ? kDefault : it->second;
}

std::optional<PatternCatalog::Match> PatternCatalog::match(std::string_view line) const {
  boost::cmatch m;
  const char* first = line.data();
  const char* last = line.data() + line.size();
  for (const auto& p : compiled_->patterns) {
    if (!boost::regex_match(first, last, m, p.regex)) continue;
    Match out{p.type_index, {}};
    for (const auto& name : p.names) {
      const auto& sub = m[name];
      if (sub.matched) out.captures[name] = sub.str();
    }
    return out;
  }
  return std::nullopt;
}

std::string PatternCatalog::serialize() const {
  std::ostringstream out;
  out << "version = " << version_ << "\n";
  for (const auto& [source, fmt] : formats_) {
    out << "\n[source " << to_string(source) << "]\n"
        << "timestamp_format = " << format_kind_name(fmt.kind) << "\n"
        << "utc_offset_minutes = " << fmt.utc_offset_minutes << "\n";
  }
  out << "\n[filters]\n"
      << "stopwords = " << join_words(filters_.stopwords) << "\n"
      << "whitelist = " << join_words(filters_.whitelist) << "\n"
      << "drop_numbers = " << (filters_.drop_numbers ? "true" : "false") << "\n"
      << "drop_hex = " << (filters_.drop_hex ? "true" : "false") << "\n";
  for (const auto& t : types_) {
    out << "\n[type " << t.type_id << "]\n"
        << "display_name = " << t.display_name << "\n"
        << "category = " << to_string(t.category) << "\n"
        << "severity = " << to_string(t.severity) << "\n";
    for (const auto& p : t.patterns) out << "pattern = " << p << "\n";
  }
  return out.str();
}

}  // namespace lognition
