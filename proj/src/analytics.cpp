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

#include "lognition/analytics.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <map>

#include "lognition/query.hpp"

namespace lognition {

// ---------------------------------------------------------------------------
// Tokenization

TokenFilters TokenFilters::defaults() {
  TokenFilters f;
  f.stopwords = {"a",    "an",   "and",  "are", "as",   "at",   "be",   "by",  "for",
                 "from", "has",  "in",   "is",  "it",   "not",  "of",   "on",  "or",
                 "that", "the",  "this", "to",  "was",  "were", "will", "with"};
  return f;
}

namespace {

bool is_number(std::string_view t) {
  return std::all_of(t.begin(), t.end(), [](unsigned char c) { return std::isdigit(c); });
}

bool is_hex_literal(std::string_view t) {
  auto hexdigit = [](unsigned char c) { return std::isxdigit(c) != 0; };
  if (t.size() > 2 && t[0] == '0' && t[1] == 'x') {
    return std::all_of(t.begin() + 2, t.end(), hexdigit);
  }
  if (!std::all_of(t.begin(), t.end(), hexdigit)) return false;
  bool digit = std::any_of(t.begin(), t.end(), [](unsigned char c) { return std::isdigit(c); });
  bool letter = std::any_of(t.begin(), t.end(), [](unsigned char c) { return std::isalpha(c); });
  return digit && letter;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view message, const TokenFilters& filters) {
  std::vector<std::string> out;
  std::string cur;
  auto emit = [&] {
    if (cur.empty()) return;
    bool keep = filters.whitelist.count(cur) > 0 ||
                (!(filters.drop_numbers && is_number(cur)) &&
                 !(filters.drop_hex && is_hex_literal(cur)) && filters.stopwords.count(cur) == 0);
    if (keep) out.push_back(cur);
    cur.clear();
  };
  for (unsigned char c : message) {
    if (std::isalnum(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else {
      emit();
    }
  }
  emit();
  return out;
}

// ---------------------------------------------------------------------------
// Series and transfer entropy

BinnedSeries bin_series(const std::vector<EventRecord>& records, const TimeInterval& interval,
                        Timestamp bin_width_ms) {
  if (bin_width_ms <= 0) throw ArgumentError("bin_width_ms must be positive");
  BinnedSeries s{interval, bin_width_ms, {}};
  s.values.assign(static_cast<std::size_t>((interval.length() + bin_width_ms - 1) / bin_width_ms), 0);
  for (const auto& r : records) {
    if (!interval.contains(r.timestamp)) continue;
    s.values[static_cast<std::size_t>((r.timestamp - interval.start()) / bin_width_ms)] += r.count;
  }
  return s;
}

double transfer_entropy_bits(std::span<const std::uint8_t> x, std::span<const std::uint8_t> y,
                             int k) {
  if (x.size() != y.size()) throw ArgumentError("series lengths differ");
  if (k != 1 && k != 2) throw ArgumentError("history length must be 1 or 2");
  const std::size_t n = x.size();
  if (n <= static_cast<std::size_t>(k)) return 0.0;

  // Joint counts indexed by (next, past, source) with past in [0, 2^k).
  const std::size_t states = std::size_t{1} << k;
  std::array<double, 2 * 4 * 2> nabc{};  // [next][past][src]
  for (std::size_t t = static_cast<std::size_t>(k) - 1; t + 1 < n; ++t) {
    std::size_t past = x[t];
    if (k == 2) past |= static_cast<std::size_t>(x[t - 1]) << 1;
    nabc[(x[t + 1] * 4 + past) * 2 + y[t]] += 1.0;
  }
  const double samples = static_cast<double>(n - static_cast<std::size_t>(k));

  double te = 0.0;
  for (std::size_t b = 0; b < states; ++b) {
    double nb = 0, nab[2] = {0, 0}, nbc[2] = {0, 0};
    for (int a = 0; a < 2; ++a) {
      for (int c = 0; c < 2; ++c) {
        double v = nabc[(a * 4 + b) * 2 + c];
        nb += v;
        nab[a] += v;
        nbc[c] += v;
      }
    }
    for (int a = 0; a < 2; ++a) {
      for (int c = 0; c < 2; ++c) {
        double v = nabc[(a * 4 + b) * 2 + c];
        if (v == 0) continue;
        te += v / samples * std::log2((v * nb) / (nbc[c] * nab[a]));
      }
    }
  }
  return te < 0 ? 0.0 : te;
}

TEResult transfer_entropy(const std::vector<std::uint64_t>& x, const std::vector<std::uint64_t>& y,
                          std::uint64_t threshold, int k) {
  if (x.size() != y.size()) throw ArgumentError("series lengths differ");
  if (k != 1 && k != 2) throw ArgumentError("history length must be 1 or 2");
  if (x.size() < 3) throw InsufficientDataError("transfer entropy needs at least 3 bins");
  std::vector<std::uint8_t> bx(x.size()), by(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    bx[i] = x[i] > threshold;
    by[i] = y[i] > threshold;
  }
  TEResult r;
  r.te_y_to_x = transfer_entropy_bits(bx, by, k);
  r.te_x_to_y = transfer_entropy_bits(by, bx, k);
  r.n_samples = x.size() - static_cast<std::size_t>(k);
  r.threshold = threshold;
  r.history_length = k;
  return r;
}

TEResult transfer_entropy(const BinnedSeries& x, const BinnedSeries& y, std::uint64_t threshold,
                          int k) {
  if (x.bin_width_ms != y.bin_width_ms) throw ArgumentError("series bin widths differ");
  return transfer_entropy(x.values, y.values, threshold, k);
}

std::vector<TEWindow> te_windows(const EventStore& store, const Context& ctx,
                                 const std::string& type_a, const std::string& type_b,
                                 const TEWindowParams& p) {
  if (p.window_ms <= 0 || p.step_ms <= 0 || p.bin_width_ms <= 0) {
    throw ArgumentError("window, step and bin width must be positive");
  }
  if (p.window_ms < 3 * p.bin_width_ms) throw ArgumentError("a window must span at least 3 bins");
  if (p.history != 1 && p.history != 2) throw ArgumentError("history length must be 1 or 2");
  for (const auto* t : {&type_a, &type_b}) {
    if (!store.has_type(*t)) throw UnknownTypeError(*t);
  }

  auto series_events = [&](const std::string& type) {
    if (!ctx.matches_type(type)) return std::vector<EventRecord>{};
    Context c = ctx;
    c.event_types = std::set<std::string>{type};
    return matching_events(store, c);
  };
  const auto ea = series_events(type_a);
  const auto eb = series_events(type_b);

  auto slice = [](const std::vector<EventRecord>& ev, Timestamp s, Timestamp e) {
    auto lo = std::lower_bound(ev.begin(), ev.end(), s,
                               [](const EventRecord& r, Timestamp t) { return r.timestamp < t; });
    auto hi = std::lower_bound(lo, ev.end(), e,
                               [](const EventRecord& r, Timestamp t) { return r.timestamp < t; });
    return std::vector<EventRecord>(lo, hi);
  };

  std::vector<TEWindow> out;
  for (Timestamp s = ctx.interval.start(); s + p.window_ms <= ctx.interval.end(); s += p.step_ms) {
    TimeInterval w(s, s + p.window_ms);
    auto xa = bin_series(slice(ea, w.start(), w.end()), w, p.bin_width_ms);
    auto yb = bin_series(slice(eb, w.start(), w.end()), w, p.bin_width_ms);
    TEWindow tw;
    tw.window_start = s;
    tw.result = transfer_entropy(xa, yb, p.threshold, p.history);
    auto constant = [&](const std::vector<std::uint64_t>& v) {
      bool first = v.front() > p.threshold;
      return std::all_of(v.begin(), v.end(), [&](std::uint64_t x) { return (x > p.threshold) == first; });
    };
    tw.low_support = constant(xa.values) || constant(yb.values);
    out.push_back(tw);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Word counts and TF-IDF

namespace {

void rank_by_count(std::vector<TermCount>& terms) {
  std::sort(terms.begin(), terms.end(), [](const TermCount& a, const TermCount& b) {
    if (a.raw_count != b.raw_count) return a.raw_count > b.raw_count;
    return a.term < b.term;
  });
}

}  // namespace

TermStats word_count(const std::vector<EventRecord>& events, const TokenFilters& filters) {
  std::map<std::string, TermCount> terms;
  TermStats stats;
  for (const auto& e : events) {
    ++stats.documents;
    auto tokens = tokenize(e.raw_message, filters);
    stats.tokens += tokens.size();
    std::sort(tokens.begin(), tokens.end());
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      auto& tc = terms[tokens[i]];
      ++tc.raw_count;
      if (i == 0 || tokens[i] != tokens[i - 1]) ++tc.doc_frequency;
    }
  }
  for (auto& [term, tc] : terms) {
    tc.term = term;
    stats.terms.push_back(std::move(tc));
  }
  rank_by_count(stats.terms);
  return stats;
}

TermStats word_count(const EventStore& store, const Context& ctx, const TokenFilters& filters) {
  return word_count(matching_events(store, ctx), filters);
}

std::string_view to_string(DocUnit unit) {
  return unit == DocUnit::message ? "message" : "node-hour";
}

DocUnit parse_doc_unit(std::string_view text) {
  if (text == "message") return DocUnit::message;
  if (text == "node-hour" || text == "node_hour") return DocUnit::node_hour;
  throw ParseError("unknown doc_unit '" + std::string(text) + "'");
}

TfIdfResult tf_idf(const std::vector<EventRecord>& events, const TfIdfOptions& options,
                   const TokenFilters& filters) {
  // Document id -> term -> tf. Map order keeps output deterministic.
  std::map<std::string, std::map<std::string, std::uint64_t>> docs;
  for (const auto& e : events) {
    std::string id;
    if (options.doc_unit == DocUnit::message) {
      id = std::to_string(e.timestamp) + "/" + e.type_id + "/" + format_node_id(e.location);
    } else {
      id = format_node_id(e.location) + "@" + std::to_string(hour_of(e.timestamp));
    }
    auto& tf = docs[id];
    for (auto& t : tokenize(e.raw_message, filters)) ++tf[t];
  }
  if (docs.empty()) throw InsufficientDataError("tf-idf needs at least one document");

  TfIdfResult result;
  result.documents = docs.size();
  std::map<std::string, TermCount> terms;
  for (const auto& [id, tf] : docs) {
    for (const auto& [t, n] : tf) {
      auto& tc = terms[t];
      tc.raw_count += n;
      ++tc.doc_frequency;
    }
  }
  const double n_docs = static_cast<double>(docs.size());
  std::map<std::string, double> idf;
  for (auto& [t, tc] : terms) {
    double ratio = n_docs / static_cast<double>(tc.doc_frequency);
    double v = options.smoothed_idf ? std::log1p(ratio) : std::log(ratio);
    idf[t] = v;
    tc.term = t;
    tc.score = static_cast<double>(tc.raw_count) * v;
  }
  if (options.per_document) {
    for (const auto& [id, tf] : docs) {
      DocumentScores ds{id, {}};
      for (const auto& [t, n] : tf) ds.scores.emplace_back(t, static_cast<double>(n) * idf[t]);
      result.per_document.push_back(std::move(ds));
    }
  }
  for (auto& [t, tc] : terms) result.terms.push_back(std::move(tc));
  std::sort(result.terms.begin(), result.terms.end(), [](const TermCount& a, const TermCount& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.term < b.term;
  });
  return result;
}

TfIdfResult tf_idf(const EventStore& store, const Context& ctx, const TfIdfOptions& options,
                   const TokenFilters& filters) {
  return tf_idf(matching_events(store, ctx), options, filters);
}

}  // namespace lognition
