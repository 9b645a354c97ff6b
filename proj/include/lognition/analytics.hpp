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
#include <span>
#include <string>
#include <vector>

#include "lognition/model.hpp"
#include "lognition/store.hpp"
#include "lognition/text.hpp"

namespace lognition {

struct BinnedSeries {
  TimeInterval interval;
  Timestamp bin_width_ms = 0;
  /// ceil(length / bin_width) occurrence counts.
  std::vector<std::uint64_t> values;
};

/// Sums record counts per bin; records outside `interval` are ignored.
/// Throws ArgumentError when bin_width_ms <= 0.
BinnedSeries bin_series(const std::vector<EventRecord>& records, const TimeInterval& interval,
                        Timestamp bin_width_ms);

struct TEResult {
  double te_y_to_x = 0.0;
  double te_x_to_y = 0.0;
  std::size_t n_samples = 0;
  std::uint64_t threshold = 0;
  int history_length = 1;
};

/// Plug-in transfer entropy TE(Y->X) in bits over binary sequences, with
/// target history `k` (1 or 2) and source history 1:
///
///   sum over (x[t+1], x[t-k+1..t], y[t]) of p * log2(p(x' | x, y) / p(x' | x))
///
/// Values are 0 or 1. Results below zero by rounding are clamped to 0.
double transfer_entropy_bits(std::span<const std::uint8_t> x, std::span<const std::uint8_t> y,
                             int k = 1);

/// Binarizes both series (value > threshold) and returns TE in both
/// directions. Throws ArgumentError on length or bin-width mismatch or a
/// history other than 1 or 2, InsufficientDataError below 3 bins.
TEResult transfer_entropy(const BinnedSeries& x, const BinnedSeries& y,
                          std::uint64_t threshold = 0, int k = 1);
TEResult transfer_entropy(const std::vector<std::uint64_t>& x,
                          const std::vector<std::uint64_t>& y, std::uint64_t threshold = 0,
                          int k = 1);

struct TEWindowParams {
  Timestamp window_ms = kHourMs;
  Timestamp step_ms = kHourMs / 6;
  Timestamp bin_width_ms = 60 * kSecondMs;
  std::uint64_t threshold = 0;
  int history = 1;
};

struct TEWindow {
  Timestamp window_start = 0;
  /// x is the type_a series and y the type_b series, so te_x_to_y is
  /// TE(A->B).
  TEResult result;
  /// Set when either binarized series is constant within the window.
  bool low_support = false;
};

/// Sliding-window TE over the context interval. Windows start at
/// interval.start + i * step and are kept while they fit inside the interval.
/// Throws ArgumentError unless window, step and bin width are positive and a
/// window spans at least 3 bins; UnknownTypeError for unregistered types.
std::vector<TEWindow> te_windows(const EventStore& store, const Context& ctx,
                                 const std::string& type_a, const std::string& type_b,
                                 const TEWindowParams& params = {});

struct TermCount {
  std::string term;
  std::uint64_t raw_count = 0;
  std::uint64_t doc_frequency = 0;
  /// TF-IDF only: sum over documents of tf * idf.
  double score = 0.0;
};

struct TermStats {
  std::vector<TermCount> terms;
  std::uint64_t documents = 0;
  std::uint64_t tokens = 0;
};

/// Token counts over the raw messages of `events`, one document per stored
/// record. Ranked by count descending, then term ascending.
TermStats word_count(const std::vector<EventRecord>& events,
                     const TokenFilters& filters = TokenFilters::defaults());
TermStats word_count(const EventStore& store, const Context& ctx,
                     const TokenFilters& filters = TokenFilters::defaults());

enum class DocUnit { message, node_hour };
std::string_view to_string(DocUnit unit);
DocUnit parse_doc_unit(std::string_view text);

struct TfIdfOptions {
  DocUnit doc_unit = DocUnit::message;
  /// idf = ln(1 + N / df) instead of ln(N / df).
  bool smoothed_idf = false;
  /// Fill per-document scores.
  bool per_document = false;
};

struct DocumentScores {
  std::string doc_id;
  /// (term, tf * idf) in term order.
  std::vector<std::pair<std::string, double>> scores;
};

struct TfIdfResult {
  std::uint64_t documents = 0;
  /// Ranked by aggregate score descending, then term ascending.
  std::vector<TermCount> terms;
  std::vector<DocumentScores> per_document;
};

/// tf = raw count of the term in a document, idf = ln(N / df). A document is
/// one stored record's message, or all messages of one node within one hour.
/// Throws InsufficientDataError when there are no documents.
TfIdfResult tf_idf(const std::vector<EventRecord>& events, const TfIdfOptions& options = {},
                   const TokenFilters& filters = TokenFilters::defaults());
TfIdfResult tf_idf(const EventStore& store, const Context& ctx, const TfIdfOptions& options = {},
                   const TokenFilters& filters = TokenFilters::defaults());

}  // namespace lognition
