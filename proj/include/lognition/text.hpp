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

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace lognition {

/// Message normalization rules used before word counting.
struct TokenFilters {
  std::set<std::string> stopwords;
  /// Tokens kept even when they look numeric or hexadecimal.
  std::set<std::string> whitelist;
  bool drop_numbers = true;
  bool drop_hex = true;

  /// Small English stopword list; no whitelist.
  static TokenFilters defaults();
};

/// Lowercases, splits on non-alphanumeric boundaries, drops pure numbers and
/// hexadecimal literals (unless whitelisted) and stopwords.
///
/// A token counts as hexadecimal when it is `0x` followed by hex digits, or
/// when it is made only of hex digits and mixes decimal digits with a-f
/// letters (e.g. "7f3a", "ffff8803d1e7"). Plain words such as "bad" stay.
std::vector<std::string> tokenize(std::string_view message,
                                  const TokenFilters& filters = TokenFilters::defaults());

}  // namespace lognition
