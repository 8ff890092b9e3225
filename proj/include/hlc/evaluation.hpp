/*
 * Copyright 2026 The Highlight Curator Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hlc/highlight_engine.hpp"

namespace hlc {

struct RankedItem {
  std::string id;
  double relevance = 0.0;
};

// Items in ranked order; ids must be unique.
using RankedList = std::vector<RankedItem>;

// Gain of a relevance grade: 2^rel - 1.
double ndcg_gain(double relevance);
// Sum over the first k positions of gain / log2(position + 1).
double dcg_at(std::span<const double> relevances, std::size_t k);

// DCG@k over the ideal (descending) ordering of the same relevances. An
// all-zero list scores 1. Throws NonNegativeRelRequired.
double ndcg(const RankedList& list, std::size_t k);

struct MatchKey {
  std::string player;
  int hole = 0;
  friend auto operator<=>(const MatchKey&, const MatchKey&) = default;
};

// Reference entries, deduplicated. Player names compare case-insensitively
// with whitespace collapsed; shot numbers are not part of the key.
class ReferenceSet {
 public:
  ReferenceSet() = default;
  explicit ReferenceSet(std::span<const MatchKey> entries);

  bool contains(const MatchKey& key) const;
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::vector<MatchKey>& entries() const { return entries_; }

  static MatchKey normalize(const MatchKey& key);

 private:
  std::vector<MatchKey> entries_;  // normalized, sorted, unique
};

struct MatchResult {
  std::size_t depth = 0;
  std::size_t considered = 0;     // min(depth, produced)
  std::size_t matched_items = 0;  // produced items in the top `depth` that match
  double precision = 0.0;
  double recall = 0.0;
  std::vector<MatchKey> matched;  // distinct matched reference entries
};

// Produced items lacking player or hole never match. Throws EmptyReference.
MatchResult match_highlights(std::span<const std::optional<MatchKey>> produced, const ReferenceSet& reference,
                             std::size_t depth);
MatchResult match_highlights(std::span<const Highlight> produced, const ReferenceSet& reference, std::size_t depth);

std::optional<MatchKey> key_of(const Highlight& h);

// {"player": ..., "hole": ...} per line.
ReferenceSet parse_reference(std::string_view jsonl);
std::string reference_line(const MatchKey& key);

}  // namespace hlc
