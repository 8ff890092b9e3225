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

#include "hlc/evaluation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <functional>
#include <set>

#include <json.hpp>

#include "hlc/error.hpp"

namespace hlc {
namespace {

std::string normalize_name(std::string_view name) {
  std::string out;
  bool pending_space = false;
  for (char c : name) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isspace(u)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += static_cast<char>(std::tolower(u));
  }
  return out;
}

}  // namespace

double ndcg_gain(double relevance) { return std::exp2(relevance) - 1.0; }

double dcg_at(std::span<const double> relevances, std::size_t k) {
  double dcg = 0.0;
  const std::size_t n = std::min(k, relevances.size());
  for (std::size_t i = 0; i < n; ++i) dcg += ndcg_gain(relevances[i]) / std::log2(static_cast<double>(i) + 2.0);
  return dcg;
}

double ndcg(const RankedList& list, std::size_t k) {
  if (k < 1) throw Error(ErrorCode::InvariantViolation, "k", "k must be at least 1");
  std::set<std::string_view> ids;
  std::vector<double> rels;
  rels.reserve(list.size());
  for (const auto& item : list) {
    if (!(item.relevance >= 0.0) || !std::isfinite(item.relevance)) {
      throw Error(ErrorCode::NonNegativeRelRequired, item.id, "relevance must be finite and >= 0");
    }
    if (!ids.insert(item.id).second) throw Error(ErrorCode::InvariantViolation, item.id, "duplicate id in ranked list");
    rels.push_back(item.relevance);
  }
  const double dcg = dcg_at(rels, k);
  std::sort(rels.begin(), rels.end(), std::greater<>());
  const double ideal = dcg_at(rels, k);
  if (ideal == 0.0) return 1.0;
  return dcg / ideal;
}

ReferenceSet::ReferenceSet(std::span<const MatchKey> entries) {
  for (const auto& e : entries) entries_.push_back(normalize(e));
  std::sort(entries_.begin(), entries_.end());
  entries_.erase(std::unique(entries_.begin(), entries_.end()), entries_.end());
}

MatchKey ReferenceSet::normalize(const MatchKey& key) { return {normalize_name(key.player), key.hole}; }

bool ReferenceSet::contains(const MatchKey& key) const {
  return std::binary_search(entries_.begin(), entries_.end(), normalize(key));
}

MatchResult match_highlights(std::span<const std::optional<MatchKey>> produced, const ReferenceSet& reference,
                             std::size_t depth) {
  if (reference.empty()) throw Error(ErrorCode::EmptyReference, "reference", "reference set is empty");
  if (depth < 1) throw Error(ErrorCode::InvariantViolation, "depth", "depth must be at least 1");

  MatchResult r;
  r.depth = depth;
  r.considered = std::min(depth, produced.size());
  std::set<MatchKey> hit;
  for (std::size_t i = 0; i < r.considered; ++i) {
    if (!produced[i] || !reference.contains(*produced[i])) continue;
    ++r.matched_items;
    hit.insert(ReferenceSet::normalize(*produced[i]));
  }
  r.matched.assign(hit.begin(), hit.end());
  r.precision = r.considered == 0 ? 0.0 : static_cast<double>(r.matched_items) / static_cast<double>(r.considered);
  r.recall = static_cast<double>(hit.size()) / static_cast<double>(reference.size());
  return r;
}

std::optional<MatchKey> key_of(const Highlight& h) {
  if (!h.player || !h.hole) return std::nullopt;
  return MatchKey{*h.player, *h.hole};
}

MatchResult match_highlights(std::span<const Highlight> produced, const ReferenceSet& reference, std::size_t depth) {
  std::vector<std::optional<MatchKey>> keys;
  keys.reserve(produced.size());
  for (const auto& h : produced) keys.push_back(key_of(h));
  return match_highlights(keys, reference, depth);
}

ReferenceSet parse_reference(std::string_view jsonl) {
  std::vector<MatchKey> keys;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < jsonl.size()) {
    auto nl = jsonl.find('\n', pos);
    if (nl == std::string_view::npos) nl = jsonl.size();
    const std::string_view line = jsonl.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    const std::string where = "line " + std::to_string(line_no);
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error&) {
      throw Error(ErrorCode::MalformedRecord, where, "invalid JSON");
    }
    if (!obj.is_object() || !obj.contains("player") || !obj["player"].is_string() || !obj.contains("hole") ||
        !obj["hole"].is_number_integer()) {
      throw Error(ErrorCode::MalformedRecord, where, "expected {\"player\": string, \"hole\": integer}");
    }
    const auto hole = obj["hole"].get<std::int64_t>();
    if (hole < 1 || hole > 18) throw Error(ErrorCode::InvariantViolation, where, "hole must lie in 1..18");
    keys.push_back({obj["player"].get<std::string>(), static_cast<int>(hole)});
  }
  return ReferenceSet(keys);
}

std::string reference_line(const MatchKey& key) {
  nlohmann::ordered_json out;
  out["player"] = key.player;
  out["hole"] = key.hole;
  return out.dump();
}

}  // namespace hlc
