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

#include <algorithm>
#include <array>
#include <cctype>
#include <optional>
#include <string>
#include <tuple>

#include "hlc/error.hpp"
#include "hlc/highlight_engine.hpp"

namespace hlc {
namespace {

constexpr int kFirstHole = 1;
constexpr int kLastHole = 18;
constexpr double kMaxNameDistance = 0.3;
constexpr std::size_t kMaxSpanTokens = 3;

// Words that appear in lower-third graphics but never in a player name.
constexpr std::array<std::string_view, 17> kGraphicKeywords = {
    "hole", "shot", "par", "yds", "yards", "yard", "round", "rd", "tee",
    "stroke", "strokes", "putt", "to", "for", "of", "the", "at"};

struct OcrToken {
  std::string norm;  // lowercase alphanumerics only
  bool integer = false;
};

std::vector<OcrToken> ocr_tokens(std::string_view text) {
  std::vector<OcrToken> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    const std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (start == i) break;
    OcrToken tok;
    for (char c : text.substr(start, i - start)) {
      const auto u = static_cast<unsigned char>(c);
      if (std::isalnum(u)) tok.norm.push_back(static_cast<char>(std::tolower(u)));
    }
    tok.integer = !tok.norm.empty() &&
                  std::all_of(tok.norm.begin(), tok.norm.end(), [](char c) { return c >= '0' && c <= '9'; });
    out.push_back(std::move(tok));
  }
  return out;
}

std::optional<int> hole_value(const OcrToken& tok) {
  if (!tok.integer || tok.norm.size() > 2) return std::nullopt;
  const int v = std::stoi(tok.norm);
  if (v < kFirstHole || v > kLastHole) return std::nullopt;
  return v;
}

bool is_keyword(std::string_view norm) {
  return std::find(kGraphicKeywords.begin(), kGraphicKeywords.end(), norm) != kGraphicKeywords.end();
}

std::string join(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

struct NameForm {
  std::string text;
  std::size_t words = 0;
};

// Full name, surname alone, and first initial + surname.
std::vector<NameForm> name_forms(std::string_view name) {
  std::vector<std::string> words;
  for (auto& t : ocr_tokens(name)) {
    if (!t.norm.empty()) words.push_back(std::move(t.norm));
  }
  std::vector<NameForm> forms;
  if (words.empty()) return forms;
  forms.push_back({join(words), words.size()});
  if (words.size() >= 2) {
    forms.push_back({words.back(), 1});
    forms.push_back({std::string(1, words.front()[0]) + " " + words.back(), 2});
  }
  return forms;
}

}  // namespace

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

int parse_hole(std::string_view ocr_text) {
  const auto tokens = ocr_tokens(ocr_text);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].norm != "hole") continue;
    for (std::size_t j = i + 1; j < tokens.size(); ++j) {
      if (auto v = hole_value(tokens[j])) return *v;
    }
  }
  for (const auto& t : tokens) {
    if (auto v = hole_value(t)) return *v;
  }
  throw Error(ErrorCode::NoHoleFound, "text", "no hole number in '" + std::string(ocr_text) + "'");
}

std::string match_player(std::string_view ocr_text, std::span<const std::string> roster) {
  if (roster.empty()) throw Error(ErrorCode::NoPlayerMatch, "roster", "roster is empty");

  // Contiguous runs of name-like tokens; numbers and graphic keywords break runs.
  std::vector<std::vector<std::string>> runs(1);
  for (auto& t : ocr_tokens(ocr_text)) {
    if (t.norm.empty() || t.integer || is_keyword(t.norm)) {
      if (!runs.back().empty()) runs.emplace_back();
      continue;
    }
    runs.back().push_back(std::move(t.norm));
  }

  // Rank: lower distance ratio, then more specific form, then roster order.
  using Rank = std::tuple<double, long, std::size_t>;
  std::optional<Rank> best;
  for (std::size_t r = 0; r < roster.size(); ++r) {
    for (const NameForm& form : name_forms(roster[r])) {
      for (const auto& run : runs) {
        for (std::size_t i = 0; i < run.size(); ++i) {
          std::vector<std::string> span;
          for (std::size_t len = 1; len <= kMaxSpanTokens && i + len <= run.size(); ++len) {
            span.push_back(run[i + len - 1]);
            const double ratio =
                static_cast<double>(edit_distance(join(span), form.text)) / static_cast<double>(form.text.size());
            if (ratio > kMaxNameDistance) continue;
            const Rank rank{ratio, -static_cast<long>(form.words), r};
            if (!best || rank < *best) best = rank;
          }
        }
      }
    }
  }
  if (!best) {
    throw Error(ErrorCode::NoPlayerMatch, "text", "no roster name in '" + std::string(ocr_text) + "'");
  }
  return roster[std::get<2>(*best)];
}

GraphicMetadata parse_graphic_text(std::string_view ocr_text, std::span<const std::string> roster) {
  GraphicMetadata m;
  m.player = match_player(ocr_text, roster);
  m.hole = parse_hole(ocr_text);
  return m;
}

}  // namespace hlc
