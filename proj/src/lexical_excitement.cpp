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

#include "hlc/lexical_excitement.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "hlc/error.hpp"

namespace hlc {

namespace detail {
extern const std::string_view kDefaultLexiconSource;
}

namespace {

// Decodes one code point starting at s[i]; advances i. Invalid sequences
// yield U+FFFD and consume one byte.
char32_t next_code_point(std::string_view s, std::size_t& i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  auto cont = [&](std::size_t k) -> int {
    if (i + k >= s.size()) return -1;
    const auto b = static_cast<unsigned char>(s[i + k]);
    return (b & 0xC0) == 0x80 ? (b & 0x3F) : -1;
  };
  if (b0 < 0x80) {
    ++i;
    return b0;
  }
  int len = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    ++i;
    return 0xFFFD;
  }
  for (int k = 1; k < len; ++k) {
    const int c = cont(static_cast<std::size_t>(k));
    if (c < 0) {
      ++i;
      return 0xFFFD;
    }
    cp = (cp << 6) | static_cast<char32_t>(c);
  }
  i += static_cast<std::size_t>(len);
  return cp;
}

bool is_separator(char32_t cp) {
  if (cp < 0x80) {
    const char c = static_cast<char>(cp);
    const bool alnum = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
    return !alnum && c != '\x7f' && (c <= ' ' || (c >= '!' && c <= '~'));
  }
  if (cp == 0x85 || cp == 0xA0 || cp == 0x1680 || cp == 0x202F || cp == 0x205F || cp == 0x3000) return true;
  if (cp >= 0x2000 && cp <= 0x200A) return true;               // typographic spaces
  if (cp >= 0xA1 && cp <= 0xBF && cp != 0xAA && cp != 0xB5 && cp != 0xBA) return true;  // Latin-1 punctuation
  if (cp >= 0x2010 && cp <= 0x205E) return true;               // general punctuation
  if (cp >= 0x3001 && cp <= 0x3003) return true;
  return false;
}

char ascii_lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  std::size_t cp_index = 0;
  Token current;
  bool in_token = false;
  while (i < text.size()) {
    const std::size_t start = i;
    const char32_t cp = next_code_point(text, i);
    if (is_separator(cp)) {
      if (in_token) tokens.push_back(std::move(current));
      current = Token{};
      in_token = false;
    } else {
      if (!in_token) {
        current.offset = cp_index;
        in_token = true;
      }
      for (std::size_t k = start; k < i; ++k) current.text.push_back(ascii_lower(text[k]));
    }
    ++cp_index;
  }
  if (in_token) tokens.push_back(std::move(current));
  return tokens;
}

ExcitementLexicon::ExcitementLexicon(std::vector<LexiconEntry> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw Error(ErrorCode::EmptyLexicon, "", "lexicon has no entries");
  std::set<std::string> seen;
  for (const auto& e : entries_) {
    if (!(e.weight >= 0.0 && e.weight <= 1.0)) {
      throw Error(ErrorCode::WeightOutOfRange, e.expression, "weight must lie in [0, 1]");
    }
    if (e.tokens.empty()) throw Error(ErrorCode::MalformedRecord, e.expression, "empty expression");
    if (!seen.insert(e.expression).second) {
      throw Error(ErrorCode::DuplicateExpression, e.expression, "expression listed twice");
    }
  }
}

double ExcitementLexicon::weight_of(std::string_view expression) const {
  for (const auto& e : entries_) {
    if (e.expression == expression) return e.weight;
  }
  return -1.0;
}

ExcitementLexicon load_lexicon(std::string_view source) {
  std::vector<LexiconEntry> entries;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= source.size()) {
    const auto nl = source.find('\n', pos);
    std::string_view raw = source.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? source.size() + 1 : nl + 1;
    ++line_no;

    const std::string line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const std::string where = "line " + std::to_string(line_no);
    const auto comma = line.rfind(',');
    if (comma == std::string::npos) {
      throw Error(ErrorCode::MalformedRecord, where, "expected 'expression, weight'");
    }
    const std::string weight_str = trim(std::string_view(line).substr(comma + 1));
    double weight = 0.0;
    const auto [end, ec] = std::from_chars(weight_str.data(), weight_str.data() + weight_str.size(), weight);
    if (ec != std::errc{} || end != weight_str.data() + weight_str.size() || weight_str.empty()) {
      throw Error(ErrorCode::MalformedRecord, where, "unparseable weight '" + weight_str + "'");
    }

    LexiconEntry entry;
    for (auto& tok : tokenize(std::string_view(line).substr(0, comma))) entry.tokens.push_back(std::move(tok.text));
    if (entry.tokens.empty()) throw Error(ErrorCode::MalformedRecord, where, "empty expression");
    for (const auto& t : entry.tokens) {
      if (!entry.expression.empty()) entry.expression += ' ';
      entry.expression += t;
    }
    entry.weight = weight;
    if (!(weight >= 0.0 && weight <= 1.0)) {
      throw Error(ErrorCode::WeightOutOfRange, entry.expression, where + ": weight must lie in [0, 1]");
    }
    entries.push_back(std::move(entry));
  }
  return ExcitementLexicon(std::move(entries));
}

std::string_view default_lexicon_source() { return detail::kDefaultLexiconSource; }

const ExcitementLexicon& default_lexicon() {
  static const ExcitementLexicon lexicon = load_lexicon(detail::kDefaultLexiconSource);
  return lexicon;
}

LexicalScore score_text(std::string_view text, const ExcitementLexicon& lexicon) {
  LexicalScore result;
  const auto tokens = tokenize(text);
  for (const auto& entry : lexicon.entries()) {
    if (entry.weight <= 0.0) continue;
    const std::size_t m = entry.tokens.size();
    std::size_t i = 0;
    while (i + m <= tokens.size()) {
      bool hit = true;
      for (std::size_t k = 0; k < m; ++k) {
        if (tokens[i + k].text != entry.tokens[k]) {
          hit = false;
          break;
        }
      }
      if (hit) {
        result.matches.push_back({entry.expression, entry.weight, tokens[i].offset});
        i += m;
      } else {
        ++i;
      }
    }
  }
  std::stable_sort(result.matches.begin(), result.matches.end(),
                   [](const LexicalMatch& a, const LexicalMatch& b) { return a.offset < b.offset; });
  // Product of (1 - w), taken in text order.
  double keep = 1.0;
  for (const auto& m : result.matches) keep *= 1.0 - m.weight;
  result.score = result.matches.empty() ? 0.0 : std::clamp(1.0 - keep, 0.0, 1.0);
  return result;
}

}  // namespace hlc
