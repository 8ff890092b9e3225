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
#include <string>
#include <string_view>
#include <vector>

namespace hlc {

// A token of UTF-8 text together with its code-point offset in the source.
struct Token {
  std::string text;  // ASCII-lowercased
  std::size_t offset = 0;
};

// Splits on Unicode whitespace and punctuation. No stemming.
std::vector<Token> tokenize(std::string_view text);

struct LexiconEntry {
  std::string expression;           // normalized: lowercase, single spaces
  std::vector<std::string> tokens;  // expression split into words
  double weight = 0.0;
};

class ExcitementLexicon {
 public:
  // Throws DuplicateExpression, WeightOutOfRange or EmptyLexicon.
  explicit ExcitementLexicon(std::vector<LexiconEntry> entries);

  const std::vector<LexiconEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  // Weight of a normalized expression, or a negative value when absent.
  double weight_of(std::string_view expression) const;

 private:
  std::vector<LexiconEntry> entries_;
};

// Parses "expression, weight" lines; blank lines and '#' comments skipped.
ExcitementLexicon load_lexicon(std::string_view source);

// The shipped 60-entry stand-in dictionary.
const ExcitementLexicon& default_lexicon();
std::string_view default_lexicon_source();

struct LexicalMatch {
  std::string expression;
  double weight = 0.0;
  std::size_t offset = 0;  // code points into the scored text
};

struct LexicalScore {
  double score = 0.0;
  std::vector<LexicalMatch> matches;  // ordered by offset
};

// Noisy-OR over every non-overlapping occurrence of every entry. Entries of
// weight 0 never produce a match.
LexicalScore score_text(std::string_view text, const ExcitementLexicon& lexicon);

}  // namespace hlc
