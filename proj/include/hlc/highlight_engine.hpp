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

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hlc/lexical_excitement.hpp"
#include "hlc/marker_stream.hpp"
#include "hlc/shot_boundary.hpp"
#include "hlc/time.hpp"

namespace hlc {

struct FusionWeights {
  double cheer = 0.61;
  double tone = 0.13;
  double text = 0.13;
  double action = 0.13;

  double sum() const { return cheer + tone + text + action; }
  // Throws ConfigInvalid on negative weights or a sum away from 1 by > 1e-9.
  void validate() const;
};

struct EngineConfig {
  Millis graphic_match_window{80000};
  Millis start_lead{5000};
  Millis end_search_window{5000};
  Millis action_window{15000};
  Millis tone_window{20000};
  FusionWeights weights;
  double cheer_positive_threshold = 0.0;
  double boundary_threshold = BoundaryConfig{}.distance_threshold;

  void validate() const;
};

struct CheerBout {
  StreamTime t_start{0};
  StreamTime t_end{0};
  double score = 0.0;
  friend bool operator==(const CheerBout&, const CheerBout&) = default;
};

struct SegmentProposal {
  CheerBout bout;
  StreamTime graphic_time{0};
  std::string graphic_text;
  StreamTime t_start{0};
  bool shared_graphic = false;
};

struct ComponentScores {
  double cheer = 0.0;
  double tone = 0.0;
  double text = 0.0;
  double action = 0.0;
  friend bool operator==(const ComponentScores&, const ComponentScores&) = default;
};

struct Highlight {
  std::string id;
  std::string channel;
  StreamTime t_start{0};
  StreamTime t_end{0};
  CheerBout bout;
  ComponentScores components;
  double fused_score = 0.0;
  std::optional<std::string> player;
  std::optional<int> hole;
  StreamTime graphic_time{0};
  bool shared_graphic = false;

  friend bool operator==(const Highlight&, const Highlight&) = default;
};

// "<channel>-<bout end ms>"; bout ends are unique within a channel.
std::string highlight_id(std::string_view channel, StreamTime bout_end);

// Maximal runs of back-to-back positive cheer windows. Bout score is the
// highest member score.
std::vector<CheerBout> merge_cheer_bouts(const ValidatedStream& stream, const EngineConfig& cfg);

// Pairs each bout with the latest graphic at or before its end and within the
// match window. Bouts without one are dropped.
std::vector<SegmentProposal> propose_segments(std::span<const CheerBout> bouts,
                                              std::span<const MarkerEvent* const> graphics,
                                              const EngineConfig& cfg);

// Earliest boundary in (bout end, bout end + search window]; the far edge of
// the window when there is none.
StreamTime resolve_end(const SegmentProposal& proposal, std::span<const StreamTime> boundaries,
                       const EngineConfig& cfg);

ComponentScores aggregate_components(const SegmentProposal& proposal, const ValidatedStream& stream,
                                     const ExcitementLexicon& lexicon, const EngineConfig& cfg);

double fuse(const ComponentScores& components, const FusionWeights& weights);

// Shot boundaries derived from the stream's frame-histogram events.
std::vector<StreamTime> stream_boundaries(const ValidatedStream& stream, const EngineConfig& cfg);

std::vector<Highlight> curate(const ValidatedStream& stream, const ExcitementLexicon& lexicon,
                              std::span<const std::string> roster, const EngineConfig& cfg = {});

// Fused score descending, then earlier start, then id.
bool highlight_order(const Highlight& a, const Highlight& b);

// --- TV graphic metadata -------------------------------------------------

struct GraphicMetadata {
  std::string player;
  int hole = 0;
};

// Throws NoHoleFound.
int parse_hole(std::string_view ocr_text);
// Throws NoPlayerMatch.
std::string match_player(std::string_view ocr_text, std::span<const std::string> roster);
// Both of the above; throws on either failure.
GraphicMetadata parse_graphic_text(std::string_view ocr_text, std::span<const std::string> roster);

// Levenshtein distance over bytes.
std::size_t edit_distance(std::string_view a, std::string_view b);

// --- JSON ------------------------------------------------------------------

std::string highlight_to_json(const Highlight& h);
Highlight highlight_from_json(std::string_view line);

// Reads a config document whose keys mirror EngineConfig; missing keys keep
// their defaults. Throws ConfigInvalid naming the offending key.
EngineConfig engine_config_from_json(std::string_view text);
std::string engine_config_to_json(const EngineConfig& cfg);

// One name per line; blank lines and '#' comments skipped.
std::vector<std::string> parse_roster(std::string_view text);

}  // namespace hlc
