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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hlc/evaluation.hpp"
#include "hlc/highlight_engine.hpp"
#include "hlc/lexical_excitement.hpp"
#include "hlc/marker_stream.hpp"

namespace hlc {

// Synthetic broadcast generator. Planted shots are laid out so that each
// one's markers sit inside its own aggregation windows and nowhere else,
// which makes the expected highlight computable straight from the plan.

struct TimedScore {
  StreamTime t{0};
  double score = 0.0;
};

struct TimedPhrases {
  StreamTime t{0};
  std::vector<std::string> phrases;  // lexicon expressions, joined with "and"
};

struct PlantedShot {
  StreamTime graphic_time{0};
  std::string player;  // full roster name
  int hole = 1;
  int shot = 1;
  StreamTime cheer_start{0};
  std::vector<double> cheer_scores;  // one positive score per 6 s window
  std::vector<TimedScore> actions;   // 1 s frames
  std::vector<TimedScore> tones;     // 6 s windows
  std::vector<TimedPhrases> transcripts;
  std::optional<StreamTime> boundary;

  StreamTime cheer_end() const { return cheer_start + kAudioWindow * static_cast<std::int64_t>(cheer_scores.size()); }
};

struct NoiseSpec {
  double spurious_cheer_rate = 0.0;   // chance a background cheer window turns positive
  double ocr_corruption_rate = 0.0;   // per-letter substitution chance in graphics
};

struct ScenarioSpec {
  std::uint64_t seed = 0;
  std::string channel = "c1";
  std::optional<StreamTime> duration;  // derived from the plan when absent
  std::vector<PlantedShot> shots;
  int random_shots = 0;  // drawn from the seed, placed after explicit shots
  NoiseSpec noise;
  std::vector<std::string> roster;  // default golf roster when empty
  bool faces = false;               // emit face detections after each graphic
};

struct Scenario {
  ValidatedStream stream;
  std::vector<Highlight> truth;  // what curate yields under defaults, zero noise
  std::vector<std::string> roster;
  std::vector<PlantedShot> shots;  // explicit and drawn, in time order
};

const std::vector<std::string>& default_roster();

// "S. Garcia  Hole 13  Shot 2"
std::string render_graphic_text(std::string_view player, int hole, int shot);

// Throws SpecOutOfBounds when the plan breaks the layout rules.
Scenario generate_stream(const ScenarioSpec& spec, const ExcitementLexicon& lexicon = default_lexicon());

ScenarioSpec scenario_spec_from_json(std::string_view text);
std::string scenario_spec_to_json(const ScenarioSpec& spec);

// The single-shot fixture used throughout the tests and docs.
PlantedShot fixture_shot();

}  // namespace hlc
