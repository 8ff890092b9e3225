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

#include "hlc/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include <json.hpp>

#include "hlc/error.hpp"

namespace hlc {
namespace {

using json = nlohmann::json;

constexpr StreamTime kSlotLength{204000};     // 34 audio windows per random shot
constexpr StreamTime kGraphicOnScreen{8000};
constexpr StreamTime kTranscriptSpan{3000};
constexpr StreamTime kFramesBefore{2000};     // histogram frames around each bout end
constexpr StreamTime kFramesAfter{6000};
constexpr StreamTime kFaceSpan{30000};
constexpr int kFaceDim = 16;
constexpr FrameDims kBroadcastFrame{1280, 720};

// Fixed-formula draws on top of mt19937_64 so that output bytes do not depend
// on the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::int64_t range(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(gen_() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  bool chance(double p) { return uniform() < p; }
  double normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 gen_;
};

[[noreturn]] void out_of_bounds(const std::string& field, const std::string& message) {
  throw Error(ErrorCode::SpecOutOfBounds, field, message);
}

StreamTime round_up_to_window(StreamTime t) {
  const auto w = kAudioWindow.count();
  return StreamTime{(t.count() + w - 1) / w * w};
}

// Envelope of every marker a shot plants.
StreamTime footprint_start(const PlantedShot& s, const EngineConfig& cfg) {
  return std::min(s.graphic_time, s.cheer_start - cfg.tone_window / 2);
}
StreamTime footprint_end(const PlantedShot& s, const EngineConfig& cfg) {
  return std::max({s.cheer_end() + cfg.tone_window / 2, s.cheer_end() + kFramesAfter, s.graphic_time + kGraphicOnScreen,
                   s.graphic_time + kFaceSpan});
}

std::string render_phrases(const std::vector<std::string>& phrases) {
  std::string out;
  for (const auto& p : phrases) {
    if (!out.empty()) out += " and ";
    out += p;
  }
  return out;
}

void check_shot(const PlantedShot& s, std::size_t index, const ExcitementLexicon& lexicon, const EngineConfig& cfg,
                const std::vector<std::string>& roster) {
  const std::string at = "shots[" + std::to_string(index) + "].";
  if (s.graphic_time.count() < 0) out_of_bounds(at + "graphic_time", "must be non-negative");
  if (s.cheer_scores.empty()) out_of_bounds(at + "cheer_scores", "a shot needs at least one cheer window");
  for (double c : s.cheer_scores) {
    if (!(c > 0.0 && c <= 1.0)) out_of_bounds(at + "cheer_scores", "planted cheer scores must lie in (0, 1]");
  }
  if (s.cheer_end() < s.graphic_time || s.cheer_end() - s.graphic_time > cfg.graphic_match_window) {
    out_of_bounds(at + "cheer_start", "bout must end within the graphic match window after the graphic");
  }
  if (std::find(roster.begin(), roster.end(), s.player) == roster.end()) {
    out_of_bounds(at + "player", "player '" + s.player + "' is not on the roster");
  }
  if (s.hole < 1 || s.hole > 18) out_of_bounds(at + "hole", "hole must lie in 1..18");
  if (s.boundary && (*s.boundary <= s.cheer_end() || *s.boundary > s.cheer_end() + cfg.end_search_window)) {
    out_of_bounds(at + "boundary", "boundary must fall in the end search window");
  }
  const StreamTime action_lo = s.cheer_start - cfg.action_window / 2;
  const StreamTime action_hi = s.cheer_end() + cfg.action_window / 2;
  for (const auto& a : s.actions) {
    if (a.t < action_lo || a.t + kFrameInterval > action_hi || a.t.count() < 0) {
      out_of_bounds(at + "actions", "action frames must sit inside the action window");
    }
    if (!(a.score >= 0.0 && a.score <= 1.0)) out_of_bounds(at + "actions", "action scores lie in [0, 1]");
  }
  const StreamTime tone_lo = s.cheer_start - cfg.tone_window / 2;
  const StreamTime tone_hi = s.cheer_end() + cfg.tone_window / 2;
  for (const auto& t : s.tones) {
    if (t.t < tone_lo || t.t + kAudioWindow > tone_hi || t.t.count() < 0) {
      out_of_bounds(at + "tones", "tone windows must sit inside the tone window");
    }
    if (!(t.score >= -1.0 && t.score <= 1.0)) out_of_bounds(at + "tones", "tone scores lie in [-1, 1]");
  }
  for (const auto& tr : s.transcripts) {
    if (tr.t < tone_lo || tr.t + kTranscriptSpan > tone_hi || tr.t.count() < 0) {
      out_of_bounds(at + "transcripts", "transcripts must sit inside the tone window");
    }
    for (const auto& p : tr.phrases) {
      if (lexicon.weight_of(p) < 0.0) out_of_bounds(at + "transcripts", "phrase '" + p + "' is not in the lexicon");
    }
  }
}

PlantedShot draw_shot(Rng& rng, StreamTime base, const std::vector<std::string>& roster,
                      const ExcitementLexicon& lexicon) {
  PlantedShot s;
  s.graphic_time = base + StreamTime{rng.range(10000, 30000)};
  s.player = roster[static_cast<std::size_t>(rng.range(0, static_cast<std::int64_t>(roster.size()) - 1))];
  s.hole = static_cast<int>(rng.range(1, 18));
  s.shot = static_cast<int>(rng.range(1, 5));

  const std::int64_t windows = rng.range(1, 3);
  const std::int64_t w = kAudioWindow.count();
  const std::int64_t g = s.graphic_time.count();
  const std::int64_t first = (g + w - 1) / w;
  const std::int64_t last = (g + 80000 - windows * w) / w;
  s.cheer_start = StreamTime{rng.range(first, last) * w};
  for (std::int64_t i = 0; i < windows; ++i) s.cheer_scores.push_back(rng.uniform(0.05, 1.0));

  const StreamTime bs = s.cheer_start;
  const StreamTime be = s.cheer_end();
  if (rng.chance(0.7)) s.boundary = be + StreamTime{rng.range(1, 5000)};

  for (std::int64_t i = rng.range(0, 3); i > 0; --i) {
    s.actions.push_back({StreamTime{rng.range((bs - StreamTime{7500}).count(), (be + StreamTime{6500}).count())},
                         rng.uniform()});
  }
  for (std::int64_t i = rng.range(0, 2); i > 0; --i) {
    s.tones.push_back({StreamTime{rng.range((bs - StreamTime{10000}).count(), (be + StreamTime{4000}).count())},
                       rng.uniform(-1.0, 1.0)});
  }
  const auto& entries = lexicon.entries();
  for (std::int64_t i = rng.range(0, 2); i > 0; --i) {
    TimedPhrases tp;
    tp.t = StreamTime{rng.range((bs - StreamTime{10000}).count(), (be + StreamTime{7000}).count())};
    for (std::int64_t k = rng.range(1, 2); k > 0; --k) {
      tp.phrases.push_back(entries[static_cast<std::size_t>(rng.range(0, static_cast<std::int64_t>(entries.size()) - 1))].expression);
    }
    s.transcripts.push_back(std::move(tp));
  }
  return s;
}

std::string corrupt(std::string text, double rate, Rng& rng) {
  if (rate <= 0.0) return text;
  for (char& c : text) {
    if (!std::isalpha(static_cast<unsigned char>(c)) || !rng.chance(rate)) continue;
    switch (std::tolower(static_cast<unsigned char>(c))) {
      case 'a': c = '4'; break;
      case 'e': c = '3'; break;
      case 'i': c = '1'; break;
      case 'o': c = '0'; break;
      case 's': c = '5'; break;
      default: c = static_cast<char>('A' + rng.range(0, 25));
    }
  }
  return text;
}

// Solid-color scene with a little mass spilled into one random bin.
Histogram scene_frame(const std::array<std::size_t, 3>& scene, Rng& rng) {
  std::array<std::vector<double>, Histogram::kChannels> bins;
  for (std::size_t c = 0; c < Histogram::kChannels; ++c) {
    bins[c].assign(Histogram::kDefaultBins, 0.0);
    bins[c][scene[c]] += 0.97;
    bins[c][static_cast<std::size_t>(rng.range(0, Histogram::kDefaultBins - 1))] += 0.03;
  }
  return Histogram(std::move(bins));
}

std::array<std::size_t, 3> draw_scene(Rng& rng) {
  return {static_cast<std::size_t>(rng.range(0, 63)), static_cast<std::size_t>(rng.range(0, 63)),
          static_cast<std::size_t>(rng.range(0, 63))};
}

std::array<std::size_t, 3> other_scene(const std::array<std::size_t, 3>& scene, Rng& rng) {
  std::array<std::size_t, 3> out;
  for (std::size_t c = 0; c < 3; ++c) out[c] = (scene[c] + static_cast<std::size_t>(rng.range(8, 56))) % 64;
  return out;
}

std::vector<double> identity_vector(std::size_t player_index) {
  Rng rng(0x5eed0000ULL + player_index);
  std::vector<double> v(kFaceDim);
  for (double& x : v) x = rng.normal();
  return v;
}

MarkerEvent make_event(const std::string& channel, EventKind kind, StreamTime t0, StreamTime t1, EventPayload payload) {
  return MarkerEvent{channel, kind, t0, t1, std::move(payload)};
}

}  // namespace

const std::vector<std::string>& default_roster() {
  static const std::vector<std::string> roster = {
      "Sergio Garcia", "Daniel Berger",   "Jordan Spieth",    "Justin Rose",    "Rickie Fowler",
      "Hideki Matsuyama", "Charl Schwartzel", "Matt Kuchar",  "Adam Scott",     "Thomas Pieters",
      "Rory McIlroy",  "Dustin Johnson",  "Phil Mickelson",   "Bubba Watson",   "Paul Casey",
      "Jon Rahm",      "Lee Westwood",    "Ryan Moore",       "Kevin Chappell", "Brooks Koepka"};
  return roster;
}

std::string render_graphic_text(std::string_view player, int hole, int shot) {
  const auto space = player.find(' ');
  std::string name = space == std::string_view::npos
                         ? std::string(player)
                         : std::string(1, player.front()) + "." + std::string(player.substr(space));
  return name + "  Hole " + std::to_string(hole) + "  Shot " + std::to_string(shot);
}

PlantedShot fixture_shot() {
  PlantedShot s;
  s.graphic_time = StreamTime{40000};
  s.player = "Sergio Garcia";
  s.hole = 13;
  s.shot = 2;
  s.cheer_start = StreamTime{96000};
  s.cheer_scores = {0.8};
  s.actions = {{StreamTime{101000}, 0.9}};
  s.tones = {{StreamTime{104000}, 0.6}};
  s.transcripts = {{StreamTime{100000}, {"great shot"}}};
  s.boundary = StreamTime{104500};
  return s;
}

Scenario generate_stream(const ScenarioSpec& spec, const ExcitementLexicon& lexicon) {
  const EngineConfig cfg;
  Rng rng(spec.seed);
  Scenario out;
  out.roster = spec.roster.empty() ? default_roster() : spec.roster;

  if (spec.random_shots < 0) out_of_bounds("random_shots", "must be non-negative");
  for (double p : {spec.noise.spurious_cheer_rate, spec.noise.ocr_corruption_rate}) {
    if (!(p >= 0.0 && p <= 1.0)) out_of_bounds("noise", "rates must lie in [0, 1]");
  }

  out.shots = spec.shots;
  std::sort(out.shots.begin(), out.shots.end(),
            [](const PlantedShot& a, const PlantedShot& b) { return a.graphic_time < b.graphic_time; });
  for (std::size_t i = 0; i < out.shots.size(); ++i) check_shot(out.shots[i], i, lexicon, cfg, out.roster);

  StreamTime cursor{0};
  if (!out.shots.empty()) cursor = round_up_to_window(footprint_end(out.shots.back(), cfg) + StreamTime{30000});
  for (int i = 0; i < spec.random_shots; ++i) {
    out.shots.push_back(draw_shot(rng, cursor, out.roster, lexicon));
    cursor += kSlotLength;
  }
  for (std::size_t i = 1; i < out.shots.size(); ++i) {
    if (footprint_start(out.shots[i], cfg) <= footprint_end(out.shots[i - 1], cfg)) {
      out_of_bounds("shots[" + std::to_string(i) + "]", "shot overlaps the previous shot's windows");
    }
  }

  const StreamTime required = round_up_to_window(std::max(cursor, out.shots.empty()
                                                                      ? StreamTime{0}
                                                                      : footprint_end(out.shots.back(), cfg)));
  const StreamTime duration = spec.duration.value_or(required);
  if (duration < required) out_of_bounds("duration_ms", "planted markers extend past the stream duration");

  const std::string& ch = spec.channel;
  std::vector<MarkerEvent> events;

  // Cheer track: back-to-back negative windows, planted bouts overwrite.
  std::vector<std::pair<StreamTime, StreamTime>> bout_spans;
  for (const auto& s : out.shots) bout_spans.emplace_back(s.cheer_start, s.cheer_end());
  for (StreamTime t{0}; t + kAudioWindow <= duration; t += kAudioWindow) {
    const bool overlaps = std::any_of(bout_spans.begin(), bout_spans.end(), [&](const auto& span) {
      return t < span.second && span.first < t + kAudioWindow;
    });
    if (overlaps) continue;
    double score = rng.uniform(-1.0, -0.05);
    if (spec.noise.spurious_cheer_rate > 0.0 && rng.chance(spec.noise.spurious_cheer_rate)) {
      score = rng.uniform(0.05, 1.0);
    }
    events.push_back(make_event(ch, EventKind::CheerScore, t, t + kAudioWindow, AudioScore{score}));
  }

  std::array<std::size_t, 3> scene = draw_scene(rng);
  for (std::size_t i = 0; i < out.shots.size(); ++i) {
    const PlantedShot& s = out.shots[i];
    for (std::size_t k = 0; k < s.cheer_scores.size(); ++k) {
      const StreamTime t = s.cheer_start + kAudioWindow * static_cast<std::int64_t>(k);
      events.push_back(make_event(ch, EventKind::CheerScore, t, t + kAudioWindow, AudioScore{s.cheer_scores[k]}));
    }
    const std::string text =
        corrupt(render_graphic_text(s.player, s.hole, s.shot), spec.noise.ocr_corruption_rate, rng);
    events.push_back(make_event(ch, EventKind::Graphic, s.graphic_time, s.graphic_time + kGraphicOnScreen,
                                GraphicText{text, 0.9}));
    for (const auto& a : s.actions) {
      events.push_back(make_event(ch, EventKind::ActionScore, a.t, a.t + kFrameInterval, ActionScore{a.score}));
    }
    for (const auto& t : s.tones) {
      events.push_back(make_event(ch, EventKind::ToneScore, t.t, t.t + kAudioWindow, AudioScore{t.score}));
    }
    for (const auto& tr : s.transcripts) {
      events.push_back(make_event(ch, EventKind::Transcript, tr.t, tr.t + kTranscriptSpan,
                                  TranscriptText{render_phrases(tr.phrases)}));
    }

    // Frames around the bout end; the scene changes at the planted boundary.
    std::set<StreamTime> frame_times;
    for (StreamTime t = s.cheer_end() - kFramesBefore; t <= s.cheer_end() + kFramesAfter; t += kFrameInterval) {
      frame_times.insert(t);
    }
    if (s.boundary) frame_times.insert(*s.boundary);
    const auto before = scene;
    const auto after = other_scene(scene, rng);
    for (StreamTime t : frame_times) {
      const bool cut = s.boundary && t >= *s.boundary;
      events.push_back(make_event(ch, EventKind::FrameHistogram, t, t + kFrameInterval,
                                  scene_frame(cut ? after : before, rng)));
    }
    scene = s.boundary ? after : before;

    if (spec.faces) {
      const auto idx = static_cast<std::size_t>(
          std::find(out.roster.begin(), out.roster.end(), s.player) - out.roster.begin());
      const auto identity = identity_vector(idx);
      for (StreamTime t = s.graphic_time; t < s.graphic_time + kFaceSpan; t += kFrameInterval) {
        if (rng.chance(0.8)) {
          FaceDetection f;
          f.frame = kBroadcastFrame;
          f.box = {rng.uniform(520.0, 640.0), rng.uniform(200.0, 320.0), 120.0, 140.0};
          for (double x : identity) f.embedding.push_back(x + 0.1 * rng.normal());
          f.label = s.player;
          events.push_back(make_event(ch, EventKind::FaceDetection, t, t + kFrameInterval, std::move(f)));
        }
        if (rng.chance(0.5)) {
          FaceDetection f;
          f.frame = kBroadcastFrame;
          const bool tiny = rng.chance(0.3);
          const double h = tiny ? 30.0 : 60.0;
          f.box = {rng.chance(0.5) ? rng.uniform(0.0, 200.0) : rng.uniform(1000.0, 1200.0), rng.uniform(0.0, 600.0),
                   h * 0.85, h};
          for (int d = 0; d < kFaceDim; ++d) f.embedding.push_back(rng.normal());
          f.label = "crowd";
          events.push_back(make_event(ch, EventKind::FaceDetection, t, t + kFrameInterval, std::move(f)));
        }
      }
    }

    Highlight h;
    h.id = highlight_id(ch, s.cheer_end());
    h.channel = ch;
    h.t_start = std::max(StreamTime{0}, s.graphic_time - cfg.start_lead);
    h.t_end = s.boundary.value_or(s.cheer_end() + cfg.end_search_window);
    h.bout = {s.cheer_start, s.cheer_end(), *std::max_element(s.cheer_scores.begin(), s.cheer_scores.end())};
    h.components.cheer = h.bout.score;
    for (const auto& a : s.actions) h.components.action = std::max(h.components.action, a.score);
    for (const auto& t : s.tones) h.components.tone = std::max(h.components.tone, t.score);
    double keep = 1.0;
    bool any_phrase = false;
    // Same order the stream presents them: by time, ties in plan order.
    std::vector<const TimedPhrases*> spoken;
    for (const auto& tr : s.transcripts) spoken.push_back(&tr);
    std::stable_sort(spoken.begin(), spoken.end(), [](const auto* a, const auto* b) { return a->t < b->t; });
    for (const TimedPhrases* tr : spoken) {
      for (const auto& p : tr->phrases) {
        const double w = lexicon.weight_of(p);
        if (w > 0.0) any_phrase = true;
        keep *= 1.0 - w;
      }
    }
    h.components.text = any_phrase ? 1.0 - keep : 0.0;
    const FusionWeights& w = cfg.weights;
    h.fused_score = w.cheer * h.components.cheer + w.tone * h.components.tone + w.text * h.components.text +
                    w.action * h.components.action;
    h.player = s.player;
    h.hole = s.hole;
    h.graphic_time = s.graphic_time;
    out.truth.push_back(std::move(h));
  }

  // Background clutter between shots: markers outside every planted window.
  for (std::size_t i = 0; i < out.shots.size(); ++i) {
    const StreamTime from = footprint_end(out.shots[i], cfg) + StreamTime{10000};
    const StreamTime to =
        i + 1 < out.shots.size() ? footprint_start(out.shots[i + 1], cfg) - StreamTime{10000} : duration;
    if (to - from < StreamTime{10000}) continue;
    const auto pick = [&](StreamTime span) { return StreamTime{rng.range(from.count(), (to - span).count())}; };
    for (int k = 0; k < 2; ++k) {
      const StreamTime t = pick(kFrameInterval);
      events.push_back(make_event(ch, EventKind::ActionScore, t, t + kFrameInterval, ActionScore{rng.uniform()}));
    }
    const StreamTime tt = pick(kAudioWindow);
    events.push_back(make_event(ch, EventKind::ToneScore, tt, tt + kAudioWindow, AudioScore{rng.uniform(-1.0, 1.0)}));
    const StreamTime tr = pick(kTranscriptSpan);
    events.push_back(make_event(ch, EventKind::Transcript, tr, tr + kTranscriptSpan,
                                TranscriptText{"he will be pleased with that and " +
                                               lexicon.entries()[static_cast<std::size_t>(rng.range(
                                                   0, static_cast<std::int64_t>(lexicon.size()) - 1))].expression}));
  }

  std::sort(out.truth.begin(), out.truth.end(), highlight_order);
  out.stream = validate_stream(std::move(events));
  return out;
}

// --- spec JSON -------------------------------------------------------------

namespace {

template <typename T>
T get_or(const json& obj, const char* key, T fallback, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::MalformedRecord, path + key, "wrong type");
  }
}

StreamTime time_field(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_number_integer()) {
    throw Error(ErrorCode::MalformedRecord, path + key, "expected integer milliseconds");
  }
  return StreamTime{it->get<std::int64_t>()};
}

std::vector<TimedScore> timed_scores(const json& obj, const char* key, const std::string& path) {
  std::vector<TimedScore> out;
  auto it = obj.find(key);
  if (it == obj.end()) return out;
  if (!it->is_array()) throw Error(ErrorCode::MalformedRecord, path + key, "expected an array");
  for (const auto& item : *it) {
    if (!item.is_object()) throw Error(ErrorCode::MalformedRecord, path + key, "expected {t, score} objects");
    out.push_back({time_field(item, "t", path + key + "."), get_or<double>(item, "score", 0.0, path + key + ".")});
  }
  return out;
}

}  // namespace

ScenarioSpec scenario_spec_from_json(std::string_view text) {
  json obj;
  try {
    obj = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::MalformedRecord, "", std::string("invalid JSON: ") + e.what());
  }
  if (!obj.is_object()) throw Error(ErrorCode::MalformedRecord, "", "scenario spec must be a JSON object");

  ScenarioSpec spec;
  spec.seed = get_or<std::uint64_t>(obj, "seed", 0, "");
  spec.channel = get_or<std::string>(obj, "channel", "c1", "");
  if (auto it = obj.find("duration_ms"); it != obj.end() && !it->is_null()) spec.duration = time_field(obj, "duration_ms", "");
  spec.random_shots = get_or<int>(obj, "random_shots", 0, "");
  spec.faces = get_or<bool>(obj, "faces", false, "");
  spec.roster = get_or<std::vector<std::string>>(obj, "roster", {}, "");
  if (auto it = obj.find("noise"); it != obj.end()) {
    spec.noise.spurious_cheer_rate = get_or<double>(*it, "spurious_cheer_rate", 0.0, "noise.");
    spec.noise.ocr_corruption_rate = get_or<double>(*it, "ocr_corruption_rate", 0.0, "noise.");
  }
  if (auto it = obj.find("shots"); it != obj.end()) {
    if (!it->is_array()) throw Error(ErrorCode::MalformedRecord, "shots", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const json& s = (*it)[i];
      const std::string path = "shots[" + std::to_string(i) + "].";
      if (!s.is_object()) throw Error(ErrorCode::MalformedRecord, path, "expected an object");
      PlantedShot shot;
      shot.graphic_time = time_field(s, "graphic_time", path);
      shot.player = get_or<std::string>(s, "player", "", path);
      shot.hole = get_or<int>(s, "hole", 1, path);
      shot.shot = get_or<int>(s, "shot", 1, path);
      shot.cheer_start = time_field(s, "cheer_start", path);
      shot.cheer_scores = get_or<std::vector<double>>(s, "cheer_scores", {}, path);
      shot.actions = timed_scores(s, "actions", path);
      shot.tones = timed_scores(s, "tones", path);
      if (auto tr = s.find("transcripts"); tr != s.end()) {
        if (!tr->is_array()) throw Error(ErrorCode::MalformedRecord, path + "transcripts", "expected an array");
        for (const auto& item : *tr) {
          if (!item.is_object()) throw Error(ErrorCode::MalformedRecord, path + "transcripts", "expected objects");
          shot.transcripts.push_back({time_field(item, "t", path + "transcripts."),
                                      get_or<std::vector<std::string>>(item, "phrases", {}, path + "transcripts.")});
        }
      }
      if (auto b = s.find("boundary"); b != s.end() && !b->is_null()) shot.boundary = time_field(s, "boundary", path);
      spec.shots.push_back(std::move(shot));
    }
  }
  return spec;
}

std::string scenario_spec_to_json(const ScenarioSpec& spec) {
  nlohmann::ordered_json out;
  out["seed"] = spec.seed;
  out["channel"] = spec.channel;
  if (spec.duration) out["duration_ms"] = spec.duration->count();
  out["random_shots"] = spec.random_shots;
  out["faces"] = spec.faces;
  out["noise"] = {{"spurious_cheer_rate", spec.noise.spurious_cheer_rate},
                  {"ocr_corruption_rate", spec.noise.ocr_corruption_rate}};
  if (!spec.roster.empty()) out["roster"] = spec.roster;
  auto shots = nlohmann::ordered_json::array();
  for (const auto& s : spec.shots) {
    nlohmann::ordered_json js;
    js["graphic_time"] = s.graphic_time.count();
    js["player"] = s.player;
    js["hole"] = s.hole;
    js["shot"] = s.shot;
    js["cheer_start"] = s.cheer_start.count();
    js["cheer_scores"] = s.cheer_scores;
    auto scores = [](const std::vector<TimedScore>& v) {
      auto arr = nlohmann::ordered_json::array();
      for (const auto& x : v) arr.push_back({{"t", x.t.count()}, {"score", x.score}});
      return arr;
    };
    js["actions"] = scores(s.actions);
    js["tones"] = scores(s.tones);
    auto trs = nlohmann::ordered_json::array();
    for (const auto& tr : s.transcripts) trs.push_back({{"t", tr.t.count()}, {"phrases", tr.phrases}});
    js["transcripts"] = std::move(trs);
    if (s.boundary) js["boundary"] = s.boundary->count();
    shots.push_back(std::move(js));
  }
  out["shots"] = std::move(shots);
  return out.dump(2);
}

}  // namespace hlc
