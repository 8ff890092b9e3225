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

#include "hlc/highlight_engine.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "hlc/error.hpp"

namespace hlc {
namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

// Largest strictly positive score among the events, or 0.
double max_positive(std::span<const MarkerEvent* const> events) {
  double best = 0.0;
  for (const MarkerEvent* e : events) best = std::max(best, e->score());
  return best;
}

}  // namespace

void FusionWeights::validate() const {
  const std::pair<const char*, double> fields[] = {
      {"weights.w_cheer", cheer}, {"weights.w_tone", tone}, {"weights.w_text", text}, {"weights.w_action", action}};
  for (const auto& [name, value] : fields) {
    if (!(value >= 0.0) || !std::isfinite(value)) {
      throw Error(ErrorCode::ConfigInvalid, name, "fusion weights must be finite and non-negative");
    }
  }
  if (std::abs(sum() - 1.0) > 1e-9) {
    throw Error(ErrorCode::ConfigInvalid, "weights", "fusion weights must sum to 1");
  }
}

void EngineConfig::validate() const {
  const std::pair<const char*, Millis> windows[] = {{"graphic_match_window", graphic_match_window},
                                                    {"start_lead", start_lead},
                                                    {"end_search_window", end_search_window},
                                                    {"action_window", action_window},
                                                    {"tone_window", tone_window}};
  for (const auto& [name, w] : windows) {
    if (w.count() <= 0) throw Error(ErrorCode::ConfigInvalid, name, "window must be positive");
  }
  weights.validate();
  if (!std::isfinite(cheer_positive_threshold)) {
    throw Error(ErrorCode::ConfigInvalid, "cheer_positive_threshold", "must be finite");
  }
  if (!(boundary_threshold > 0.0 && boundary_threshold <= 1.0)) {
    throw Error(ErrorCode::ConfigInvalid, "boundary_threshold", "must lie in (0, 1]");
  }
}

std::string highlight_id(std::string_view channel, StreamTime bout_end) {
  return std::string(channel) + "-" + std::to_string(bout_end.count());
}

std::vector<CheerBout> merge_cheer_bouts(const ValidatedStream& stream, const EngineConfig& cfg) {
  std::vector<CheerBout> bouts;
  std::optional<CheerBout> run;
  for (const MarkerEvent* e : stream.of_kind(EventKind::CheerScore)) {
    if (e->score() <= cfg.cheer_positive_threshold) {
      if (run) bouts.push_back(*run);
      run.reset();
      continue;
    }
    if (run && e->t_start <= run->t_end) {
      run->t_end = std::max(run->t_end, e->t_end);
      run->score = std::max(run->score, e->score());
    } else {
      if (run) bouts.push_back(*run);
      run = CheerBout{e->t_start, e->t_end, e->score()};
    }
  }
  if (run) bouts.push_back(*run);
  return bouts;
}

std::vector<SegmentProposal> propose_segments(std::span<const CheerBout> bouts,
                                              std::span<const MarkerEvent* const> graphics,
                                              const EngineConfig& cfg) {
  std::vector<SegmentProposal> proposals;
  std::vector<std::size_t> graphic_of;
  for (const CheerBout& bout : bouts) {
    // Latest graphic with t <= bout end.
    auto it = std::upper_bound(graphics.begin(), graphics.end(), bout.t_end,
                               [](StreamTime t, const MarkerEvent* g) { return t < g->t_start; });
    if (it == graphics.begin()) continue;
    const MarkerEvent* g = *std::prev(it);
    if (bout.t_end - g->t_start > cfg.graphic_match_window) continue;

    SegmentProposal p;
    p.bout = bout;
    p.graphic_time = g->t_start;
    p.graphic_text = g->text();
    p.t_start = std::max(StreamTime{0}, g->t_start - cfg.start_lead);
    proposals.push_back(std::move(p));
    graphic_of.push_back(static_cast<std::size_t>(std::prev(it) - graphics.begin()));
  }
  std::map<std::size_t, int> uses;
  for (std::size_t g : graphic_of) ++uses[g];
  for (std::size_t i = 0; i < proposals.size(); ++i) proposals[i].shared_graphic = uses[graphic_of[i]] > 1;
  return proposals;
}

StreamTime resolve_end(const SegmentProposal& proposal, std::span<const StreamTime> boundaries,
                       const EngineConfig& cfg) {
  const StreamTime bout_end = proposal.bout.t_end;
  const StreamTime limit = bout_end + cfg.end_search_window;
  auto it = std::upper_bound(boundaries.begin(), boundaries.end(), bout_end);
  if (it != boundaries.end() && *it <= limit) return *it;
  return limit;
}

ComponentScores aggregate_components(const SegmentProposal& proposal, const ValidatedStream& stream,
                                     const ExcitementLexicon& lexicon, const EngineConfig& cfg) {
  const CheerBout& bout = proposal.bout;
  ComponentScores c;
  c.cheer = clamp01(bout.score);

  const Millis action_half = cfg.action_window / 2;
  c.action = clamp01(
      max_positive(stream.slice_refs(EventKind::ActionScore, bout.t_start - action_half, bout.t_end + action_half)));

  const StreamTime tone_from = bout.t_start - cfg.tone_window / 2;
  const StreamTime tone_to = bout.t_end + cfg.tone_window / 2;
  c.tone = clamp01(max_positive(stream.slice_refs(EventKind::ToneScore, tone_from, tone_to)));

  std::string transcript;
  for (const MarkerEvent* e : stream.slice_refs(EventKind::Transcript, tone_from, tone_to)) {
    if (!transcript.empty()) transcript += ' ';
    transcript += e->text();
  }
  c.text = score_text(transcript, lexicon).score;
  return c;
}

double fuse(const ComponentScores& c, const FusionWeights& w) {
  return w.cheer * c.cheer + w.tone * c.tone + w.text * c.text + w.action * c.action;
}

std::vector<StreamTime> stream_boundaries(const ValidatedStream& stream, const EngineConfig& cfg) {
  BoundaryDetector detector(BoundaryConfig{cfg.boundary_threshold});
  std::vector<StreamTime> cuts;
  std::optional<StreamTime> last;
  for (const MarkerEvent* e : stream.of_kind(EventKind::FrameHistogram)) {
    if (last && e->t_start <= *last) continue;  // duplicate frame time: first one wins
    last = e->t_start;
    if (auto cut = detector.push(e->t_start, e->histogram())) cuts.push_back(*cut);
  }
  return cuts;
}

bool highlight_order(const Highlight& a, const Highlight& b) {
  if (a.fused_score != b.fused_score) return a.fused_score > b.fused_score;
  if (a.t_start != b.t_start) return a.t_start < b.t_start;
  return a.id < b.id;
}

std::vector<Highlight> curate(const ValidatedStream& stream, const ExcitementLexicon& lexicon,
                              std::span<const std::string> roster, const EngineConfig& cfg) {
  cfg.validate();
  std::vector<Highlight> out;
  const auto bouts = merge_cheer_bouts(stream, cfg);
  if (bouts.empty()) return out;

  const auto graphics = stream.of_kind(EventKind::Graphic);
  const auto proposals = propose_segments(bouts, graphics, cfg);
  const auto boundaries = stream_boundaries(stream, cfg);

  for (const SegmentProposal& p : proposals) {
    Highlight h;
    h.id = highlight_id(stream.channel(), p.bout.t_end);
    h.channel = stream.channel();
    h.t_start = p.t_start;
    h.t_end = resolve_end(p, boundaries, cfg);
    h.bout = p.bout;
    h.components = aggregate_components(p, stream, lexicon, cfg);
    h.fused_score = fuse(h.components, cfg.weights);
    h.graphic_time = p.graphic_time;
    h.shared_graphic = p.shared_graphic;
    // Metadata failures leave the field empty; the highlight is kept.
    try {
      h.hole = parse_hole(p.graphic_text);
    } catch (const Error&) {
    }
    if (!roster.empty()) {
      try {
        h.player = match_player(p.graphic_text, roster);
      } catch (const Error&) {
      }
    }
    out.push_back(std::move(h));
  }
  std::sort(out.begin(), out.end(), highlight_order);
  return out;
}

}  // namespace hlc
