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

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hlc/shot_boundary.hpp"
#include "hlc/time.hpp"

namespace hlc {

enum class EventKind { CheerScore, ToneScore, Transcript, ActionScore, Graphic, FrameHistogram, FaceDetection };

inline constexpr std::array<EventKind, 7> kAllEventKinds = {
    EventKind::CheerScore,  EventKind::ToneScore, EventKind::Transcript,     EventKind::ActionScore,
    EventKind::Graphic,     EventKind::FrameHistogram, EventKind::FaceDetection};

// Wire name ("cheer", "tone", "transcript", "action", "graphic", "histogram",
// "face"). Also the tie-break key when events start together.
std::string_view kind_name(EventKind kind);
std::optional<EventKind> kind_from_name(std::string_view name);

// Cheer and tone classifier output over one 6 s audio window, in [-1, 1].
struct AudioScore {
  double score = 0.0;
  friend bool operator==(const AudioScore&, const AudioScore&) = default;
};

// Player-reaction score for one frame, in [0, 1].
struct ActionScore {
  double score = 0.0;
  friend bool operator==(const ActionScore&, const ActionScore&) = default;
};

struct TranscriptText {
  std::string text;
  friend bool operator==(const TranscriptText&, const TranscriptText&) = default;
};

struct GraphicText {
  std::string text;  // raw OCR output
  double confidence = 1.0;
  friend bool operator==(const GraphicText&, const GraphicText&) = default;
};

struct Box {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;
  friend bool operator==(const Box&, const Box&) = default;
};

struct FrameDims {
  int width = 0;
  int height = 0;
  friend bool operator==(const FrameDims&, const FrameDims&) = default;
};

struct FaceDetection {
  Box box;
  FrameDims frame;
  std::vector<double> embedding;
  std::optional<std::string> label;  // oracle identity, test corpora only
  friend bool operator==(const FaceDetection&, const FaceDetection&) = default;
};

using EventPayload =
    std::variant<AudioScore, ActionScore, TranscriptText, GraphicText, Histogram, FaceDetection>;

struct MarkerEvent {
  std::string channel;
  EventKind kind = EventKind::CheerScore;
  StreamTime t_start{0};
  StreamTime t_end{0};
  EventPayload payload;

  // Score of cheer/tone/action events; 0 for other kinds.
  double score() const;
  const std::string& text() const;  // transcript or graphic text
  const Histogram& histogram() const;
  const FaceDetection& face() const;

  friend bool operator==(const MarkerEvent&, const MarkerEvent&) = default;
};

// Throws InvariantViolation naming the field that breaks a payload rule.
void check_event(const MarkerEvent& event);

struct ParseStats {
  std::size_t unknown_fields = 0;
};

// Parses one line-delimited JSON record. Unknown extra fields are counted in
// `stats` (when given) and otherwise ignored.
MarkerEvent parse_event(std::string_view line, ParseStats* stats = nullptr);
std::string serialize_event(const MarkerEvent& event);

// Events of one channel, sorted by t_start, then kind name, then ingestion
// order. Only validate_stream constructs non-empty instances.
class ValidatedStream {
 public:
  ValidatedStream() = default;

  const std::string& channel() const { return channel_; }
  const std::vector<MarkerEvent>& events() const { return events_; }
  StreamTime duration() const { return duration_; }
  bool empty() const { return events_.empty(); }

  // Events of `kind` whose [t_start, t_end] intersects [t0, t1], in order.
  std::vector<MarkerEvent> slice(EventKind kind, StreamTime t0, StreamTime t1) const;
  // Same selection, as pointers into events(); valid while the stream lives.
  std::vector<const MarkerEvent*> slice_refs(EventKind kind, StreamTime t0, StreamTime t1) const;
  std::vector<const MarkerEvent*> of_kind(EventKind kind) const;

  friend bool operator==(const ValidatedStream& a, const ValidatedStream& b) {
    return a.channel_ == b.channel_ && a.duration_ == b.duration_ && a.events_ == b.events_;
  }

 private:
  friend ValidatedStream validate_stream(std::vector<MarkerEvent> events);

  std::string channel_;
  std::vector<MarkerEvent> events_;
  StreamTime duration_{0};
  // Per kind: indices into events_ (time-ordered) and the longest event.
  std::array<std::vector<std::size_t>, kAllEventKinds.size()> by_kind_;
  std::array<StreamTime, kAllEventKinds.size()> longest_{};
};

// Non-empty, drawn from [A-Za-z0-9_.:-].
bool valid_channel_id(std::string_view id);

// Throws MixedChannels when events span more than one channel, or
// InvariantViolation when face embeddings disagree in dimension.
ValidatedStream validate_stream(std::vector<MarkerEvent> events);

inline std::vector<MarkerEvent> slice(const ValidatedStream& stream, EventKind kind, StreamTime t0,
                                      StreamTime t1) {
  return stream.slice(kind, t0, t1);
}

}  // namespace hlc
