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

#include "hlc/marker_stream.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

#include "hlc/error.hpp"

namespace hlc {
namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

constexpr std::size_t kind_index(EventKind kind) { return static_cast<std::size_t>(kind); }

[[noreturn]] void violation(const std::string& field, const std::string& message) {
  throw Error(ErrorCode::InvariantViolation, field, message);
}

const json& require(const json& obj, const char* field) {
  auto it = obj.find(field);
  if (it == obj.end()) throw Error(ErrorCode::MalformedRecord, field, "missing field");
  return *it;
}

std::int64_t require_int(const json& obj, const char* field) {
  const json& v = require(obj, field);
  if (!v.is_number_integer()) throw Error(ErrorCode::MalformedRecord, field, "expected an integer");
  return v.get<std::int64_t>();
}

double require_number(const json& obj, const char* field) {
  const json& v = require(obj, field);
  if (!v.is_number()) throw Error(ErrorCode::MalformedRecord, field, "expected a number");
  return v.get<double>();
}

std::string require_string(const json& obj, const char* field) {
  const json& v = require(obj, field);
  if (!v.is_string()) throw Error(ErrorCode::MalformedRecord, field, "expected a string");
  return v.get<std::string>();
}

std::vector<double> number_array(const json& v, const std::string& field) {
  if (!v.is_array()) throw Error(ErrorCode::MalformedRecord, field, "expected an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) {
    if (!x.is_number()) throw Error(ErrorCode::MalformedRecord, field, "expected numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::set<std::string> allowed_fields(EventKind kind) {
  std::set<std::string> base = {"channel", "kind", "t_start", "t_end"};
  switch (kind) {
    case EventKind::CheerScore:
    case EventKind::ToneScore:
    case EventKind::ActionScore: base.insert("score"); break;
    case EventKind::Transcript: base.insert("text"); break;
    case EventKind::Graphic: base.insert({"text", "confidence"}); break;
    case EventKind::FrameHistogram: base.insert({"bins", "blank"}); break;
    case EventKind::FaceDetection: base.insert({"box", "frame", "embedding", "dim", "label"}); break;
  }
  return base;
}

EventPayload parse_payload(EventKind kind, const json& obj) {
  switch (kind) {
    case EventKind::CheerScore:
    case EventKind::ToneScore: return AudioScore{require_number(obj, "score")};
    case EventKind::ActionScore: return ActionScore{require_number(obj, "score")};
    case EventKind::Transcript: return TranscriptText{require_string(obj, "text")};
    case EventKind::Graphic: {
      GraphicText g{require_string(obj, "text"), 1.0};
      if (obj.contains("confidence")) g.confidence = require_number(obj, "confidence");
      return g;
    }
    case EventKind::FrameHistogram: {
      const json& bins = require(obj, "bins");
      if (!bins.is_array() || bins.size() != Histogram::kChannels) {
        throw Error(ErrorCode::MalformedRecord, "bins", "expected 3 channel arrays");
      }
      std::array<std::vector<double>, Histogram::kChannels> channels;
      for (std::size_t c = 0; c < Histogram::kChannels; ++c) {
        channels[c] = number_array(bins[c], "bins[" + std::to_string(c) + "]");
      }
      bool blank = false;
      if (obj.contains("blank")) {
        if (!obj["blank"].is_boolean()) throw Error(ErrorCode::MalformedRecord, "blank", "expected a boolean");
        blank = obj["blank"].get<bool>();
      }
      return Histogram(std::move(channels), blank);
    }
    case EventKind::FaceDetection: {
      FaceDetection f;
      const auto box = number_array(require(obj, "box"), "box");
      if (box.size() != 4) throw Error(ErrorCode::MalformedRecord, "box", "expected [x, y, w, h]");
      f.box = {box[0], box[1], box[2], box[3]};
      const json& frame = require(obj, "frame");
      if (!frame.is_array() || frame.size() != 2 || !frame[0].is_number_integer() ||
          !frame[1].is_number_integer()) {
        throw Error(ErrorCode::MalformedRecord, "frame", "expected [width, height] integers");
      }
      f.frame = {frame[0].get<int>(), frame[1].get<int>()};
      f.embedding = number_array(require(obj, "embedding"), "embedding");
      if (obj.contains("dim")) {
        const json& dim = obj["dim"];
        if (!dim.is_number_integer()) throw Error(ErrorCode::MalformedRecord, "dim", "expected an integer");
        if (dim.get<std::int64_t>() != static_cast<std::int64_t>(f.embedding.size())) {
          violation("embedding", "embedding length differs from declared dim");
        }
      }
      if (obj.contains("label")) f.label = require_string(obj, "label");
      return f;
    }
  }
  throw Error(ErrorCode::UnknownKind, "kind", "unhandled kind");
}

bool payload_matches_kind(EventKind kind, const EventPayload& payload) {
  switch (kind) {
    case EventKind::CheerScore:
    case EventKind::ToneScore: return std::holds_alternative<AudioScore>(payload);
    case EventKind::ActionScore: return std::holds_alternative<ActionScore>(payload);
    case EventKind::Transcript: return std::holds_alternative<TranscriptText>(payload);
    case EventKind::Graphic: return std::holds_alternative<GraphicText>(payload);
    case EventKind::FrameHistogram: return std::holds_alternative<Histogram>(payload);
    case EventKind::FaceDetection: return std::holds_alternative<FaceDetection>(payload);
  }
  return false;
}

}  // namespace

bool valid_channel_id(std::string_view id) {
  if (id.empty()) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
           c == '-' || c == '.' || c == ':';
  });
}

std::string_view kind_name(EventKind kind) {
  switch (kind) {
    case EventKind::CheerScore: return "cheer";
    case EventKind::ToneScore: return "tone";
    case EventKind::Transcript: return "transcript";
    case EventKind::ActionScore: return "action";
    case EventKind::Graphic: return "graphic";
    case EventKind::FrameHistogram: return "histogram";
    case EventKind::FaceDetection: return "face";
  }
  return "unknown";
}

std::optional<EventKind> kind_from_name(std::string_view name) {
  for (EventKind k : kAllEventKinds) {
    if (kind_name(k) == name) return k;
  }
  return std::nullopt;
}

double MarkerEvent::score() const {
  if (const auto* a = std::get_if<AudioScore>(&payload)) return a->score;
  if (const auto* a = std::get_if<ActionScore>(&payload)) return a->score;
  return 0.0;
}

const std::string& MarkerEvent::text() const {
  if (const auto* t = std::get_if<TranscriptText>(&payload)) return t->text;
  return std::get<GraphicText>(payload).text;
}

const Histogram& MarkerEvent::histogram() const { return std::get<Histogram>(payload); }

const FaceDetection& MarkerEvent::face() const { return std::get<FaceDetection>(payload); }

void check_event(const MarkerEvent& e) {
  if (!valid_channel_id(e.channel)) {
    violation("channel", "channel id must be non-empty [A-Za-z0-9_.:-]");
  }
  if (e.t_start.count() < 0) violation("t_start", "must be non-negative");
  if (e.t_end < e.t_start) violation("t_end", "must not precede t_start");
  if (!payload_matches_kind(e.kind, e.payload)) violation("kind", "payload does not match kind");

  switch (e.kind) {
    case EventKind::CheerScore:
    case EventKind::ToneScore: {
      const double s = e.score();
      if (!(s >= -1.0 && s <= 1.0)) violation("score", "audio score must lie in [-1, 1]");
      if (e.t_end - e.t_start != kAudioWindow) violation("t_end", "audio windows span exactly 6000 ms");
      break;
    }
    case EventKind::ActionScore: {
      const double s = e.score();
      if (!(s >= 0.0 && s <= 1.0)) violation("score", "action score must lie in [0, 1]");
      if (e.t_end - e.t_start != kFrameInterval) violation("t_end", "action frames span exactly 1000 ms");
      break;
    }
    case EventKind::Graphic: {
      const double c = std::get<GraphicText>(e.payload).confidence;
      if (!(c >= 0.0 && c <= 1.0)) violation("confidence", "must lie in [0, 1]");
      break;
    }
    case EventKind::FaceDetection: {
      const auto& f = e.face();
      if (f.frame.width <= 0 || f.frame.height <= 0) violation("frame", "frame dimensions must be positive");
      const Box& b = f.box;
      if (!(b.w > 0.0 && b.h > 0.0)) violation("box", "box width and height must be positive");
      if (!(b.x >= 0.0 && b.y >= 0.0 && b.x + b.w <= f.frame.width && b.y + b.h <= f.frame.height)) {
        violation("box", "box must lie within the frame");
      }
      if (f.embedding.empty()) violation("embedding", "embedding must not be empty");
      for (double v : f.embedding) {
        if (!std::isfinite(v)) violation("embedding", "embedding values must be finite");
      }
      break;
    }
    case EventKind::Transcript:
    case EventKind::FrameHistogram: break;  // histogram invariants hold by construction
  }
}

MarkerEvent parse_event(std::string_view line, ParseStats* stats) {
  json obj;
  try {
    obj = json::parse(line);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::MalformedRecord, "", std::string("invalid JSON: ") + e.what());
  }
  if (!obj.is_object()) throw Error(ErrorCode::MalformedRecord, "", "record must be a JSON object");

  const std::string kind_str = require_string(obj, "kind");
  const auto kind = kind_from_name(kind_str);
  if (!kind) throw Error(ErrorCode::UnknownKind, "kind", "unknown kind '" + kind_str + "'");

  MarkerEvent e;
  e.channel = require_string(obj, "channel");
  e.kind = *kind;
  e.t_start = StreamTime{require_int(obj, "t_start")};
  e.t_end = StreamTime{require_int(obj, "t_end")};
  e.payload = parse_payload(*kind, obj);
  check_event(e);

  if (stats) {
    const auto allowed = allowed_fields(*kind);
    for (const auto& [key, _] : obj.items()) {
      if (!allowed.contains(key)) ++stats->unknown_fields;
    }
  }
  return e;
}

std::string serialize_event(const MarkerEvent& e) {
  ojson out;
  out["channel"] = e.channel;
  out["kind"] = kind_name(e.kind);
  out["t_start"] = e.t_start.count();
  out["t_end"] = e.t_end.count();
  std::visit(
      [&out](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, AudioScore> || std::is_same_v<T, ActionScore>) {
          out["score"] = p.score;
        } else if constexpr (std::is_same_v<T, TranscriptText>) {
          out["text"] = p.text;
        } else if constexpr (std::is_same_v<T, GraphicText>) {
          out["text"] = p.text;
          out["confidence"] = p.confidence;
        } else if constexpr (std::is_same_v<T, Histogram>) {
          ojson bins = ojson::array();
          for (std::size_t c = 0; c < Histogram::kChannels; ++c) {
            const auto ch = p.channel(c);
            bins.push_back(std::vector<double>(ch.begin(), ch.end()));
          }
          out["bins"] = std::move(bins);
          if (p.blank()) out["blank"] = true;
        } else if constexpr (std::is_same_v<T, FaceDetection>) {
          out["box"] = {p.box.x, p.box.y, p.box.w, p.box.h};
          out["frame"] = {p.frame.width, p.frame.height};
          out["embedding"] = p.embedding;
          if (p.label) out["label"] = *p.label;
        }
      },
      e.payload);
  return out.dump();
}

ValidatedStream validate_stream(std::vector<MarkerEvent> events) {
  ValidatedStream s;
  if (events.empty()) return s;

  s.channel_ = events.front().channel;
  std::optional<std::size_t> face_dim;
  for (const auto& e : events) {
    if (e.channel != s.channel_) {
      throw Error(ErrorCode::MixedChannels, "channel",
                  "stream mixes channels '" + s.channel_ + "' and '" + e.channel + "'");
    }
    check_event(e);
    if (e.kind == EventKind::FaceDetection) {
      const std::size_t d = e.face().embedding.size();
      if (face_dim && *face_dim != d) violation("embedding", "face embeddings differ in dimension");
      face_dim = d;
    }
  }

  std::stable_sort(events.begin(), events.end(), [](const MarkerEvent& a, const MarkerEvent& b) {
    if (a.t_start != b.t_start) return a.t_start < b.t_start;
    return kind_name(a.kind) < kind_name(b.kind);
  });

  s.events_ = std::move(events);
  for (std::size_t i = 0; i < s.events_.size(); ++i) {
    const auto& e = s.events_[i];
    const std::size_t k = kind_index(e.kind);
    s.by_kind_[k].push_back(i);
    s.longest_[k] = std::max(s.longest_[k], e.t_end - e.t_start);
    s.duration_ = std::max(s.duration_, e.t_end);
  }
  return s;
}

std::vector<const MarkerEvent*> ValidatedStream::slice_refs(EventKind kind, StreamTime t0,
                                                            StreamTime t1) const {
  std::vector<const MarkerEvent*> out;
  if (t1 < t0) return out;
  const auto& idx = by_kind_[kind_index(kind)];
  // Any intersecting event starts no earlier than t0 - longest.
  const StreamTime earliest = t0 - longest_[kind_index(kind)];
  auto it = std::lower_bound(idx.begin(), idx.end(), earliest,
                             [this](std::size_t i, StreamTime t) { return events_[i].t_start < t; });
  for (; it != idx.end(); ++it) {
    const MarkerEvent& e = events_[*it];
    if (e.t_start > t1) break;
    if (intervals_intersect(e.t_start, e.t_end, t0, t1)) out.push_back(&e);
  }
  return out;
}

std::vector<MarkerEvent> ValidatedStream::slice(EventKind kind, StreamTime t0, StreamTime t1) const {
  std::vector<MarkerEvent> out;
  for (const MarkerEvent* e : slice_refs(kind, t0, t1)) out.push_back(*e);
  return out;
}

std::vector<const MarkerEvent*> ValidatedStream::of_kind(EventKind kind) const {
  std::vector<const MarkerEvent*> out;
  for (std::size_t i : by_kind_[kind_index(kind)]) out.push_back(&events_[i]);
  return out;
}

}  // namespace hlc
