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
#include <random>

#include <gtest/gtest.h>

#include "hlc/error.hpp"

namespace hlc {
namespace {

using namespace std::chrono_literals;

ErrorCode code_of(const std::string& line) {
  try {
    parse_event(line);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected parse failure for " << line;
  return ErrorCode::IoError;
}

MarkerEvent cheer(StreamTime t, double score, std::string channel = "c1") {
  return {std::move(channel), EventKind::CheerScore, t, t + kAudioWindow, AudioScore{score}};
}

MarkerEvent action(StreamTime t, double score) {
  return {"c1", EventKind::ActionScore, t, t + kFrameInterval, ActionScore{score}};
}

TEST(ParseEvent, CheerRecordMapsFields) {
  const auto e = parse_event(R"({"channel":"c1","kind":"cheer","t_start":0,"t_end":6000,"score":0.5})");
  EXPECT_EQ(e.channel, "c1");
  EXPECT_EQ(e.kind, EventKind::CheerScore);
  EXPECT_EQ(e.t_start, 0ms);
  EXPECT_EQ(e.t_end, 6000ms);
  EXPECT_DOUBLE_EQ(e.score(), 0.5);
}

TEST(ParseEvent, CheerWindowMustBeSixSeconds) {
  try {
    parse_event(R"({"channel":"c1","kind":"cheer","t_start":0,"t_end":5000,"score":0.5})");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvariantViolation);
    EXPECT_EQ(e.field(), "t_end");
  }
}

TEST(ParseEvent, ActionScoreOutOfRange) {
  try {
    parse_event(R"({"channel":"c1","kind":"action","t_start":7000,"t_end":8000,"score":1.2})");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvariantViolation);
    EXPECT_EQ(e.field(), "score");
  }
}

TEST(ParseEvent, ErrorClasses) {
  EXPECT_EQ(code_of("not json"), ErrorCode::MalformedRecord);
  EXPECT_EQ(code_of("[1,2]"), ErrorCode::MalformedRecord);
  EXPECT_EQ(code_of(R"({"channel":"c1","kind":"smell","t_start":0,"t_end":1})"), ErrorCode::UnknownKind);
  EXPECT_EQ(code_of(R"({"channel":"c1","kind":"cheer","t_start":0,"t_end":6000})"), ErrorCode::MalformedRecord);
  EXPECT_EQ(code_of(R"({"channel":"c1","kind":"cheer","t_start":0.5,"t_end":6000,"score":0})"),
            ErrorCode::MalformedRecord);
  EXPECT_EQ(code_of(R"({"channel":"c1","kind":"tone","t_start":0,"t_end":6000,"score":-1.5})"),
            ErrorCode::InvariantViolation);
  EXPECT_EQ(code_of(R"({"channel":"c1","kind":"transcript","t_start":10,"t_end":5,"text":""})"),
            ErrorCode::InvariantViolation);
  EXPECT_EQ(code_of(R"({"channel":"c1","kind":"graphic","t_start":0,"t_end":5,"text":"x","confidence":2})"),
            ErrorCode::InvariantViolation);
  EXPECT_EQ(code_of(R"({"channel":"","kind":"transcript","t_start":0,"t_end":5,"text":""})"),
            ErrorCode::InvariantViolation);
  EXPECT_EQ(code_of(R"({"channel":"c1","kind":"face","t_start":0,"t_end":1000,"box":[90,0,20,20],"frame":[100,100],"embedding":[1]})"),
            ErrorCode::InvariantViolation);
  EXPECT_EQ(code_of(R"({"channel":"c1","kind":"histogram","t_start":0,"t_end":1000,"bins":[[0.5],[1],[1]]})"),
            ErrorCode::InvariantViolation);
}

TEST(ParseEvent, EmptyTranscriptAllowedAndUnknownFieldsCounted) {
  ParseStats stats;
  const auto e = parse_event(R"({"channel":"c1","kind":"transcript","t_start":0,"t_end":3000,"text":"","lang":"en","x":1})",
                             &stats);
  EXPECT_EQ(e.text(), "");
  EXPECT_EQ(stats.unknown_fields, 2u);
}

TEST(ParseEvent, FaceAndHistogramPayloads) {
  const auto f = parse_event(
      R"({"channel":"c1","kind":"face","t_start":1000,"t_end":2000,"box":[10,20,30,40],"frame":[640,360],"embedding":[0.1,0.2],"dim":2,"label":"A"})");
  EXPECT_EQ(f.face().box, (Box{10, 20, 30, 40}));
  EXPECT_EQ(f.face().frame, (FrameDims{640, 360}));
  EXPECT_EQ(f.face().label, "A");
  EXPECT_EQ(code_of(R"({"channel":"c1","kind":"face","t_start":1000,"t_end":2000,"box":[10,20,30,40],"frame":[640,360],"embedding":[0.1,0.2],"dim":3})"),
            ErrorCode::InvariantViolation);

  const auto h = parse_event(
      R"({"channel":"c1","kind":"histogram","t_start":0,"t_end":1000,"bins":[[0.25,0.75],[1,0],[0,1]]})");
  EXPECT_EQ(h.histogram().bins_per_channel(), 2u);
}

// Serializing any valid event and parsing it back yields the same event.
TEST(ParseEvent, RoundTripProperty) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> t(0, 1000000);
  for (int trial = 0; trial < 300; ++trial) {
    const StreamTime t0{t(rng)};
    MarkerEvent e;
    e.channel = "ch-" + std::to_string(trial % 3);
    e.t_start = t0;
    switch (trial % 7) {
      case 0: e = MarkerEvent{e.channel, EventKind::CheerScore, t0, t0 + kAudioWindow, AudioScore{2 * u(rng) - 1}}; break;
      case 1: e = MarkerEvent{e.channel, EventKind::ToneScore, t0, t0 + kAudioWindow, AudioScore{2 * u(rng) - 1}}; break;
      case 2: e = MarkerEvent{e.channel, EventKind::ActionScore, t0, t0 + kFrameInterval, ActionScore{u(rng)}}; break;
      case 3: e = MarkerEvent{e.channel, EventKind::Transcript, t0, t0 + 2500ms, TranscriptText{"what a shot \"quoted\" é"}}; break;
      case 4: e = MarkerEvent{e.channel, EventKind::Graphic, t0, t0 + 8000ms, GraphicText{"S. Garcia  Hole 13", u(rng)}}; break;
      case 5: {
        std::array<std::vector<double>, 3> bins;
        for (auto& ch : bins) {
          ch.assign(64, 0.0);
          double rest = 1.0;
          for (int b = 0; b < 63; ++b) {
            const double v = rest * u(rng) * 0.2;
            ch[static_cast<std::size_t>(b)] = v;
            rest -= v;
          }
          ch[63] = rest;
        }
        e = MarkerEvent{e.channel, EventKind::FrameHistogram, t0, t0 + kFrameInterval, Histogram(bins)};
        break;
      }
      default: {
        FaceDetection f{{u(rng) * 100, u(rng) * 100, 1 + u(rng) * 50, 1 + u(rng) * 50}, {200, 200}, {}, std::nullopt};
        for (int d = 0; d < 8; ++d) f.embedding.push_back(u(rng) - 0.5);
        e = MarkerEvent{e.channel, EventKind::FaceDetection, t0, t0 + kFrameInterval, f};
      }
    }
    check_event(e);
    EXPECT_EQ(parse_event(serialize_event(e)), e) << serialize_event(e);
  }
}

TEST(ValidateStream, EmptyIsNotAnError) {
  const auto s = validate_stream({});
  EXPECT_EQ(s.duration(), 0ms);
  EXPECT_TRUE(s.events().empty());
}

TEST(ValidateStream, SortsByStartTime) {
  const auto s = validate_stream({cheer(6000ms, 0.1), cheer(0ms, 0.2)});
  ASSERT_EQ(s.events().size(), 2u);
  EXPECT_EQ(s.events()[0].t_start, 0ms);
  EXPECT_EQ(s.events()[1].t_start, 6000ms);
  EXPECT_EQ(s.duration(), 12000ms);
}

TEST(ValidateStream, MixedChannelsRejected) {
  try {
    validate_stream({cheer(0ms, 0.1, "c1"), cheer(6000ms, 0.1, "c2")});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MixedChannels);
  }
}

TEST(ValidateStream, TiesBrokenByKindNameThenIngestion) {
  MarkerEvent tr{"c1", EventKind::Transcript, 0ms, 1000ms, TranscriptText{"b"}};
  MarkerEvent tr2{"c1", EventKind::Transcript, 0ms, 1000ms, TranscriptText{"a"}};
  const auto s = validate_stream({tr, cheer(0ms, 0.3), tr2, action(0ms, 0.4)});
  ASSERT_EQ(s.events().size(), 4u);
  EXPECT_EQ(s.events()[0].kind, EventKind::ActionScore);
  EXPECT_EQ(s.events()[1].kind, EventKind::CheerScore);
  EXPECT_EQ(s.events()[2].text(), "b");
  EXPECT_EQ(s.events()[3].text(), "a");
}

TEST(ValidateStream, IdempotentAndPermutationInvariant) {
  std::mt19937_64 rng(5);
  std::vector<MarkerEvent> events;
  for (int i = 0; i < 60; ++i) {
    const StreamTime t{static_cast<std::int64_t>(rng() % 20) * 1000};
    if (i % 2 == 0) {
      events.push_back(cheer(t, 0.01 * (i % 50)));
    } else {
      events.push_back(action(t, 0.01 * (i % 70)));
    }
  }
  const auto base = validate_stream(events);
  EXPECT_EQ(validate_stream(base.events()), base);
  for (int trial = 0; trial < 20; ++trial) {
    auto shuffled = events;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto other = validate_stream(shuffled);
    // Equal up to the ingestion-order tie break: compare as time/kind/score tuples.
    ASSERT_EQ(other.events().size(), base.events().size());
    EXPECT_EQ(other.duration(), base.duration());
    for (std::size_t i = 0; i < base.events().size(); ++i) {
      EXPECT_EQ(other.events()[i].t_start, base.events()[i].t_start);
      EXPECT_EQ(other.events()[i].kind, base.events()[i].kind);
    }
  }
}

TEST(Slice, ClosedIntervalBoundaryTouchCounts) {
  const auto s = validate_stream({cheer(0ms, 0.5)});
  EXPECT_EQ(s.slice(EventKind::CheerScore, 6000ms, 7000ms).size(), 1u);
  EXPECT_TRUE(s.slice(EventKind::CheerScore, 7000ms, 8000ms).empty());
  EXPECT_TRUE(s.slice(EventKind::ActionScore, 0ms, 8000ms).empty());
}

TEST(Slice, ActionsAtOneFps) {
  std::vector<MarkerEvent> events;
  for (std::int64_t t = 0; t < 10000; t += 1000) events.push_back(action(StreamTime{t}, 0.5));
  const auto s = validate_stream(events);
  const auto got = s.slice(EventKind::ActionScore, 2500ms, 4500ms);
  ASSERT_EQ(got.size(), 3u);
  EXPECT_EQ(got[0].t_start, 2000ms);
  EXPECT_EQ(got[1].t_start, 3000ms);
  EXPECT_EQ(got[2].t_start, 4000ms);
}

// slice agrees with a linear scan and returns everything over [0, duration].
TEST(Slice, MatchesLinearScan) {
  std::mt19937_64 rng(3);
  std::vector<MarkerEvent> events;
  for (int i = 0; i < 200; ++i) {
    const StreamTime t{static_cast<std::int64_t>(rng() % 100000)};
    events.push_back(i % 3 == 0 ? cheer(t, 0.1)
                                : MarkerEvent{"c1", EventKind::Transcript, t,
                                              t + StreamTime{static_cast<std::int64_t>(rng() % 20000)},
                                              TranscriptText{"x"}});
  }
  const auto s = validate_stream(events);
  for (int trial = 0; trial < 200; ++trial) {
    StreamTime a{static_cast<std::int64_t>(rng() % 120000)};
    StreamTime b{static_cast<std::int64_t>(rng() % 120000)};
    if (b < a) std::swap(a, b);
    for (EventKind kind : {EventKind::CheerScore, EventKind::Transcript}) {
      std::vector<MarkerEvent> expect;
      for (const auto& e : s.events()) {
        if (e.kind == kind && e.t_start <= b && e.t_end >= a) expect.push_back(e);
      }
      EXPECT_EQ(s.slice(kind, a, b), expect);
    }
  }
  EXPECT_EQ(s.slice(EventKind::CheerScore, 0ms, s.duration()).size(), s.of_kind(EventKind::CheerScore).size());
}

}  // namespace
}  // namespace hlc
