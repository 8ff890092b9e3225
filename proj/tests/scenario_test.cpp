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

#include <chrono>

#include <gtest/gtest.h>

#include "hlc/error.hpp"
#include "hlc/face_bootstrap.hpp"

namespace hlc {
namespace {

using namespace std::chrono_literals;

std::string dump(const ValidatedStream& s) {
  std::string out;
  for (const auto& e : s.events()) out += serialize_event(e) + "\n";
  return out;
}

ErrorCode spec_error(const ScenarioSpec& spec) {
  try {
    generate_stream(spec);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected SpecOutOfBounds";
  return ErrorCode::IoError;
}

TEST(RenderGraphicText, Format) {
  EXPECT_EQ(render_graphic_text("Sergio Garcia", 13, 2), "S. Garcia  Hole 13  Shot 2");
  EXPECT_EQ(render_graphic_text("Ronaldinho", 1, 1), "Ronaldinho  Hole 1  Shot 1");
}

TEST(GenerateStream, NoShotsNoHighlights) {
  ScenarioSpec spec;
  spec.seed = 3;
  spec.duration = 120000ms;
  const auto sc = generate_stream(spec);
  EXPECT_TRUE(sc.truth.empty());
  for (const auto* e : sc.stream.of_kind(EventKind::CheerScore)) EXPECT_LT(e->score(), 0.0);
  EXPECT_EQ(sc.stream.of_kind(EventKind::CheerScore).size(), 20u);
  EXPECT_TRUE(curate(sc.stream, default_lexicon(), sc.roster).empty());
}

TEST(GenerateStream, FixtureYieldsHandEvaluatedHighlight) {
  ScenarioSpec spec;
  spec.seed = 1;
  spec.shots = {fixture_shot()};
  const auto sc = generate_stream(spec);
  const auto out = curate(sc.stream, default_lexicon(), sc.roster);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out, sc.truth);
  const Highlight& h = out[0];
  EXPECT_EQ(h.t_start, 35000ms);
  EXPECT_EQ(h.t_end, 104500ms);
  EXPECT_EQ(h.components, (ComponentScores{0.8, 0.6, 0.8, 0.9}));
  EXPECT_NEAR(h.fused_score, 0.787, 1e-12);
  EXPECT_EQ(h.player, "Sergio Garcia");
  EXPECT_EQ(h.hole, 13);
}

TEST(GenerateStream, Deterministic) {
  ScenarioSpec spec;
  spec.seed = 99;
  spec.random_shots = 6;
  spec.faces = true;
  spec.noise = {0.1, 0.05};
  const auto a = generate_stream(spec);
  const auto b = generate_stream(spec);
  EXPECT_EQ(dump(a.stream), dump(b.stream));
  EXPECT_EQ(a.truth, b.truth);
  spec.seed = 100;
  EXPECT_NE(dump(generate_stream(spec).stream), dump(a.stream));
}

TEST(GenerateStream, TenShotsInTimeOrder) {
  ScenarioSpec spec;
  spec.seed = 5;
  spec.random_shots = 10;
  const auto sc = generate_stream(spec);
  ASSERT_EQ(sc.shots.size(), 10u);
  ASSERT_EQ(sc.truth.size(), 10u);
  for (std::size_t i = 1; i < sc.shots.size(); ++i) EXPECT_LT(sc.shots[i - 1].graphic_time, sc.shots[i].graphic_time);
}

// With zero noise, curate reproduces the plan exactly.
TEST(GenerateStream, CurateEqualsTruthOverSeeds) {
  const auto t0 = std::chrono::steady_clock::now();
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    ScenarioSpec spec;
    spec.seed = seed;
    spec.random_shots = 1 + static_cast<int>(seed % 10);
    const auto sc = generate_stream(spec);
    const auto out = curate(sc.stream, default_lexicon(), sc.roster);
    ASSERT_EQ(out.size(), sc.truth.size()) << "seed " << seed;
    for (std::size_t i = 0; i < out.size(); ++i) {
      EXPECT_EQ(out[i], sc.truth[i]) << "seed " << seed << "\n"
                                     << highlight_to_json(out[i]) << "\n"
                                     << highlight_to_json(sc.truth[i]);
      EXPECT_EQ(out[i].t_start, std::max(0ms, out[i].graphic_time - 5000ms));
    }
  }
  const auto elapsed = std::chrono::steady_clock::now() - t0;
  EXPECT_LT(elapsed, 5s);
}

TEST(GenerateStream, ExplicitAndRandomShotsCoexist) {
  ScenarioSpec spec;
  spec.seed = 8;
  spec.shots = {fixture_shot()};
  spec.random_shots = 3;
  const auto sc = generate_stream(spec);
  EXPECT_EQ(sc.truth.size(), 4u);
  EXPECT_EQ(curate(sc.stream, default_lexicon(), sc.roster), sc.truth);
}

TEST(GenerateStream, SpecOutOfBounds) {
  ScenarioSpec spec;
  spec.shots = {fixture_shot()};
  spec.duration = 60000ms;
  EXPECT_EQ(spec_error(spec), ErrorCode::SpecOutOfBounds);

  spec = {};
  auto far = fixture_shot();
  far.graphic_time = 10000ms;  // bout ends 92 s later
  spec.shots = {far};
  EXPECT_EQ(spec_error(spec), ErrorCode::SpecOutOfBounds);

  auto stray = fixture_shot();
  stray.boundary = 110000ms;
  spec.shots = {stray};
  EXPECT_EQ(spec_error(spec), ErrorCode::SpecOutOfBounds);

  auto unknown = fixture_shot();
  unknown.player = "Nobody Special";
  spec.shots = {unknown};
  EXPECT_EQ(spec_error(spec), ErrorCode::SpecOutOfBounds);

  auto phrase = fixture_shot();
  phrase.transcripts = {{100000ms, {"not a lexicon phrase"}}};
  spec.shots = {phrase};
  EXPECT_EQ(spec_error(spec), ErrorCode::SpecOutOfBounds);

  spec.shots = {fixture_shot(), fixture_shot()};
  EXPECT_EQ(spec_error(spec), ErrorCode::SpecOutOfBounds);

  spec = {};
  spec.noise.ocr_corruption_rate = 1.5;
  EXPECT_EQ(spec_error(spec), ErrorCode::SpecOutOfBounds);
}

TEST(GenerateStream, NoiseKeepsStreamValid) {
  ScenarioSpec spec;
  spec.seed = 17;
  spec.random_shots = 8;
  spec.noise = {0.2, 0.3};
  const auto sc = generate_stream(spec);
  const auto out = curate(sc.stream, default_lexicon(), sc.roster);
  EXPECT_GE(out.size(), sc.truth.size());
  for (const auto& e : sc.stream.events()) EXPECT_NO_THROW(check_event(e));
}

TEST(GenerateStream, FacesAfterGraphicsBootstrapCleanly) {
  ScenarioSpec spec;
  spec.seed = 23;
  spec.random_shots = 5;
  spec.faces = true;
  const auto sc = generate_stream(spec);
  for (const auto& shot : sc.shots) {
    const FaceBootstrapConfig fc;
    const auto cands = harvest_candidates(sc.stream, shot.graphic_time, fc.harvest_window, fc.min_height_px);
    ASSERT_GE(cands.size(), 2u);
    const auto ds = build_dataset(cands, shot.player);
    ASSERT_TRUE(ds.purity());
    EXPECT_GE(*ds.purity(), 0.95) << shot.player;
  }
}

TEST(ScenarioSpecJson, RoundTrip) {
  ScenarioSpec spec;
  spec.seed = 42;
  spec.channel = "masters-1";
  spec.duration = 600000ms;
  spec.shots = {fixture_shot()};
  spec.random_shots = 2;
  spec.noise = {0.1, 0.2};
  spec.faces = true;
  const std::string text = scenario_spec_to_json(spec);
  const auto back = scenario_spec_from_json(text);
  EXPECT_EQ(scenario_spec_to_json(back), text);
  EXPECT_EQ(dump(generate_stream(back).stream), dump(generate_stream(spec).stream));
  EXPECT_THROW(scenario_spec_from_json("[]"), Error);
  EXPECT_THROW(scenario_spec_from_json(R"({"seed": "x"})"), Error);
}

}  // namespace
}  // namespace hlc
