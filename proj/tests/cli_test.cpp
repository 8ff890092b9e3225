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

#include <thread>

#include <gtest/gtest.h>
#include <httplib.h>
#include <json.hpp>

#include "hlc/evaluation.hpp"
#include "hlc/face_bootstrap.hpp"
#include "hlc/highlight_engine.hpp"
#include "hlc/scenario.hpp"
#include "process_util.hpp"

namespace hlc {
namespace {

using namespace std::chrono_literals;
using json = nlohmann::json;
using testing::run_command;
using testing::slurp;
using testing::spit;
using testing::TempDir;

const std::string kHlc = HLC_BINARY;
const std::string kConfigDir = HLC_CONFIG_DIR;

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

TEST(Cli, ShippedConfigEqualsDefaults) {
  const std::string text = slurp(kConfigDir + "/default.json");
  EXPECT_EQ(engine_config_to_json(engine_config_from_json(text)), engine_config_to_json({}));
  EXPECT_EQ(face_bootstrap_config_to_json(face_bootstrap_config_from_json(text)), face_bootstrap_config_to_json({}));
  EXPECT_EQ(parse_roster(slurp(kConfigDir + "/roster.txt")), default_roster());
}

TEST(Cli, RunFixtureYieldsOneHighlight) {
  TempDir dir;
  const auto gen = run_command({kHlc, "gen", "--input", kConfigDir + "/fixture_scenario.json", "--out", dir / "g"});
  ASSERT_EQ(gen.exit_code, 0) << gen.output;
  const auto run = run_command({kHlc, "run", "--input", dir / "g/events.jsonl", "--config",
                                kConfigDir + "/default.json", "--out", dir / "out.jsonl", "--format", "json"});
  ASSERT_EQ(run.exit_code, 0) << run.output;
  const auto out = lines(slurp(dir / "out.jsonl"));
  ASSERT_EQ(out.size(), 1u);
  const Highlight h = highlight_from_json(out[0]);
  EXPECT_NEAR(h.fused_score, 0.787, 1e-12);
  EXPECT_EQ(h.player, "Sergio Garcia");
  const auto report = json::parse(run.output);
  EXPECT_EQ(report["highlights"], 1);
  EXPECT_EQ(report["top"].size(), 1u);
}

TEST(Cli, EmptyInputEmptyOutput) {
  TempDir dir;
  spit(dir / "empty.jsonl", "");
  const auto run = run_command({kHlc, "run", "--input", dir / "empty.jsonl", "--out", dir / "out.jsonl"});
  EXPECT_EQ(run.exit_code, 0) << run.output;
  EXPECT_TRUE(std::filesystem::exists(dir / "out.jsonl"));
  EXPECT_EQ(slurp(dir / "out.jsonl"), "");
}

TEST(Cli, CorruptConfigExitsThreeNamingField) {
  TempDir dir;
  spit(dir / "empty.jsonl", "");
  spit(dir / "bad.json", R"({"tone_window": -4})");
  const auto run =
      run_command({kHlc, "run", "--input", dir / "empty.jsonl", "--config", dir / "bad.json", "--out", dir / "o"});
  EXPECT_EQ(run.exit_code, 3);
  EXPECT_NE(run.output.find("tone_window"), std::string::npos) << run.output;
  spit(dir / "bad.json", R"({"face_bootstrap": {"min_height_px": "tall"}})");
  const auto faces =
      run_command({kHlc, "faces", "--input", dir / "empty.jsonl", "--config", dir / "bad.json", "--out", dir / "f"});
  EXPECT_EQ(faces.exit_code, 3);
  EXPECT_NE(faces.output.find("face_bootstrap.min_height_px"), std::string::npos) << faces.output;
}

TEST(Cli, MalformedEventsExitTwo) {
  TempDir dir;
  spit(dir / "bad.jsonl", "{\"kind\": \"cheer\"}\n");
  const auto run = run_command({kHlc, "run", "--input", dir / "bad.jsonl", "--out", dir / "o"});
  EXPECT_EQ(run.exit_code, 2);
  EXPECT_NE(run.output.find("MalformedRecord"), std::string::npos);
  EXPECT_NE(run.output.find(":1"), std::string::npos) << run.output;
}

TEST(Cli, UsageErrorsExitOne) {
  EXPECT_EQ(run_command({kHlc}).exit_code, 1);
  EXPECT_EQ(run_command({kHlc, "run", "--out", "x"}).exit_code, 1);
  EXPECT_EQ(run_command({kHlc, "run", "--input", "/nonexistent/file", "--out", "x"}).exit_code, 1);
  EXPECT_EQ(run_command({kHlc, "--help"}).exit_code, 0);
}

TEST(Cli, EvalMatchExample) {
  TempDir dir;
  Highlight a;
  a.id = "c1-1";
  a.channel = "c1";
  a.player = "Sergio Garcia";
  a.hole = 13;
  Highlight b = a;
  b.id = "c1-2";
  b.player = "Daniel Berger";
  spit(dir / "h.jsonl", highlight_to_json(a) + "\n" + highlight_to_json(b) + "\n");
  spit(dir / "ref.jsonl", R"({"player": "Sergio Garcia", "hole": 13})" "\n");
  const auto eval = run_command({kHlc, "eval", "--input", dir / "h.jsonl", "--reference", dir / "ref.jsonl",
                                 "--depths", "2", "--format", "json"});
  ASSERT_EQ(eval.exit_code, 0) << eval.output;
  const auto report = json::parse(eval.output);
  ASSERT_EQ(report["rows"].size(), 1u);
  EXPECT_EQ(report["rows"][0]["precision"], 0.5);
  EXPECT_EQ(report["rows"][0]["recall"], 1.0);
  EXPECT_FALSE(report["rows"][0].contains("ndcg"));

  spit(dir / "ref.jsonl", R"({"player": "Sergio Garcia", "hole": 13, "relevance": 2})" "\n"
                          R"({"player": "Daniel Berger", "hole": 13, "relevance": 3})" "\n");
  const auto graded = run_command({kHlc, "eval", "--input", dir / "h.jsonl", "--reference", dir / "ref.jsonl",
                                   "--depths", "2", "--format", "json"});
  ASSERT_EQ(graded.exit_code, 0) << graded.output;
  const double expected = ndcg({{"c1-1", 2.0}, {"c1-2", 3.0}}, 2);
  EXPECT_NEAR(json::parse(graded.output)["rows"][0]["ndcg"].get<double>(), expected, 1e-12);
}

TEST(Cli, EvalEmptyReferenceExitsTwo) {
  TempDir dir;
  spit(dir / "h.jsonl", "");
  spit(dir / "ref.jsonl", "\n");
  const auto eval = run_command({kHlc, "eval", "--input", dir / "h.jsonl", "--reference", dir / "ref.jsonl"});
  EXPECT_EQ(eval.exit_code, 2);
  EXPECT_NE(eval.output.find("EmptyReference"), std::string::npos);
}

TEST(Cli, EvalTwoDepthsTwoRows) {
  TempDir dir;
  spit(dir / "spec.json", R"({"seed": 3, "random_shots": 10})");
  ASSERT_EQ(run_command({kHlc, "gen", "--input", dir / "spec.json", "--out", dir / "g"}).exit_code, 0);
  ASSERT_EQ(run_command({kHlc, "run", "--input", dir / "g/events.jsonl", "--roster", dir / "g/roster.txt", "--out",
                         dir / "out.jsonl"})
                .exit_code,
            0);
  const auto eval = run_command({kHlc, "eval", "--input", dir / "out.jsonl", "--reference", dir / "g/reference.jsonl",
                                 "--depths", "120,500"});
  ASSERT_EQ(eval.exit_code, 0) << eval.output;
  EXPECT_NE(eval.output.find("     120"), std::string::npos) << eval.output;
  EXPECT_NE(eval.output.find("     500"), std::string::npos) << eval.output;
}

TEST(Cli, GenDeterministicAndShotCounts) {
  TempDir dir;
  ASSERT_EQ(run_command({kHlc, "gen", "--seed", "7", "--out", dir / "a"}).exit_code, 0);
  ASSERT_EQ(run_command({kHlc, "gen", "--seed", "7", "--out", dir / "b"}).exit_code, 0);
  for (const char* f : {"events.jsonl", "truth.jsonl", "reference.jsonl", "roster.txt", "spec.json"}) {
    EXPECT_EQ(slurp(dir / (std::string("a/") + f)), slurp(dir / (std::string("b/") + f))) << f;
  }
  EXPECT_EQ(slurp(dir / "a/truth.jsonl"), "");

  spit(dir / "ten.json", R"({"random_shots": 10})");
  ASSERT_EQ(run_command({kHlc, "gen", "--input", dir / "ten.json", "--seed", "7", "--out", dir / "c"}).exit_code, 0);
  EXPECT_EQ(lines(slurp(dir / "c/truth.jsonl")).size(), 10u);

  spit(dir / "bad.json", R"({"random_shots": -1})");
  EXPECT_EQ(run_command({kHlc, "gen", "--input", dir / "bad.json", "--out", dir / "d"}).exit_code, 2);
}

TEST(Cli, FacesOneFilePerPlayer) {
  TempDir dir;
  spit(dir / "spec.json",
       R"({"seed": 5, "faces": true, "random_shots": 2, "roster": ["Sergio Garcia", "Daniel Berger"]})");
  ASSERT_EQ(run_command({kHlc, "gen", "--input", dir / "spec.json", "--out", dir / "g"}).exit_code, 0);
  const auto truth = lines(slurp(dir / "g/truth.jsonl"));
  std::set<std::string> players;
  for (const auto& l : truth) players.insert(*highlight_from_json(l).player);

  const auto faces = run_command({kHlc, "faces", "--input", dir / "g/events.jsonl", "--roster", dir / "g/roster.txt",
                                  "--out", dir / "f", "--format", "json"});
  ASSERT_EQ(faces.exit_code, 0) << faces.output;
  std::size_t files = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir / "f")) {
    ++files;
    const auto content = lines(slurp(entry.path()));
    ASSERT_FALSE(content.empty());
    const auto summary = json::parse(content.back());
    EXPECT_EQ(summary["type"], "summary");
    EXPECT_TRUE(players.contains(summary["player"].get<std::string>()));
    EXPECT_GT(summary["kept"].get<int>(), 0);
    EXPECT_TRUE(summary["purity"].is_number());
  }
  EXPECT_EQ(files, players.size());
}

TEST(Cli, FacesWithoutDetectionsWarns) {
  TempDir dir;
  ASSERT_EQ(run_command({kHlc, "gen", "--input", kConfigDir + "/fixture_scenario.json", "--out", dir / "g"}).exit_code,
            0);
  const auto faces = run_command({kHlc, "faces", "--input", dir / "g/events.jsonl", "--out", dir / "f"});
  EXPECT_EQ(faces.exit_code, 0);
  EXPECT_NE(faces.output.find("warning"), std::string::npos);
  EXPECT_FALSE(std::filesystem::exists(dir / "f") && !std::filesystem::is_empty(dir / "f"));
}

TEST(Cli, RunMultiChannelWithWorkers) {
  TempDir dir;
  std::string all;
  std::vector<Highlight> expected;
  for (int i = 0; i < 3; ++i) {
    ScenarioSpec spec;
    spec.seed = 40 + i;
    spec.channel = "cam" + std::to_string(i);
    spec.random_shots = 3;
    const auto sc = generate_stream(spec);
    for (const auto& e : sc.stream.events()) all += serialize_event(e) + "\n";
    expected.insert(expected.end(), sc.truth.begin(), sc.truth.end());
  }
  std::stable_sort(expected.begin(), expected.end(), highlight_order);
  spit(dir / "all.jsonl", all);
  for (const char* workers : {"1", "3"}) {
    const auto run = run_command({kHlc, "run", "--input", dir / "all.jsonl", "--workers", workers, "--out", dir / "o"});
    ASSERT_EQ(run.exit_code, 0) << run.output;
    const auto out = lines(slurp(dir / "o"));
    ASSERT_EQ(out.size(), expected.size());
    for (std::size_t i = 0; i < out.size(); ++i) EXPECT_EQ(highlight_from_json(out[i]), expected[i]);
  }
}

TEST(Cli, ServeAnswersHealth) {
  TempDir dir;
  testing::ServerProcess server(kHlc, {"serve", "--port", "0", "--data", (dir / "data").string()});
  ASSERT_GT(server.port(), 0);
  httplib::Client client("127.0.0.1", server.port());
  auto res = client.Get("/health");
  ASSERT_TRUE(res);
  EXPECT_EQ(json::parse(res->body)["status"], "ok");
  const int status = server.kill(SIGTERM);
  EXPECT_TRUE(WIFEXITED(status) && WEXITSTATUS(status) == 0);
}

}  // namespace
}  // namespace hlc
