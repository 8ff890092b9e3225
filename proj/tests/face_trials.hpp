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

#include <random>
#include <string>
#include <vector>

#include "hlc/face_bootstrap.hpp"

namespace hlc::testing {

// 70% player faces and 30% crowd faces in 16 dimensions, the crowd centroid
// offset by 6 sigma along one axis. Returns the kept-cluster purity.
inline double purity_trial(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  const std::size_t dim = 16;
  const std::size_t n = 20 + rng() % 40;
  const std::size_t n_player = n * 7 / 10;
  std::vector<FaceCandidate> cands;
  for (std::size_t i = 0; i < n; ++i) {
    const bool player = i < n_player;
    FaceCandidate c;
    c.t = StreamTime{static_cast<std::int64_t>(i) * 1000};
    c.box = {450, 450, 100, 100};
    c.frame = {1000, 1000};
    c.centrality = centrality(c.box, c.frame);
    c.embedding.resize(dim);
    for (auto& x : c.embedding) x = g(rng);
    if (!player) c.embedding[0] += 6.0;
    c.label = player ? "P" : "crowd";
    cands.push_back(std::move(c));
  }
  return build_dataset(cands, "P").purity().value_or(0.0);
}

struct SmoothingOutcome {
  double raw_accuracy = 0.0;
  double smoothed_accuracy = 0.0;
};

// Six runs of 5-10 frames of one identity each, with 30% of labels replaced
// by a wrong identity.
inline SmoothingOutcome smoothing_trial(std::uint64_t seed) {
  const std::vector<std::string> names = {"A", "B", "C", "D", "E"};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u;
  std::normal_distribution<double> g(0.0, 0.05);
  std::vector<LabeledPrediction> preds;
  std::vector<std::string> truth;
  std::int64_t t = 0;
  for (int run = 0; run < 6; ++run) {
    const std::size_t who = rng() % names.size();
    const int len = 5 + static_cast<int>(rng() % 6);
    for (int k = 0; k < len; ++k) {
      std::vector<double> emb(names.size(), 0.0);
      emb[who] = 1.0;
      for (auto& x : emb) x += g(rng);
      std::string label = names[who];
      if (u(rng) < 0.3) label = names[(who + 1 + rng() % (names.size() - 1)) % names.size()];
      preds.push_back({StreamTime{t}, std::move(emb), std::move(label), u(rng)});
      truth.push_back(names[who]);
      t += 1000;
    }
    t += 5000;
  }
  const FaceBootstrapConfig cfg;
  const auto smoothed = smooth_labels(preds, cfg.smooth_gap, cfg.smooth_similarity);
  SmoothingOutcome out;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    out.raw_accuracy += preds[i].predicted == truth[i];
    out.smoothed_accuracy += smoothed[i].predicted == truth[i];
  }
  out.raw_accuracy /= static_cast<double>(preds.size());
  out.smoothed_accuracy /= static_cast<double>(preds.size());
  return out;
}

}  // namespace hlc::testing
