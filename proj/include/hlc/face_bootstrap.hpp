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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hlc/marker_stream.hpp"
#include "hlc/time.hpp"

namespace hlc {

// Tunables for self-supervised face harvesting and test-time smoothing.
struct FaceBootstrapConfig {
  Millis harvest_window{60000};
  int min_height_px = 40;
  int kmeans_max_iters = 100;
  Millis smooth_gap{2000};
  double smooth_similarity = 0.5;

  void validate() const;
};

// Reads the "face_bootstrap" object of a config document; other top-level keys
// are ignored. Throws ConfigInvalid.
FaceBootstrapConfig face_bootstrap_config_from_json(std::string_view text);
std::string face_bootstrap_config_to_json(const FaceBootstrapConfig& cfg);

struct FaceCandidate {
  StreamTime t{0};
  Box box;
  FrameDims frame;
  std::vector<double> embedding;
  double centrality = 0.0;
  std::optional<std::string> label;  // oracle identity when supplied

  friend bool operator==(const FaceCandidate&, const FaceCandidate&) = default;
};

// exp(-|box center - frame center|^2 / (0.125 (W^2 + H^2)))
double centrality(const Box& box, const FrameDims& frame);

FaceCandidate make_candidate(const MarkerEvent& face_event);

// Faces starting in [graphic_time, graphic_time + window] at least min_height_px tall,
// keeping per frame the one with the largest area x centrality.
std::vector<FaceCandidate> harvest_candidates(const ValidatedStream& stream, StreamTime graphic_time, Millis window,
                                              int min_height_px);

// Scales a box by 1.4 about its center, then clips it to the frame.
Box expand_box(const Box& box, const FrameDims& frame);

struct KMeansResult {
  std::vector<int> assignments;  // 0 or 1 per point
  std::array<std::vector<double>, 2> centroids;
  int iterations = 0;
};

// Deterministic two-class Lloyd's k-means. Initial centroids are the first
// farthest pair in index order. Inputs of at most 16 points are also solved
// exactly and the better split is returned. Throws TooFewPoints or
// DimensionMismatch.
KMeansResult kmeans_two(std::span<const std::vector<double>> points, int max_iters);

// Sum of squared distances from each point to its cluster mean.
double kmeans_objective(std::span<const std::vector<double>> points, std::span<const int> assignments);

struct PlayerFaceDataset {
  std::string player;
  std::vector<FaceCandidate> kept;
  std::vector<FaceCandidate> rejected;
  std::array<std::vector<double>, 2> cluster_centroids;
  bool low_confidence = false;

  // Share of kept candidates whose oracle label names the player; nullopt
  // when no kept candidate carries a label.
  std::optional<double> purity() const;
};

PlayerFaceDataset build_dataset(std::span<const FaceCandidate> candidates, const std::string& player,
                                int max_iters = FaceBootstrapConfig{}.kmeans_max_iters);

struct LabeledPrediction {
  StreamTime t{0};
  std::vector<double> embedding;
  std::string predicted;
  double confidence = 0.0;

  friend bool operator==(const LabeledPrediction&, const LabeledPrediction&) = default;
};

double cosine_similarity(std::span<const double> a, std::span<const double> b);

// Replaces each prediction's label with the majority label of its temporal
// run. Ties go to the label of the most confident tied item.
std::vector<LabeledPrediction> smooth_labels(std::span<const LabeledPrediction> predictions, Millis gap,
                                             double similarity_threshold);

std::string dataset_summary_json(const PlayerFaceDataset& dataset);
std::string candidate_json(const FaceCandidate& candidate, bool kept);

}  // namespace hlc
