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

#include "hlc/face_bootstrap.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cmath>
#include <map>
#include <optional>
#include <set>

#include <json.hpp>

#include "hlc/error.hpp"

namespace hlc {
namespace {

constexpr double kBoxExpansion = 1.4;
constexpr std::size_t kExactSearchLimit = 16;

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    d += diff * diff;
  }
  return d;
}

double selection_score(const FaceCandidate& c) { return c.box.w * c.box.h * c.centrality; }

std::vector<double> mean_of(std::span<const std::vector<double>> points, std::span<const int> assignments,
                            int cluster) {
  std::vector<double> mean(points.front().size(), 0.0);
  std::size_t n = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (assignments[i] != cluster) continue;
    for (std::size_t d = 0; d < mean.size(); ++d) mean[d] += points[i][d];
    ++n;
  }
  if (n == 0) return {};
  for (double& v : mean) v /= static_cast<double>(n);
  return mean;
}

// Lowest-objective split into two non-empty clusters by enumeration. Walks the
// subsets in Gray-code order so each step moves one point.
std::vector<int> best_partition(std::span<const std::vector<double>> points) {
  const std::size_t n = points.size();
  const std::size_t dim = points.front().size();
  std::vector<double> total(dim, 0.0);
  for (const auto& p : points) {
    for (std::size_t d = 0; d < dim; ++d) total[d] += p[d];
  }
  std::vector<double> sum1(dim, 0.0);
  std::vector<int> member(n, 0);
  std::size_t n1 = 0;
  std::uint32_t best_mask = 1;
  double best_gain = -1.0;
  const std::uint32_t count = 1u << (n - 1);
  for (std::uint32_t g = 1; g < count; ++g) {
    const auto i = static_cast<std::size_t>(std::countr_zero(g)) + 1;  // point 0 stays put
    const double sign = member[i] ? -1.0 : 1.0;
    member[i] ^= 1;
    n1 = member[i] ? n1 + 1 : n1 - 1;
    for (std::size_t d = 0; d < dim; ++d) sum1[d] += sign * points[i][d];
    if (n1 == 0) continue;
    // Objective = sum |x|^2 - |S0|^2 / n0 - |S1|^2 / n1; maximize the subtracted part.
    double s0 = 0.0;
    double s1 = 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
      s0 += (total[d] - sum1[d]) * (total[d] - sum1[d]);
      s1 += sum1[d] * sum1[d];
    }
    const double gain = s0 / static_cast<double>(n - n1) + s1 / static_cast<double>(n1);
    if (gain > best_gain) {
      best_gain = gain;
      best_mask = g ^ (g >> 1);
    }
  }
  std::vector<int> out(n, 0);
  for (std::size_t i = 1; i < n; ++i) out[i] = static_cast<int>((best_mask >> (i - 1)) & 1u);
  return out;
}

}  // namespace

void FaceBootstrapConfig::validate() const {
  if (harvest_window.count() <= 0) throw Error(ErrorCode::ConfigInvalid, "face_bootstrap.harvest_window", "must be positive");
  if (min_height_px < 0) throw Error(ErrorCode::ConfigInvalid, "face_bootstrap.min_height_px", "must be non-negative");
  if (kmeans_max_iters < 1) throw Error(ErrorCode::ConfigInvalid, "face_bootstrap.kmeans_max_iters", "must be >= 1");
  if (smooth_gap.count() < 0) throw Error(ErrorCode::ConfigInvalid, "face_bootstrap.smooth_gap", "must be non-negative");
  if (!(smooth_similarity >= -1.0 && smooth_similarity <= 1.0)) {
    throw Error(ErrorCode::ConfigInvalid, "face_bootstrap.smooth_similarity", "must lie in [-1, 1]");
  }
}

FaceBootstrapConfig face_bootstrap_config_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ConfigInvalid, "", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::ConfigInvalid, "", "config must be a JSON object");
  FaceBootstrapConfig cfg;
  const auto section = doc.find("face_bootstrap");
  if (section == doc.end()) return cfg;
  if (!section->is_object()) throw Error(ErrorCode::ConfigInvalid, "face_bootstrap", "expected an object");

  static const std::set<std::string> known = {"harvest_window", "min_height_px", "kmeans_max_iters", "smooth_gap",
                                              "smooth_similarity"};
  for (const auto& [key, _] : section->items()) {
    if (!known.contains(key)) throw Error(ErrorCode::ConfigInvalid, "face_bootstrap." + key, "unknown config key");
  }
  auto integer = [&](const char* key) -> std::optional<std::int64_t> {
    const auto it = section->find(key);
    if (it == section->end()) return std::nullopt;
    if (!it->is_number_integer()) {
      throw Error(ErrorCode::ConfigInvalid, std::string("face_bootstrap.") + key, "expected an integer");
    }
    return it->get<std::int64_t>();
  };
  if (auto v = integer("harvest_window")) cfg.harvest_window = Millis{*v};
  if (auto v = integer("min_height_px")) cfg.min_height_px = static_cast<int>(*v);
  if (auto v = integer("kmeans_max_iters")) cfg.kmeans_max_iters = static_cast<int>(*v);
  if (auto v = integer("smooth_gap")) cfg.smooth_gap = Millis{*v};
  if (const auto it = section->find("smooth_similarity"); it != section->end()) {
    if (!it->is_number()) throw Error(ErrorCode::ConfigInvalid, "face_bootstrap.smooth_similarity", "expected a number");
    cfg.smooth_similarity = it->get<double>();
  }
  cfg.validate();
  return cfg;
}

std::string face_bootstrap_config_to_json(const FaceBootstrapConfig& cfg) {
  nlohmann::ordered_json out;
  out["harvest_window"] = cfg.harvest_window.count();
  out["min_height_px"] = cfg.min_height_px;
  out["kmeans_max_iters"] = cfg.kmeans_max_iters;
  out["smooth_gap"] = cfg.smooth_gap.count();
  out["smooth_similarity"] = cfg.smooth_similarity;
  return out.dump(2);
}

double centrality(const Box& box, const FrameDims& frame) {
  const double w = frame.width;
  const double h = frame.height;
  const double dx = box.x + box.w / 2.0 - w / 2.0;
  const double dy = box.y + box.h / 2.0 - h / 2.0;
  return std::exp(-(dx * dx + dy * dy) / (0.125 * (w * w + h * h)));
}

FaceCandidate make_candidate(const MarkerEvent& e) {
  const FaceDetection& f = e.face();
  FaceCandidate c;
  c.t = e.t_start;
  c.box = f.box;
  c.frame = f.frame;
  c.embedding = f.embedding;
  c.centrality = centrality(f.box, f.frame);
  c.label = f.label;
  return c;
}

std::vector<FaceCandidate> harvest_candidates(const ValidatedStream& stream, StreamTime graphic_time, Millis window,
                                              int min_height_px) {
  if (window.count() <= 0) throw Error(ErrorCode::InvariantViolation, "window", "harvest window must be positive");
  std::vector<FaceCandidate> out;
  for (const MarkerEvent* e : stream.slice_refs(EventKind::FaceDetection, graphic_time, graphic_time + window)) {
    if (e->t_start < graphic_time || e->face().box.h < min_height_px) continue;
    FaceCandidate c = make_candidate(*e);
    // Events are time-ordered, so a frame's faces are adjacent.
    if (!out.empty() && out.back().t == c.t) {
      if (selection_score(c) > selection_score(out.back())) out.back() = std::move(c);
    } else {
      out.push_back(std::move(c));
    }
  }
  return out;
}

Box expand_box(const Box& box, const FrameDims& frame) {
  const double cx = box.x + box.w / 2.0;
  const double cy = box.y + box.h / 2.0;
  const double w = box.w * kBoxExpansion;
  const double h = box.h * kBoxExpansion;
  const double x0 = std::max(0.0, cx - w / 2.0);
  const double y0 = std::max(0.0, cy - h / 2.0);
  const double x1 = std::min(static_cast<double>(frame.width), cx + w / 2.0);
  const double y1 = std::min(static_cast<double>(frame.height), cy + h / 2.0);
  return {x0, y0, x1 - x0, y1 - y0};
}

double kmeans_objective(std::span<const std::vector<double>> points, std::span<const int> assignments) {
  double total = 0.0;
  for (int k = 0; k < 2; ++k) {
    const auto mean = mean_of(points, assignments, k);
    if (mean.empty()) continue;
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (assignments[i] == k) total += squared_distance(points[i], mean);
    }
  }
  return total;
}

KMeansResult kmeans_two(std::span<const std::vector<double>> points, int max_iters) {
  if (points.size() < 2) throw Error(ErrorCode::TooFewPoints, "embeddings", "k-means needs at least two points");
  const std::size_t dim = points.front().size();
  if (dim == 0) throw Error(ErrorCode::DimensionMismatch, "embeddings", "empty vectors");
  for (const auto& p : points) {
    if (p.size() != dim) throw Error(ErrorCode::DimensionMismatch, "embeddings", "vectors differ in dimension");
  }

  std::size_t a = 0;
  std::size_t b = 1;
  double widest = -1.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const double d = squared_distance(points[i], points[j]);
      if (d > widest) {
        widest = d;
        a = i;
        b = j;
      }
    }
  }

  KMeansResult r;
  r.centroids = {points[a], points[b]};
  std::vector<int> current(points.size(), -1);
  for (int iter = 1; iter <= std::max(1, max_iters); ++iter) {
    std::vector<int> next(points.size());
    std::array<std::size_t, 2> counts{0, 0};
    for (std::size_t i = 0; i < points.size(); ++i) {
      next[i] = squared_distance(points[i], r.centroids[1]) < squared_distance(points[i], r.centroids[0]) ? 1 : 0;
      ++counts[static_cast<std::size_t>(next[i])];
    }
    for (int k = 0; k < 2; ++k) {
      if (counts[static_cast<std::size_t>(k)] != 0) continue;
      // Re-seed an empty cluster with the point farthest from its centroid.
      std::size_t far = 0;
      double far_d = -1.0;
      for (std::size_t i = 0; i < points.size(); ++i) {
        const double d = squared_distance(points[i], r.centroids[static_cast<std::size_t>(next[i])]);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      if (far_d > 0.0) next[far] = k;
    }
    r.iterations = iter;
    if (next == current) break;
    current = std::move(next);
    for (int k = 0; k < 2; ++k) {
      auto mean = mean_of(points, current, k);
      if (!mean.empty()) r.centroids[static_cast<std::size_t>(k)] = std::move(mean);
    }
  }
  r.assignments = std::move(current);

  // Lloyd can settle in a local minimum; small inputs get the exact optimum.
  if (points.size() <= kExactSearchLimit) {
    auto exact = best_partition(points);
    if (exact[a] != 0) {
      for (int& v : exact) v = 1 - v;
    }
    const double lloyd = kmeans_objective(points, r.assignments);
    if (kmeans_objective(points, exact) < lloyd - 1e-12 * (1.0 + lloyd)) {
      r.assignments = std::move(exact);
      for (int k = 0; k < 2; ++k) r.centroids[static_cast<std::size_t>(k)] = mean_of(points, r.assignments, k);
    }
  }
  return r;
}

std::optional<double> PlayerFaceDataset::purity() const {
  std::size_t labeled = 0;
  std::size_t correct = 0;
  for (const auto& c : kept) {
    if (!c.label) continue;
    ++labeled;
    if (*c.label == player) ++correct;
  }
  if (labeled == 0) return std::nullopt;
  return static_cast<double>(correct) / static_cast<double>(labeled);
}

PlayerFaceDataset build_dataset(std::span<const FaceCandidate> candidates, const std::string& player, int max_iters) {
  PlayerFaceDataset ds;
  ds.player = player;
  if (candidates.size() < 2) {
    ds.kept.assign(candidates.begin(), candidates.end());
    ds.low_confidence = true;
    if (!candidates.empty()) ds.cluster_centroids = {candidates[0].embedding, candidates[0].embedding};
    return ds;
  }

  std::vector<std::vector<double>> embeddings;
  embeddings.reserve(candidates.size());
  for (const auto& c : candidates) embeddings.push_back(c.embedding);
  const KMeansResult km = kmeans_two(embeddings, max_iters);
  ds.cluster_centroids = km.centroids;

  std::array<std::size_t, 2> size{0, 0};
  std::array<double, 2> central{0.0, 0.0};
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto k = static_cast<std::size_t>(km.assignments[i]);
    ++size[k];
    central[k] += candidates[i].centrality;
  }
  int keep = size[1] > size[0] ? 1 : 0;
  if (size[0] == size[1] && central[1] / static_cast<double>(size[1]) > central[0] / static_cast<double>(size[0])) {
    keep = 1;
  }

  // One face per frame within the kept cluster.
  std::map<StreamTime, std::size_t> best_in_frame;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (km.assignments[i] != keep) continue;
    auto [it, inserted] = best_in_frame.emplace(candidates[i].t, i);
    if (!inserted && selection_score(candidates[i]) > selection_score(candidates[it->second])) it->second = i;
  }
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const bool kept = km.assignments[i] == keep && best_in_frame.at(candidates[i].t) == i;
    (kept ? ds.kept : ds.rejected).push_back(candidates[i]);
  }
  return ds;
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "embedding", "vectors differ in dimension");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

std::vector<LabeledPrediction> smooth_labels(std::span<const LabeledPrediction> predictions, Millis gap,
                                             double similarity_threshold) {
  std::vector<LabeledPrediction> out(predictions.begin(), predictions.end());
  std::size_t begin = 0;
  while (begin < out.size()) {
    std::size_t end = begin + 1;
    while (end < out.size() && out[end].t - out[end - 1].t <= gap &&
           cosine_similarity(out[end - 1].embedding, out[end].embedding) >= similarity_threshold) {
      ++end;
    }

    std::map<std::string, std::size_t> votes;
    std::size_t top = 0;
    for (std::size_t i = begin; i < end; ++i) top = std::max(top, ++votes[out[i].predicted]);
    const LabeledPrediction* pick = nullptr;
    for (std::size_t i = begin; i < end; ++i) {
      if (votes[out[i].predicted] != top) continue;
      if (!pick || out[i].confidence > pick->confidence) pick = &out[i];
    }
    const std::string label = pick->predicted;
    for (std::size_t i = begin; i < end; ++i) out[i].predicted = label;
    begin = end;
  }
  return out;
}

std::string dataset_summary_json(const PlayerFaceDataset& ds) {
  nlohmann::ordered_json out;
  out["type"] = "summary";
  out["player"] = ds.player;
  out["kept"] = ds.kept.size();
  out["rejected"] = ds.rejected.size();
  out["low_confidence"] = ds.low_confidence;
  const auto purity = ds.purity();
  out["purity"] = purity ? nlohmann::ordered_json(*purity) : nlohmann::ordered_json(nullptr);
  return out.dump();
}

std::string candidate_json(const FaceCandidate& c, bool kept) {
  const Box crop = expand_box(c.box, c.frame);
  nlohmann::ordered_json out;
  out["type"] = "candidate";
  out["status"] = kept ? "kept" : "rejected";
  out["t"] = c.t.count();
  out["box"] = {c.box.x, c.box.y, c.box.w, c.box.h};
  out["crop"] = {crop.x, crop.y, crop.w, crop.h};
  out["frame"] = {c.frame.width, c.frame.height};
  out["centrality"] = c.centrality;
  if (c.label) out["label"] = *c.label;
  return out.dump();
}

}  // namespace hlc
