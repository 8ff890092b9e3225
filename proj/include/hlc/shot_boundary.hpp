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
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "hlc/time.hpp"

namespace hlc {

// Per-channel color histogram of one frame. Each channel is L1-normalized,
// except for declared blank frames whose channels are all zero.
class Histogram {
 public:
  static constexpr std::size_t kChannels = 3;
  static constexpr std::size_t kDefaultBins = 64;
  static constexpr double kSumTolerance = 1e-6;

  // Throws InvariantViolation on negative bins, unequal channel lengths or
  // channels that are neither normalized nor (for blank frames) all zero.
  explicit Histogram(std::array<std::vector<double>, kChannels> channels, bool blank = false);

  static Histogram blank_frame(std::size_t bins = kDefaultBins);

  std::size_t bins_per_channel() const { return channels_[0].size(); }
  std::span<const double> channel(std::size_t c) const { return channels_.at(c); }
  bool blank() const { return blank_; }

  friend bool operator==(const Histogram&, const Histogram&) = default;

 private:
  std::array<std::vector<double>, kChannels> channels_;
  bool blank_ = false;
};

// Raw 8-bit RGB frame, row-major, three bytes per pixel.
struct RgbFrame {
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  std::vector<std::uint8_t> rgb;
};

// Reads the raw test format: rows and cols as little-endian uint32, followed
// by rows*cols RGB triples. Throws MalformedRecord on short input.
RgbFrame read_raw_frame(std::istream& in);
void write_raw_frame(std::ostream& out, const RgbFrame& frame);

struct BoundaryConfig {
  double distance_threshold = 0.35;

  // Throws ConfigInvalid unless the threshold lies in (0, 1].
  void validate() const;
};

// 64 uniform bins over [0, 256) per channel, normalized by pixel count.
Histogram histogram_of_frame(const RgbFrame& frame);

// Half the L1 distance per channel, averaged over channels. In [0, 1] for
// normalized histograms.
double frame_distance(const Histogram& a, const Histogram& b);

// Single-pass detector; feed frames in strictly increasing time order.
class BoundaryDetector {
 public:
  explicit BoundaryDetector(BoundaryConfig cfg = {});

  // Returns t when the frame differs from its predecessor by more than the
  // configured threshold.
  std::optional<StreamTime> push(StreamTime t, const Histogram& hist);

 private:
  BoundaryConfig cfg_;
  std::optional<std::pair<StreamTime, Histogram>> prev_;
};

std::vector<StreamTime> detect_boundaries(std::span<const std::pair<StreamTime, Histogram>> frames,
                                          const BoundaryConfig& cfg = {});

}  // namespace hlc
