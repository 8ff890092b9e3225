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

#include "hlc/shot_boundary.hpp"

#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>

#include "hlc/error.hpp"

namespace hlc {
namespace {

std::uint32_t read_u32_le(std::istream& in, const char* field) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) {
    throw Error(ErrorCode::MalformedRecord, field, "truncated frame header");
  }
  return std::uint32_t{b[0]} | (std::uint32_t{b[1]} << 8) | (std::uint32_t{b[2]} << 16) |
         (std::uint32_t{b[3]} << 24);
}

void write_u32_le(std::ostream& out, std::uint32_t v) {
  const char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                     static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
  out.write(b, 4);
}

}  // namespace

Histogram::Histogram(std::array<std::vector<double>, kChannels> channels, bool blank)
    : channels_(std::move(channels)), blank_(blank) {
  const std::size_t bins = channels_[0].size();
  if (bins == 0) throw Error(ErrorCode::InvariantViolation, "bins", "histogram has no bins");
  for (std::size_t c = 0; c < kChannels; ++c) {
    const auto& ch = channels_[c];
    const std::string field = "bins[" + std::to_string(c) + "]";
    if (ch.size() != bins) {
      throw Error(ErrorCode::InvariantViolation, field, "channels differ in bin count");
    }
    double sum = 0.0;
    for (double v : ch) {
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw Error(ErrorCode::InvariantViolation, field, "bins must be finite and non-negative");
      }
      sum += v;
    }
    if (blank_) {
      if (sum != 0.0) {
        throw Error(ErrorCode::InvariantViolation, field, "blank frame must have all-zero bins");
      }
    } else if (std::abs(sum - 1.0) > kSumTolerance) {
      throw Error(ErrorCode::InvariantViolation, field,
                  "channel is not L1-normalized (sum " + std::to_string(sum) + ")");
    }
  }
}

Histogram Histogram::blank_frame(std::size_t bins) {
  std::array<std::vector<double>, kChannels> zero;
  zero.fill(std::vector<double>(bins, 0.0));
  return Histogram(std::move(zero), true);
}

RgbFrame read_raw_frame(std::istream& in) {
  RgbFrame f;
  f.rows = read_u32_le(in, "rows");
  f.cols = read_u32_le(in, "cols");
  const std::size_t n = std::size_t{f.rows} * f.cols * 3;
  f.rgb.resize(n);
  if (n > 0 && !in.read(reinterpret_cast<char*>(f.rgb.data()), static_cast<std::streamsize>(n))) {
    throw Error(ErrorCode::MalformedRecord, "pixels", "truncated pixel data");
  }
  return f;
}

void write_raw_frame(std::ostream& out, const RgbFrame& frame) {
  write_u32_le(out, frame.rows);
  write_u32_le(out, frame.cols);
  out.write(reinterpret_cast<const char*>(frame.rgb.data()),
            static_cast<std::streamsize>(frame.rgb.size()));
}

void BoundaryConfig::validate() const {
  if (!(distance_threshold > 0.0 && distance_threshold <= 1.0)) {
    throw Error(ErrorCode::ConfigInvalid, "distance_threshold", "must lie in (0, 1]");
  }
}

Histogram histogram_of_frame(const RgbFrame& frame) {
  if (frame.rows == 0 || frame.cols == 0) {
    throw Error(ErrorCode::EmptyFrame, "rows", "frame has no pixels");
  }
  const std::size_t pixels = std::size_t{frame.rows} * frame.cols;
  if (frame.rgb.size() != pixels * 3) {
    throw Error(ErrorCode::MalformedRecord, "pixels", "pixel buffer does not match dimensions");
  }
  std::array<std::vector<std::size_t>, Histogram::kChannels> counts;
  counts.fill(std::vector<std::size_t>(Histogram::kDefaultBins, 0));
  for (std::size_t p = 0; p < pixels; ++p) {
    for (std::size_t c = 0; c < Histogram::kChannels; ++c) {
      ++counts[c][frame.rgb[p * 3 + c] / 4];
    }
  }
  std::array<std::vector<double>, Histogram::kChannels> bins;
  for (std::size_t c = 0; c < Histogram::kChannels; ++c) {
    bins[c].resize(Histogram::kDefaultBins);
    for (std::size_t b = 0; b < Histogram::kDefaultBins; ++b) {
      bins[c][b] = static_cast<double>(counts[c][b]) / static_cast<double>(pixels);
    }
  }
  return Histogram(std::move(bins));
}

double frame_distance(const Histogram& a, const Histogram& b) {
  if (a.bins_per_channel() != b.bins_per_channel()) {
    throw Error(ErrorCode::LayoutMismatch, "bins",
                "histograms have " + std::to_string(a.bins_per_channel()) + " and " +
                    std::to_string(b.bins_per_channel()) + " bins per channel");
  }
  double total = 0.0;
  for (std::size_t c = 0; c < Histogram::kChannels; ++c) {
    const auto ca = a.channel(c);
    const auto cb = b.channel(c);
    for (std::size_t i = 0; i < ca.size(); ++i) total += std::abs(ca[i] - cb[i]);
  }
  return total / (2.0 * Histogram::kChannels);
}

BoundaryDetector::BoundaryDetector(BoundaryConfig cfg) : cfg_(cfg) { cfg_.validate(); }

std::optional<StreamTime> BoundaryDetector::push(StreamTime t, const Histogram& hist) {
  std::optional<StreamTime> cut;
  if (prev_) {
    if (t <= prev_->first) {
      throw Error(ErrorCode::InvariantViolation, "t_start",
                  "frames must be strictly increasing in time");
    }
    if (frame_distance(prev_->second, hist) > cfg_.distance_threshold) cut = t;
  }
  prev_.emplace(t, hist);
  return cut;
}

std::vector<StreamTime> detect_boundaries(std::span<const std::pair<StreamTime, Histogram>> frames,
                                          const BoundaryConfig& cfg) {
  BoundaryDetector detector(cfg);
  std::vector<StreamTime> cuts;
  for (const auto& [t, hist] : frames) {
    if (auto cut = detector.push(t, hist)) cuts.push_back(*cut);
  }
  return cuts;
}

}  // namespace hlc
