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

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hlc/error.hpp"
#include "hlc/highlight_engine.hpp"
#include "hlc/lexical_excitement.hpp"
#include "hlc/marker_stream.hpp"

namespace hlc {

enum class ReviewStatus { New, Reviewed, Published, Rejected };

std::string_view review_status_name(ReviewStatus status);
// Throws InvariantViolation on an unknown name.
ReviewStatus review_status_from_name(std::string_view name);
// new -> reviewed | rejected; reviewed -> published | rejected.
bool review_transition_allowed(ReviewStatus from, ReviewStatus to);

struct HighlightRecord {
  Highlight highlight;
  ReviewStatus review_status = ReviewStatus::New;
  std::int64_t created_at = 0;  // wall clock, ms since the Unix epoch

  friend bool operator==(const HighlightRecord&, const HighlightRecord&) = default;
};

std::string record_to_json(const HighlightRecord& record);
HighlightRecord record_from_json(std::string_view text);

struct QueryFilter {
  std::optional<std::string> player;  // full name or any contiguous part, case-insensitive
  std::optional<int> hole;
  std::optional<double> min_score;
  std::optional<std::string> channel;
  std::optional<ReviewStatus> status;
  std::size_t limit = 50;

  void validate() const;
  bool matches(const HighlightRecord& record) const;
};

// Builds a filter from URL query parameters. Throws MalformedRecord or
// InvariantViolation naming the offending parameter.
QueryFilter query_filter_from_params(const std::multimap<std::string, std::string>& params);

struct RecordError {
  std::size_t line = 0;  // 1-based line within the batch
  ErrorCode code = ErrorCode::MalformedRecord;
  std::string field;
  std::string message;
};

struct IngestResult {
  std::size_t accepted = 0;
  bool duplicate = false;
  std::vector<RecordError> errors;
  std::size_t highlights_changed = 0;
};

std::string ingest_result_to_json(const IngestResult& result);

struct PlayerCount {
  std::string player;
  std::size_t highlights = 0;
};

// Wall-clock timings of accepted ingest batches, curation included.
struct ServiceMetrics {
  std::uint64_t batches = 0;
  std::int64_t last_ingest_us = 0;
  std::int64_t max_ingest_us = 0;
  std::int64_t total_ingest_us = 0;
};

struct ServiceOptions {
  std::filesystem::path data_dir;  // empty keeps everything in memory
  EngineConfig engine;
  ExcitementLexicon lexicon = default_lexicon();
  std::vector<std::string> roster;
  std::function<std::int64_t()> clock;  // wall clock by default
};

// Ingestion, curation and review state behind one append-only log. Writes are
// durable before they are acknowledged; a restart replays the log.
class CuratorService {
 public:
  explicit CuratorService(ServiceOptions options);
  ~CuratorService();
  CuratorService(const CuratorService&) = delete;
  CuratorService& operator=(const CuratorService&) = delete;

  // One event record per line. Records that fail to parse are reported and
  // skipped. A byte-identical repeat of an earlier batch accepts nothing.
  IngestResult ingest_events(std::string_view channel, std::string_view jsonl);

  std::vector<HighlightRecord> query_highlights(const QueryFilter& filter) const;
  // Throws UnknownId.
  HighlightRecord get_highlight(std::string_view id) const;
  // Throws UnknownId or IllegalTransition.
  HighlightRecord set_review_status(std::string_view id, ReviewStatus status);

  std::vector<PlayerCount> players() const;
  std::size_t highlight_count() const;
  std::size_t channel_count() const;
  std::size_t event_count(std::string_view channel) const;
  ServiceMetrics metrics() const;

 private:
  struct Channel {
    std::mutex mutex;
    std::vector<MarkerEvent> events;
    std::set<std::uint64_t> batches;
  };
  using Records = std::map<std::string, HighlightRecord, std::less<>>;

  std::shared_ptr<const Records> snapshot() const;
  Channel& channel_state(std::string_view channel);
  // Re-curates a channel and replaces records whose bout ends at or after
  // `from`. Caller holds the channel mutex. Returns the number changed.
  std::size_t reconcile(std::string_view channel, const Channel& state, StreamTime from);
  void append_log(const std::string& line);
  void replay();

  ServiceOptions options_;
  mutable std::mutex snapshot_mutex_;
  std::shared_ptr<const Records> records_;
  std::mutex write_mutex_;  // serializes log appends with snapshot publication
  mutable std::mutex channels_mutex_;
  std::map<std::string, std::unique_ptr<Channel>, std::less<>> channels_;
  int log_fd_ = -1;
  mutable std::mutex metrics_mutex_;
  ServiceMetrics metrics_;
};

}  // namespace hlc
