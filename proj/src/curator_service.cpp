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

#include "hlc/curator_service.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cerrno>
#include <charconv>
#include <chrono>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hlc/error.hpp"

namespace hlc {
namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

constexpr std::size_t kMaxLimit = 1000;
constexpr const char* kLogName = "curator.log";

constexpr std::array<std::pair<ReviewStatus, std::string_view>, 4> kStatusNames = {{
    {ReviewStatus::New, "new"},
    {ReviewStatus::Reviewed, "reviewed"},
    {ReviewStatus::Published, "published"},
    {ReviewStatus::Rejected, "rejected"},
}};

std::uint64_t fnv1a(std::string_view a, std::string_view b) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&h](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ull;
    }
  };
  mix(a);
  mix(std::string_view("\n", 1));
  mix(b);
  return h;
}

std::string hex(std::uint64_t v) {
  std::ostringstream out;
  out << std::hex << v;
  return out.str();
}

std::uint64_t parse_hex(const std::string& s) {
  std::uint64_t v = 0;
  std::from_chars(s.data(), s.data() + s.size(), v, 16);
  return v;
}

std::vector<std::string> lower_words(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::int64_t wall_clock_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::system_clock::now().time_since_epoch())
      .count();
}

std::optional<std::size_t> face_dim_of(const MarkerEvent& e) {
  if (e.kind != EventKind::FaceDetection) return std::nullopt;
  return e.face().embedding.size();
}

}  // namespace

std::string_view review_status_name(ReviewStatus status) {
  for (const auto& [s, name] : kStatusNames) {
    if (s == status) return name;
  }
  return "new";
}

ReviewStatus review_status_from_name(std::string_view name) {
  for (const auto& [s, n] : kStatusNames) {
    if (n == name) return s;
  }
  throw Error(ErrorCode::InvariantViolation, "status", "unknown review status '" + std::string(name) + "'");
}

bool review_transition_allowed(ReviewStatus from, ReviewStatus to) {
  switch (from) {
    case ReviewStatus::New: return to == ReviewStatus::Reviewed || to == ReviewStatus::Rejected;
    case ReviewStatus::Reviewed: return to == ReviewStatus::Published || to == ReviewStatus::Rejected;
    default: return false;
  }
}

std::string record_to_json(const HighlightRecord& r) {
  ojson out = ojson::parse(highlight_to_json(r.highlight));
  out["review_status"] = review_status_name(r.review_status);
  out["created_at"] = r.created_at;
  return out.dump();
}

HighlightRecord record_from_json(std::string_view text) {
  ojson obj;
  try {
    obj = ojson::parse(text);
  } catch (const json::parse_error&) {
    throw Error(ErrorCode::MalformedRecord, "", "invalid JSON record");
  }
  if (!obj.is_object() || !obj.contains("review_status") || !obj["review_status"].is_string() ||
      !obj.contains("created_at") || !obj["created_at"].is_number_integer()) {
    throw Error(ErrorCode::MalformedRecord, "review_status", "record lacks review_status or created_at");
  }
  HighlightRecord r;
  r.review_status = review_status_from_name(obj["review_status"].get<std::string>());
  r.created_at = obj["created_at"].get<std::int64_t>();
  obj.erase("review_status");
  obj.erase("created_at");
  r.highlight = highlight_from_json(obj.dump());
  return r;
}

void QueryFilter::validate() const {
  if (hole && (*hole < 1 || *hole > 18)) throw Error(ErrorCode::InvariantViolation, "hole", "hole must lie in 1..18");
  if (min_score && !(*min_score >= 0.0 && *min_score <= 1.0)) {
    throw Error(ErrorCode::InvariantViolation, "min_score", "min_score must lie in [0, 1]");
  }
  if (limit < 1 || limit > kMaxLimit) throw Error(ErrorCode::InvariantViolation, "limit", "limit must lie in 1..1000");
  if (player && lower_words(*player).empty()) throw Error(ErrorCode::InvariantViolation, "player", "empty player");
}

bool QueryFilter::matches(const HighlightRecord& r) const {
  const Highlight& h = r.highlight;
  if (hole && h.hole != hole) return false;
  if (min_score && h.fused_score < *min_score) return false;
  if (channel && h.channel != *channel) return false;
  if (status && r.review_status != *status) return false;
  if (player) {
    if (!h.player) return false;
    const auto want = lower_words(*player);
    const auto have = lower_words(*h.player);
    return std::search(have.begin(), have.end(), want.begin(), want.end()) != have.end();
  }
  return true;
}

QueryFilter query_filter_from_params(const std::multimap<std::string, std::string>& params) {
  QueryFilter f;
  auto integer = [](const std::string& key, const std::string& v) {
    std::int64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) throw Error(ErrorCode::MalformedRecord, key, "expected an integer");
    return out;
  };
  for (const auto& [key, value] : params) {
    if (key == "player") {
      f.player = value;
    } else if (key == "hole") {
      const auto v = integer(key, value);
      if (v < 1 || v > 18) throw Error(ErrorCode::InvariantViolation, key, "hole must lie in 1..18");
      f.hole = static_cast<int>(v);
    } else if (key == "min_score") {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
      if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw Error(ErrorCode::MalformedRecord, key, "expected a number");
      }
      f.min_score = v;
    } else if (key == "channel") {
      f.channel = value;
    } else if (key == "status") {
      f.status = review_status_from_name(value);
    } else if (key == "limit") {
      const auto v = integer(key, value);
      if (v < 1 || v > static_cast<std::int64_t>(kMaxLimit)) {
        throw Error(ErrorCode::InvariantViolation, key, "limit must lie in 1..1000");
      }
      f.limit = static_cast<std::size_t>(v);
    } else {
      throw Error(ErrorCode::InvariantViolation, key, "unknown query parameter");
    }
  }
  f.validate();
  return f;
}

std::string ingest_result_to_json(const IngestResult& r) {
  ojson out;
  out["accepted"] = r.accepted;
  out["duplicate"] = r.duplicate;
  out["highlights_changed"] = r.highlights_changed;
  out["errors"] = ojson::array();
  for (const auto& e : r.errors) {
    ojson item;
    item["line"] = e.line;
    item["code"] = error_code_name(e.code);
    item["field"] = e.field;
    item["message"] = e.message;
    out["errors"].push_back(std::move(item));
  }
  return out.dump();
}

// --- CuratorService ---------------------------------------------------------------

CuratorService::CuratorService(ServiceOptions options)
    : options_(std::move(options)), records_(std::make_shared<const Records>()) {
  options_.engine.validate();
  if (!options_.clock) options_.clock = wall_clock_ms;
  if (!options_.data_dir.empty()) replay();
}

CuratorService::~CuratorService() {
  if (log_fd_ >= 0) ::close(log_fd_);
}

std::shared_ptr<const CuratorService::Records> CuratorService::snapshot() const {
  std::lock_guard lock(snapshot_mutex_);
  return records_;
}

CuratorService::Channel& CuratorService::channel_state(std::string_view channel) {
  std::lock_guard lock(channels_mutex_);
  auto it = channels_.find(channel);
  if (it == channels_.end()) it = channels_.emplace(std::string(channel), std::make_unique<Channel>()).first;
  return *it->second;
}

void CuratorService::append_log(const std::string& text) {
  if (log_fd_ < 0) return;
  std::size_t done = 0;
  while (done < text.size()) {
    const ssize_t n = ::write(log_fd_, text.data() + done, text.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(ErrorCode::IoError, kLogName, std::string("log write failed: ") + std::strerror(errno));
    }
    done += static_cast<std::size_t>(n);
  }
  if (::fdatasync(log_fd_) != 0) {
    throw Error(ErrorCode::IoError, kLogName, std::string("log sync failed: ") + std::strerror(errno));
  }
}

IngestResult CuratorService::ingest_events(std::string_view channel, std::string_view jsonl) {
  if (!valid_channel_id(channel)) {
    throw Error(ErrorCode::InvariantViolation, "channel", "channel id must be non-empty [A-Za-z0-9_.:-]");
  }
  const auto t0 = std::chrono::steady_clock::now();
  IngestResult result;
  Channel& state = channel_state(channel);
  std::lock_guard lock(state.mutex);

  const std::uint64_t hash = fnv1a(channel, jsonl);
  if (state.batches.contains(hash)) {
    result.duplicate = true;
    return result;
  }

  std::optional<std::size_t> face_dim;
  for (const auto& e : state.events) {
    if ((face_dim = face_dim_of(e))) break;
  }
  std::vector<MarkerEvent> accepted;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < jsonl.size()) {
    auto nl = jsonl.find('\n', pos);
    if (nl == std::string_view::npos) nl = jsonl.size();
    const std::string_view line = jsonl.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      MarkerEvent e = parse_event(line);
      if (e.channel != channel) {
        throw Error(ErrorCode::MixedChannels, "channel", "record channel '" + e.channel + "' differs from '" +
                                                             std::string(channel) + "'");
      }
      if (const auto d = face_dim_of(e)) {
        if (face_dim && *face_dim != *d) throw Error(ErrorCode::DimensionMismatch, "embedding", "embedding dimension differs from the channel's");
        face_dim = d;
      }
      accepted.push_back(std::move(e));
    } catch (const Error& err) {
      result.errors.push_back({line_no, err.code(), err.field(), err.what()});
    }
  }
  if (accepted.empty()) return result;

  ojson op;
  op["op"] = "events";
  op["channel"] = channel;
  op["hash"] = hex(hash);
  op["events"] = ojson::array();
  for (const auto& e : accepted) op["events"].push_back(serialize_event(e));
  {
    std::lock_guard write(write_mutex_);
    append_log(op.dump() + "\n");
  }

  StreamTime earliest = accepted.front().t_start;
  for (const auto& e : accepted) earliest = std::min(earliest, e.t_start);
  result.accepted = accepted.size();
  state.events.insert(state.events.end(), std::make_move_iterator(accepted.begin()),
                      std::make_move_iterator(accepted.end()));
  state.batches.insert(hash);
  result.highlights_changed = reconcile(channel, state, earliest - 2 * options_.engine.graphic_match_window);

  const auto us =
      std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - t0).count();
  std::lock_guard metrics_lock(metrics_mutex_);
  ++metrics_.batches;
  metrics_.last_ingest_us = us;
  metrics_.max_ingest_us = std::max(metrics_.max_ingest_us, static_cast<std::int64_t>(us));
  metrics_.total_ingest_us += us;
  return result;
}

std::size_t CuratorService::reconcile(std::string_view channel, const Channel& state, StreamTime from) {
  const auto fresh = curate(validate_stream(state.events), options_.lexicon, options_.roster, options_.engine);

  std::lock_guard write(write_mutex_);
  const auto current = snapshot();
  auto next = std::make_shared<Records>(*current);
  std::string log;
  std::size_t changed = 0;

  std::set<std::string, std::less<>> keep;
  for (const auto& h : fresh) keep.insert(h.id);
  for (const auto& [id, rec] : *current) {
    if (rec.highlight.channel != channel || rec.highlight.bout.t_end < from || keep.contains(id)) continue;
    next->erase(id);
    log += ojson{{"op", "remove"}, {"id", id}}.dump() + "\n";
    ++changed;
  }
  for (const auto& h : fresh) {
    if (h.bout.t_end < from) continue;
    auto it = next->find(h.id);
    if (it != next->end() && it->second.highlight == h) continue;
    HighlightRecord rec;
    rec.highlight = h;
    if (it != next->end()) {
      rec.review_status = it->second.review_status;
      rec.created_at = it->second.created_at;
    } else {
      rec.created_at = options_.clock();
    }
    ojson op;
    op["op"] = "upsert";
    op["record"] = ojson::parse(record_to_json(rec));
    log += op.dump() + "\n";
    (*next)[h.id] = std::move(rec);
    ++changed;
  }
  if (changed == 0) return 0;
  append_log(log);
  std::lock_guard lock(snapshot_mutex_);
  records_ = std::move(next);
  return changed;
}

std::vector<HighlightRecord> CuratorService::query_highlights(const QueryFilter& filter) const {
  filter.validate();
  const auto records = snapshot();
  std::vector<HighlightRecord> out;
  for (const auto& [id, rec] : *records) {
    if (filter.matches(rec)) out.push_back(rec);
  }
  std::sort(out.begin(), out.end(),
            [](const HighlightRecord& a, const HighlightRecord& b) { return highlight_order(a.highlight, b.highlight); });
  if (out.size() > filter.limit) out.resize(filter.limit);
  return out;
}

HighlightRecord CuratorService::get_highlight(std::string_view id) const {
  const auto records = snapshot();
  const auto it = records->find(id);
  if (it == records->end()) throw Error(ErrorCode::UnknownId, "id", "no highlight '" + std::string(id) + "'");
  return it->second;
}

HighlightRecord CuratorService::set_review_status(std::string_view id, ReviewStatus status) {
  std::lock_guard write(write_mutex_);
  const auto current = snapshot();
  const auto it = current->find(id);
  if (it == current->end()) throw Error(ErrorCode::UnknownId, "id", "no highlight '" + std::string(id) + "'");
  const ReviewStatus from = it->second.review_status;
  if (!review_transition_allowed(from, status)) {
    throw Error(ErrorCode::IllegalTransition, "status",
                "cannot move from " + std::string(review_status_name(from)) + " to " +
                    std::string(review_status_name(status)));
  }
  auto next = std::make_shared<Records>(*current);
  HighlightRecord& rec = next->find(id)->second;
  rec.review_status = status;
  append_log(ojson{{"op", "review"}, {"id", id}, {"status", review_status_name(status)}}.dump() + "\n");
  HighlightRecord out = rec;
  std::lock_guard lock(snapshot_mutex_);
  records_ = std::move(next);
  return out;
}

std::vector<PlayerCount> CuratorService::players() const {
  const auto records = snapshot();
  std::map<std::string, std::size_t> counts;
  for (const auto& [id, rec] : *records) {
    if (rec.highlight.player) ++counts[*rec.highlight.player];
  }
  std::vector<PlayerCount> out;
  for (const auto& name : options_.roster) {
    const auto it = counts.find(name);
    out.push_back({name, it == counts.end() ? 0 : it->second});
    if (it != counts.end()) counts.erase(it);
  }
  for (const auto& [name, n] : counts) out.push_back({name, n});
  return out;
}

std::size_t CuratorService::highlight_count() const { return snapshot()->size(); }

std::size_t CuratorService::channel_count() const {
  std::lock_guard lock(channels_mutex_);
  return channels_.size();
}

std::size_t CuratorService::event_count(std::string_view channel) const {
  Channel* state = nullptr;
  {
    std::lock_guard lock(channels_mutex_);
    const auto it = channels_.find(channel);
    if (it == channels_.end()) return 0;
    state = it->second.get();
  }
  std::lock_guard lock(state->mutex);
  return state->events.size();
}

ServiceMetrics CuratorService::metrics() const {
  std::lock_guard lock(metrics_mutex_);
  return metrics_;
}

void CuratorService::replay() {
  std::error_code ec;
  std::filesystem::create_directories(options_.data_dir, ec);
  if (ec) throw Error(ErrorCode::IoError, options_.data_dir.string(), "cannot create data directory: " + ec.message());
  const auto path = options_.data_dir / kLogName;

  auto records = std::make_shared<Records>();
  std::uintmax_t good_bytes = 0;
  {
    std::ifstream in(path, std::ios::binary);
    std::string line;
    std::size_t line_no = 0;
    while (in.good() && std::getline(in, line)) {
      ++line_no;
      const bool complete = !in.eof();
      ojson op;
      try {
        op = ojson::parse(line);
      } catch (const json::parse_error&) {
        // A torn final write is dropped; damage anywhere else is fatal.
        if (!complete) break;
        throw Error(ErrorCode::IoError, path.string(), "corrupt log line " + std::to_string(line_no));
      }
      if (!complete) break;  // unterminated: never acknowledged
      const std::string kind = op.value("op", "");
      if (kind == "events") {
        Channel& state = channel_state(op["channel"].get<std::string>());
        for (const auto& e : op["events"]) state.events.push_back(parse_event(e.get<std::string>()));
        state.batches.insert(parse_hex(op["hash"].get<std::string>()));
      } else if (kind == "upsert") {
        auto rec = record_from_json(op["record"].dump());
        (*records)[rec.highlight.id] = std::move(rec);
      } else if (kind == "remove") {
        records->erase(op["id"].get<std::string>());
      } else if (kind == "review") {
        const auto it = records->find(op["id"].get<std::string>());
        if (it != records->end()) it->second.review_status = review_status_from_name(op["status"].get<std::string>());
      } else {
        throw Error(ErrorCode::IoError, path.string(), "unknown log op on line " + std::to_string(line_no));
      }
      good_bytes += line.size() + 1;
    }
  }
  if (std::filesystem::exists(path) && std::filesystem::file_size(path) != good_bytes) {
    std::filesystem::resize_file(path, good_bytes);
  }
  records_ = std::move(records);

  log_fd_ = ::open(path.c_str(), O_CREAT | O_WRONLY | O_APPEND | O_CLOEXEC, 0644);
  if (log_fd_ < 0) throw Error(ErrorCode::IoError, path.string(), std::string("cannot open log: ") + std::strerror(errno));

  // Finish any curation a crash interrupted.
  std::vector<std::pair<std::string, Channel*>> all;
  {
    std::lock_guard lock(channels_mutex_);
    for (auto& [name, state] : channels_) all.emplace_back(name, state.get());
  }
  for (auto& [name, state] : all) {
    std::lock_guard lock(state->mutex);
    reconcile(name, *state, StreamTime::min());
  }
}

}  // namespace hlc
