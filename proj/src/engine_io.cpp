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

#include <set>

#include <json.hpp>

#include "hlc/error.hpp"
#include "hlc/highlight_engine.hpp"

namespace hlc {
namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

[[noreturn]] void malformed(const std::string& field, const std::string& message) {
  throw Error(ErrorCode::MalformedRecord, field, message);
}

const json& field(const json& obj, const std::string& name) {
  auto it = obj.find(name);
  if (it == obj.end()) malformed(name, "missing field");
  return *it;
}

std::int64_t int_field(const json& obj, const std::string& name) {
  const json& v = field(obj, name);
  if (!v.is_number_integer()) malformed(name, "expected an integer");
  return v.get<std::int64_t>();
}

double number_field(const json& obj, const std::string& name) {
  const json& v = field(obj, name);
  if (!v.is_number()) malformed(name, "expected a number");
  return v.get<double>();
}

}  // namespace

std::string highlight_to_json(const Highlight& h) {
  ojson out;
  out["id"] = h.id;
  out["channel"] = h.channel;
  out["t_start"] = h.t_start.count();
  out["t_end"] = h.t_end.count();
  out["bout"] = {{"t_start", h.bout.t_start.count()}, {"t_end", h.bout.t_end.count()}, {"score", h.bout.score}};
  out["components"] = {{"cheer", h.components.cheer},
                       {"tone", h.components.tone},
                       {"text", h.components.text},
                       {"action", h.components.action}};
  out["fused_score"] = h.fused_score;
  out["player"] = h.player ? ojson(*h.player) : ojson(nullptr);
  out["hole"] = h.hole ? ojson(*h.hole) : ojson(nullptr);
  out["graphic_time"] = h.graphic_time.count();
  out["shared_graphic"] = h.shared_graphic;
  return out.dump();
}

Highlight highlight_from_json(std::string_view line) {
  json obj;
  try {
    obj = json::parse(line);
  } catch (const json::parse_error& e) {
    malformed("", std::string("invalid JSON: ") + e.what());
  }
  if (!obj.is_object()) malformed("", "highlight must be a JSON object");

  Highlight h;
  const json& id = field(obj, "id");
  if (!id.is_string()) malformed("id", "expected a string");
  h.id = id.get<std::string>();
  const json& channel = field(obj, "channel");
  if (!channel.is_string()) malformed("channel", "expected a string");
  h.channel = channel.get<std::string>();
  h.t_start = StreamTime{int_field(obj, "t_start")};
  h.t_end = StreamTime{int_field(obj, "t_end")};

  const json& bout = field(obj, "bout");
  if (!bout.is_object()) malformed("bout", "expected an object");
  h.bout = {StreamTime{int_field(bout, "t_start")}, StreamTime{int_field(bout, "t_end")}, number_field(bout, "score")};

  const json& comps = field(obj, "components");
  if (!comps.is_object()) malformed("components", "expected an object");
  h.components = {number_field(comps, "cheer"), number_field(comps, "tone"), number_field(comps, "text"),
                  number_field(comps, "action")};
  h.fused_score = number_field(obj, "fused_score");

  if (auto it = obj.find("player"); it != obj.end() && !it->is_null()) {
    if (!it->is_string()) malformed("player", "expected a string or null");
    h.player = it->get<std::string>();
  }
  if (auto it = obj.find("hole"); it != obj.end() && !it->is_null()) {
    if (!it->is_number_integer()) malformed("hole", "expected an integer or null");
    h.hole = it->get<int>();
  }
  h.graphic_time = StreamTime{int_field(obj, "graphic_time")};
  if (auto it = obj.find("shared_graphic"); it != obj.end()) {
    if (!it->is_boolean()) malformed("shared_graphic", "expected a boolean");
    h.shared_graphic = it->get<bool>();
  }
  return h;
}

EngineConfig engine_config_from_json(std::string_view text) {
  json obj;
  try {
    obj = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ConfigInvalid, "", std::string("invalid JSON: ") + e.what());
  }
  if (!obj.is_object()) throw Error(ErrorCode::ConfigInvalid, "", "config must be a JSON object");

  EngineConfig cfg;
  auto window = [&](const char* key, Millis& out) {
    auto it = obj.find(key);
    if (it == obj.end()) return;
    if (!it->is_number_integer()) throw Error(ErrorCode::ConfigInvalid, key, "expected integer milliseconds");
    out = Millis{it->get<std::int64_t>()};
  };
  auto number = [](const json& o, const char* key, const std::string& path, double& out) {
    auto it = o.find(key);
    if (it == o.end()) return;
    if (!it->is_number()) throw Error(ErrorCode::ConfigInvalid, path, "expected a number");
    out = it->get<double>();
  };

  static const std::set<std::string> known = {"graphic_match_window", "start_lead", "end_search_window",
                                              "action_window", "tone_window", "weights",
                                              "cheer_positive_threshold", "boundary_threshold",
                                              "face_bootstrap"};
  for (const auto& [key, _] : obj.items()) {
    if (!known.contains(key)) throw Error(ErrorCode::ConfigInvalid, key, "unknown config key");
  }

  window("graphic_match_window", cfg.graphic_match_window);
  window("start_lead", cfg.start_lead);
  window("end_search_window", cfg.end_search_window);
  window("action_window", cfg.action_window);
  window("tone_window", cfg.tone_window);
  number(obj, "cheer_positive_threshold", "cheer_positive_threshold", cfg.cheer_positive_threshold);
  number(obj, "boundary_threshold", "boundary_threshold", cfg.boundary_threshold);

  if (auto it = obj.find("weights"); it != obj.end()) {
    if (!it->is_object()) throw Error(ErrorCode::ConfigInvalid, "weights", "expected an object");
    static const std::set<std::string> weight_keys = {"w_cheer", "w_tone", "w_text", "w_action"};
    for (const auto& [key, _] : it->items()) {
      if (!weight_keys.contains(key)) throw Error(ErrorCode::ConfigInvalid, "weights." + key, "unknown weight");
    }
    number(*it, "w_cheer", "weights.w_cheer", cfg.weights.cheer);
    number(*it, "w_tone", "weights.w_tone", cfg.weights.tone);
    number(*it, "w_text", "weights.w_text", cfg.weights.text);
    number(*it, "w_action", "weights.w_action", cfg.weights.action);
  }
  cfg.validate();
  return cfg;
}

std::string engine_config_to_json(const EngineConfig& cfg) {
  ojson out;
  out["graphic_match_window"] = cfg.graphic_match_window.count();
  out["start_lead"] = cfg.start_lead.count();
  out["end_search_window"] = cfg.end_search_window.count();
  out["action_window"] = cfg.action_window.count();
  out["tone_window"] = cfg.tone_window.count();
  out["weights"] = {{"w_cheer", cfg.weights.cheer},
                    {"w_tone", cfg.weights.tone},
                    {"w_text", cfg.weights.text},
                    {"w_action", cfg.weights.action}};
  out["cheer_positive_threshold"] = cfg.cheer_positive_threshold;
  out["boundary_threshold"] = cfg.boundary_threshold;
  return out.dump(2);
}

std::vector<std::string> parse_roster(std::string_view text) {
  std::vector<std::string> names;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r");
    names.emplace_back(line.substr(first, last - first + 1));
  }
  return names;
}

}  // namespace hlc
