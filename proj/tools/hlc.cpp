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

// hlc: batch curation, evaluation, scenario generation, face datasets and the
// curator service behind one binary.

#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "hlc/curator_http.hpp"
#include "hlc/curator_service.hpp"
#include "hlc/error.hpp"
#include "hlc/evaluation.hpp"
#include "hlc/face_bootstrap.hpp"
#include "hlc/highlight_engine.hpp"
#include "hlc/scenario.hpp"

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace hlc {
namespace {

enum Exit { kOk = 0, kIo = 1, kInvalid = 2, kConfig = 3, kRuntime = 4 };

// Failure with an explicit exit code, for conditions that are not hlc::Error.
struct Failure {
  int code;
  std::string message;
};

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::IoError: return kIo;
    case ErrorCode::ConfigInvalid:
    case ErrorCode::DuplicateExpression:
    case ErrorCode::WeightOutOfRange:
    case ErrorCode::EmptyLexicon: return kConfig;
    default: return kInvalid;
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, path.string(), "cannot read file");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out.flush()) throw Error(ErrorCode::IoError, path.string(), "cannot write file");
}

// Events from line-delimited JSON, grouped per channel in first-seen order.
std::vector<std::pair<std::string, std::vector<MarkerEvent>>> read_events(const std::vector<std::string>& paths) {
  std::vector<std::pair<std::string, std::vector<MarkerEvent>>> out;
  std::map<std::string, std::size_t> index;
  for (const auto& path : paths) {
    std::istringstream in(read_file(path));
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      MarkerEvent e;
      try {
        e = parse_event(line);
      } catch (const Error& err) {
        throw Error(err.code(), path + ":" + std::to_string(line_no) + (err.field().empty() ? "" : " " + err.field()),
                    err.what());
      }
      auto [it, fresh] = index.emplace(e.channel, out.size());
      if (fresh) out.emplace_back(e.channel, std::vector<MarkerEvent>{});
      out[it->second].second.push_back(std::move(e));
    }
  }
  return out;
}

struct Settings {
  EngineConfig engine;
  FaceBootstrapConfig faces;
  ExcitementLexicon lexicon = default_lexicon();
  std::vector<std::string> roster = default_roster();
};

Settings load_settings(const std::string& config, const std::string& lexicon, const std::string& roster) {
  Settings s;
  if (!config.empty()) {
    const std::string text = read_file(config);
    s.engine = engine_config_from_json(text);
    s.faces = face_bootstrap_config_from_json(text);
  }
  if (!lexicon.empty()) s.lexicon = load_lexicon(read_file(lexicon));
  if (!roster.empty()) {
    s.roster = parse_roster(read_file(roster));
    if (s.roster.empty()) throw Error(ErrorCode::ConfigInvalid, roster, "roster lists no players");
  }
  return s;
}

std::string jsonl(const std::vector<Highlight>& highlights) {
  std::string out;
  for (const auto& h : highlights) out += highlight_to_json(h) + "\n";
  return out;
}

std::vector<Highlight> read_highlights(const std::string& path) {
  std::vector<Highlight> out;
  std::istringstream in(read_file(path));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(highlight_from_json(line));
    } catch (const Error& err) {
      throw Error(err.code(), path + ":" + std::to_string(line_no), err.what());
    }
  }
  return out;
}

void print_json(const ojson& j) { std::cout << j.dump(2) << "\n"; }

// --- run ---------------------------------------------------------------------

struct RunArgs {
  std::vector<std::string> inputs;
  std::string config, lexicon, roster, out, format = "text";
  unsigned workers = 1;
};

int cmd_run(const RunArgs& a) {
  const Settings s = load_settings(a.config, a.lexicon, a.roster);
  const auto channels = read_events(a.inputs);

  std::vector<ValidatedStream> streams;
  streams.reserve(channels.size());
  for (const auto& [name, events] : channels) {
    try {
      streams.push_back(validate_stream(events));
    } catch (const Error& err) {
      throw Error(err.code(), "channel " + name + (err.field().empty() ? "" : " " + err.field()), err.what());
    }
  }

  std::vector<std::vector<Highlight>> per(streams.size());
  const unsigned workers = std::max(1u, std::min<unsigned>(a.workers, static_cast<unsigned>(streams.size())));
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> failures(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < streams.size(); i += workers) per[i] = curate(streams[i], s.lexicon, s.roster, s.engine);
      } catch (...) {
        failures[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  std::vector<Highlight> all;
  for (auto& v : per) all.insert(all.end(), v.begin(), v.end());
  std::stable_sort(all.begin(), all.end(), highlight_order);
  write_file(a.out, jsonl(all));

  const std::size_t top = std::min<std::size_t>(5, all.size());
  if (a.format == "json") {
    ojson report;
    report["highlights"] = all.size();
    report["channels"] = streams.size();
    report["output"] = a.out;
    report["top"] = ojson::array();
    for (std::size_t i = 0; i < top; ++i) report["top"].push_back(ojson::parse(highlight_to_json(all[i])));
    print_json(report);
  } else {
    std::cout << all.size() << " highlight(s) from " << streams.size() << " channel(s) -> " << a.out << "\n";
    for (std::size_t i = 0; i < top; ++i) {
      const Highlight& h = all[i];
      std::printf("%zu. %-16s fused %.3f  [%lld, %lld] ms  %s  hole %s\n", i + 1, h.id.c_str(), h.fused_score,
                  static_cast<long long>(h.t_start.count()), static_cast<long long>(h.t_end.count()),
                  h.player.value_or("?").c_str(), h.hole ? std::to_string(*h.hole).c_str() : "?");
    }
  }
  return kOk;
}

// --- eval --------------------------------------------------------------------

struct EvalArgs {
  std::string input, reference, format = "text";
  std::vector<std::size_t> depths;
};

int cmd_eval(const EvalArgs& a) {
  const auto produced = read_highlights(a.input);
  const std::string ref_text = read_file(a.reference);
  ReferenceSet reference;
  try {
    reference = parse_reference(ref_text);
  } catch (const Error& err) {
    throw Error(err.code(), a.reference + " " + err.field(), err.what());
  }
  if (reference.empty()) throw Error(ErrorCode::EmptyReference, a.reference, "reference set is empty");

  // Optional graded relevance per reference entry.
  std::map<MatchKey, double> grades;
  {
    std::istringstream in(ref_text);
    std::string line;
    while (std::getline(in, line)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      const auto obj = nlohmann::json::parse(line);
      if (!obj.contains("relevance")) continue;
      if (!obj["relevance"].is_number()) throw Error(ErrorCode::MalformedRecord, "relevance", "expected a number");
      const auto key = ReferenceSet::normalize({obj["player"].get<std::string>(), obj["hole"].get<int>()});
      grades[key] = std::max(grades[key], obj["relevance"].get<double>());
    }
  }
  RankedList ranked;
  if (!grades.empty()) {
    for (const auto& h : produced) {
      double rel = 0.0;
      if (const auto key = key_of(h)) {
        const auto it = grades.find(ReferenceSet::normalize(*key));
        if (it != grades.end()) rel = it->second;
      }
      ranked.push_back({h.id, rel});
    }
  }

  ojson report;
  report["produced"] = produced.size();
  report["reference"] = reference.size();
  report["rows"] = ojson::array();
  for (const std::size_t depth : a.depths) {
    const MatchResult m = match_highlights(produced, reference, depth);
    ojson row;
    row["depth"] = depth;
    row["considered"] = m.considered;
    row["matched_items"] = m.matched_items;
    row["matched_reference"] = m.matched.size();
    row["precision"] = m.precision;
    row["recall"] = m.recall;
    if (!grades.empty()) row["ndcg"] = ndcg(ranked, depth);
    report["rows"].push_back(std::move(row));
  }

  if (a.format == "json") {
    print_json(report);
  } else {
    std::cout << "produced " << produced.size() << ", reference " << reference.size() << "\n";
    std::printf("%8s %10s %8s%s\n", "Depth", "Precision", "Recall", grades.empty() ? "" : "     nDCG");
    for (const auto& row : report["rows"]) {
      std::printf("%8zu %10.4f %8.4f", row["depth"].get<std::size_t>(), row["precision"].get<double>(),
                  row["recall"].get<double>());
      if (row.contains("ndcg")) std::printf(" %8.4f", row["ndcg"].get<double>());
      std::printf("\n");
    }
  }
  return kOk;
}

// --- gen ---------------------------------------------------------------------

struct GenArgs {
  std::string input, lexicon, out, format = "text";
  std::optional<std::uint64_t> seed;
};

int cmd_gen(const GenArgs& a) {
  ScenarioSpec spec;
  if (!a.input.empty()) spec = scenario_spec_from_json(read_file(a.input));
  if (a.seed) spec.seed = *a.seed;
  const ExcitementLexicon lexicon = a.lexicon.empty() ? default_lexicon() : load_lexicon(read_file(a.lexicon));
  const Scenario sc = generate_stream(spec, lexicon);

  std::string events;
  for (const auto& e : sc.stream.events()) events += serialize_event(e) + "\n";
  std::string reference;
  for (const auto& h : sc.truth) {
    if (const auto key = key_of(h)) reference += reference_line(*key) + "\n";
  }
  std::string roster;
  for (const auto& name : sc.roster) roster += name + "\n";

  const fs::path out(a.out);
  fs::create_directories(out);
  write_file(out / "events.jsonl", events);
  write_file(out / "truth.jsonl", jsonl(sc.truth));
  write_file(out / "reference.jsonl", reference);
  write_file(out / "roster.txt", roster);
  write_file(out / "spec.json", scenario_spec_to_json(spec) + "\n");

  if (a.format == "json") {
    ojson report;
    report["events"] = sc.stream.events().size();
    report["shots"] = sc.shots.size();
    report["truth"] = sc.truth.size();
    report["seed"] = spec.seed;
    report["output"] = out.string();
    print_json(report);
  } else {
    std::cout << sc.stream.events().size() << " events, " << sc.shots.size() << " shot(s), " << sc.truth.size()
              << " expected highlight(s) -> " << out.string() << "\n";
  }
  return kOk;
}

// --- faces -------------------------------------------------------------------

struct FacesArgs {
  std::vector<std::string> inputs;
  std::string config, roster, out, format = "text";
};

std::string file_slug(const std::string& name) {
  std::string out;
  for (char c : name) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    } else if (!out.empty() && out.back() != '_') {
      out.push_back('_');
    }
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  return out.empty() ? "player" : out;
}

int cmd_faces(const FacesArgs& a) {
  const Settings s = load_settings(a.config, "", a.roster);
  const auto channels = read_events(a.inputs);

  // Candidates pooled per player over every graphic naming them.
  std::map<std::string, std::vector<FaceCandidate>> pools;
  std::vector<std::string> order;
  std::size_t faces_seen = 0;
  std::size_t unmatched = 0;
  for (const auto& [name, events] : channels) {
    const ValidatedStream stream = validate_stream(events);
    faces_seen += stream.of_kind(EventKind::FaceDetection).size();
    for (const auto* g : stream.of_kind(EventKind::Graphic)) {
      std::string player;
      try {
        player = match_player(g->text(), s.roster);
      } catch (const Error&) {
        ++unmatched;
        continue;
      }
      auto cands = harvest_candidates(stream, g->t_start, s.faces.harvest_window, s.faces.min_height_px);
      if (cands.empty()) continue;
      auto [it, fresh] = pools.try_emplace(player);
      if (fresh) order.push_back(player);
      for (auto& c : cands) {
        if (std::find(it->second.begin(), it->second.end(), c) == it->second.end()) it->second.push_back(std::move(c));
      }
    }
  }

  if (faces_seen == 0) std::cerr << "warning: no face detections in the input; no datasets written\n";
  if (unmatched > 0) std::cerr << "warning: " << unmatched << " graphic(s) matched no roster player\n";

  ojson report;
  report["datasets"] = ojson::array();
  for (const auto& player : order) {
    const auto ds = build_dataset(pools[player], player, s.faces.kmeans_max_iters);
    std::string text;
    for (const auto& c : ds.kept) text += candidate_json(c, true) + "\n";
    for (const auto& c : ds.rejected) text += candidate_json(c, false) + "\n";
    text += dataset_summary_json(ds) + "\n";
    const fs::path path = fs::path(a.out) / (file_slug(player) + ".jsonl");
    write_file(path, text);
    ojson entry = ojson::parse(dataset_summary_json(ds));
    entry.erase("type");
    entry["file"] = path.string();
    report["datasets"].push_back(std::move(entry));
  }

  if (a.format == "json") {
    print_json(report);
  } else {
    for (const auto& d : report["datasets"]) {
      std::cout << d["player"].get<std::string>() << ": kept " << d["kept"] << ", rejected " << d["rejected"];
      if (!d["purity"].is_null()) std::cout << ", purity " << d["purity"].get<double>();
      if (d["low_confidence"].get<bool>()) std::cout << " (low confidence)";
      std::cout << " -> " << d["file"].get<std::string>() << "\n";
    }
  }
  return kOk;
}

// --- serve -------------------------------------------------------------------

struct ServeArgs {
  std::string config, lexicon, roster, data = "hlc-data", host = "127.0.0.1";
  int port = 8080;
};

int cmd_serve(const ServeArgs& a) {
  const Settings s = load_settings(a.config, a.lexicon, a.roster);

  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  ServiceOptions options;
  options.data_dir = a.data;
  options.engine = s.engine;
  options.lexicon = s.lexicon;
  options.roster = s.roster;
  CuratorService service(std::move(options));
  CuratorHttpServer server(service);
  const int port = server.bind(a.host, a.port);
  std::cout << "listening on http://" << a.host << ":" << port << std::endl;

  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
  });
  server.listen();
  // Wake the waiter if the server stopped on its own.
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  return kOk;
}

}  // namespace
}  // namespace hlc

int main(int argc, char** argv) {
  using namespace hlc;
  CLI::App app{"Golf broadcast highlight curation"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Curate highlights from marker event files");
  run_cmd->add_option("--input,-i", run.inputs, "Event files (line-delimited JSON)")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--config", run.config, "Config file")->check(CLI::ExistingFile);
  run_cmd->add_option("--lexicon", run.lexicon, "Excitement lexicon file")->check(CLI::ExistingFile);
  run_cmd->add_option("--roster", run.roster, "Roster file, one name per line")->check(CLI::ExistingFile);
  run_cmd->add_option("--out,-o", run.out, "Output highlights file")->required();
  run_cmd->add_option("--workers", run.workers, "Channels curated in parallel")->check(CLI::Range(1u, 64u));
  run_cmd->add_option("--format", run.format)->check(CLI::IsMember({"text", "json"}));

  EvalArgs eval;
  std::string depths = "120,500";
  auto* eval_cmd = app.add_subcommand("eval", "Score highlights against a reference set");
  eval_cmd->add_option("--input,-i", eval.input, "Highlights file")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--reference,-r", eval.reference, "Reference file")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--depths", depths, "Comma-separated cut-off depths");
  eval_cmd->add_option("--format", eval.format)->check(CLI::IsMember({"text", "json"}));

  GenArgs gen;
  std::uint64_t seed = 0;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic broadcast with ground truth");
  gen_cmd->add_option("--input,-i", gen.input, "Scenario spec (JSON)")->check(CLI::ExistingFile);
  auto* seed_opt = gen_cmd->add_option("--seed", seed, "Overrides the spec's seed");
  gen_cmd->add_option("--lexicon", gen.lexicon, "Excitement lexicon file")->check(CLI::ExistingFile);
  gen_cmd->add_option("--out,-o", gen.out, "Output directory")->required();
  gen_cmd->add_option("--format", gen.format)->check(CLI::IsMember({"text", "json"}));

  FacesArgs faces;
  auto* faces_cmd = app.add_subcommand("faces", "Build per-player face datasets");
  faces_cmd->add_option("--input,-i", faces.inputs, "Event files")->required()->check(CLI::ExistingFile);
  faces_cmd->add_option("--config", faces.config, "Config file")->check(CLI::ExistingFile);
  faces_cmd->add_option("--roster", faces.roster, "Roster file")->check(CLI::ExistingFile);
  faces_cmd->add_option("--out,-o", faces.out, "Output directory")->required();
  faces_cmd->add_option("--format", faces.format)->check(CLI::IsMember({"text", "json"}));

  ServeArgs serve;
  auto* serve_cmd = app.add_subcommand("serve", "Run the curator service");
  serve_cmd->add_option("--config", serve.config, "Config file")->check(CLI::ExistingFile);
  serve_cmd->add_option("--lexicon", serve.lexicon, "Excitement lexicon file")->check(CLI::ExistingFile);
  serve_cmd->add_option("--roster", serve.roster, "Roster file")->check(CLI::ExistingFile);
  serve_cmd->add_option("--data", serve.data, "Data directory for the append log");
  serve_cmd->add_option("--host", serve.host, "Bind address");
  serve_cmd->add_option("--port", serve.port, "Port; 0 picks a free one")->check(CLI::Range(0, 65535));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kIo;
  }

  try {
    if (*run_cmd) return cmd_run(run);
    if (*eval_cmd) {
      std::stringstream in(depths);
      std::string item;
      while (std::getline(in, item, ',')) {
        std::size_t used = 0;
        long long v = 0;
        try {
          v = std::stoll(item, &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used != item.size() || v < 1) throw Failure{kIo, "--depths: expected positive integers, got '" + item + "'"};
        eval.depths.push_back(static_cast<std::size_t>(v));
      }
      if (eval.depths.empty()) throw Failure{kIo, "--depths: no depth given"};
      return cmd_eval(eval);
    }
    if (*gen_cmd) {
      if (*seed_opt) gen.seed = seed;
      return cmd_gen(gen);
    }
    if (*faces_cmd) return cmd_faces(faces);
    if (*serve_cmd) return cmd_serve(serve);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.code;
  } catch (const Error& e) {
    std::cerr << "error: " << e.describe() << "\n";
    return exit_code_for(e.code());
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: MalformedRecord: " << e.what() << "\n";
    return kInvalid;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: IoError: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntime;
  }
  return kIo;
}
