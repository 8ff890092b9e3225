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

#include "hlc/curator_http.hpp"

#include <httplib.h>
#include <json.hpp>

#include "hlc/error.hpp"

namespace hlc {
namespace {

using ojson = nlohmann::ordered_json;

constexpr const char* kJson = "application/json";

void send_error(httplib::Response& res, ErrorCode code, const std::string& field, const std::string& message) {
  ojson body;
  body["code"] = error_code_name(code);
  if (!field.empty()) body["field"] = field;
  body["message"] = message;
  res.status = http_status_for(code);
  res.set_content(body.dump(), kJson);
}

template <class F>
httplib::Server::Handler guarded(F f) {
  return [f](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const Error& e) {
      send_error(res, e.code(), e.field(), e.what());
    } catch (const std::exception& e) {
      send_error(res, ErrorCode::IoError, "", e.what());
    }
  };
}

std::string records_json(const std::vector<HighlightRecord>& records) {
  std::string out = "[";
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (i) out += ",";
    out += record_to_json(records[i]);
  }
  return out + "]";
}

}  // namespace

int http_status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownId: return 404;
    case ErrorCode::IllegalTransition: return 409;
    case ErrorCode::IoError: return 500;
    default: return 400;
  }
}

CuratorHttpServer::CuratorHttpServer(CuratorService& service)
    : service_(service), server_(std::make_unique<httplib::Server>()) {
  auto& s = *server_;

  s.Get("/health", guarded([this](const httplib::Request&, httplib::Response& res) {
          ojson body;
          body["status"] = "ok";
          body["channels"] = service_.channel_count();
          body["highlights"] = service_.highlight_count();
          const ServiceMetrics m = service_.metrics();
          body["ingest"] = {{"batches", m.batches},
                            {"last_ms", static_cast<double>(m.last_ingest_us) / 1000.0},
                            {"max_ms", static_cast<double>(m.max_ingest_us) / 1000.0},
                            {"mean_ms", m.batches ? static_cast<double>(m.total_ingest_us) / 1000.0 / m.batches : 0.0}};
          res.set_content(body.dump(), kJson);
        }));

  s.Get("/highlights", guarded([this](const httplib::Request& req, httplib::Response& res) {
          const std::multimap<std::string, std::string> params(req.params.begin(), req.params.end());
          res.set_content(records_json(service_.query_highlights(query_filter_from_params(params))), kJson);
        }));

  s.Get(R"(/highlights/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
          res.set_content(record_to_json(service_.get_highlight(req.matches[1].str())), kJson);
        }));

  s.Post(R"(/highlights/([^/]+)/review)", guarded([this](const httplib::Request& req, httplib::Response& res) {
           ojson body;
           try {
             body = ojson::parse(req.body);
           } catch (const nlohmann::json::parse_error&) {
             throw Error(ErrorCode::MalformedRecord, "", "request body is not JSON");
           }
           if (!body.is_object() || !body.contains("status") || !body["status"].is_string()) {
             throw Error(ErrorCode::MalformedRecord, "status", "expected {\"status\": <review status>}");
           }
           const auto status = review_status_from_name(body["status"].get<std::string>());
           res.set_content(record_to_json(service_.set_review_status(req.matches[1].str(), status)), kJson);
         }));

  s.Post(R"(/channels/([^/]+)/events)", guarded([this](const httplib::Request& req, httplib::Response& res) {
           res.set_content(ingest_result_to_json(service_.ingest_events(req.matches[1].str(), req.body)), kJson);
         }));

  s.Get("/players", guarded([this](const httplib::Request&, httplib::Response& res) {
          ojson out = ojson::array();
          for (const auto& p : service_.players()) out.push_back({{"player", p.player}, {"highlights", p.highlights}});
          res.set_content(out.dump(), kJson);
        }));

  s.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (!res.body.empty()) return;
    ojson body;
    body["code"] = res.status == 404 ? "NotFound" : "HttpError";
    body["message"] = httplib::status_message(res.status);
    res.set_content(body.dump(), kJson);
  });
}

CuratorHttpServer::~CuratorHttpServer() = default;

int CuratorHttpServer::bind(const std::string& host, int port) {
  const int bound = port == 0 ? server_->bind_to_any_port(host) : (server_->bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw Error(ErrorCode::IoError, "port", "cannot bind " + host + ":" + std::to_string(port));
  return bound;
}

void CuratorHttpServer::listen() { server_->listen_after_bind(); }

void CuratorHttpServer::stop() { server_->stop(); }

}  // namespace hlc
