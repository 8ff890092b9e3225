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

#include <memory>
#include <string>

#include "hlc/curator_service.hpp"

namespace httplib {
class Server;
}

namespace hlc {

// JSON-over-HTTP front end for a CuratorService. Errors carry a body of the
// form {"code", "field", "message"}.
class CuratorHttpServer {
 public:
  explicit CuratorHttpServer(CuratorService& service);
  ~CuratorHttpServer();
  CuratorHttpServer(const CuratorHttpServer&) = delete;
  CuratorHttpServer& operator=(const CuratorHttpServer&) = delete;

  // Port 0 picks a free port. Returns the bound port; throws IoError.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  void listen();
  void stop();

 private:
  CuratorService& service_;
  std::unique_ptr<httplib::Server> server_;
};

// HTTP status used for an error code.
int http_status_for(ErrorCode code);

}  // namespace hlc
