// Copyright 2026 The Gazette Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "gazette/project.hpp"

namespace gazette {

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  bool allow_remote = false;
  std::size_t max_upload_bytes = 100u << 20;
  std::optional<std::filesystem::path> dump;    // enables /index and /lexicons
  std::optional<std::filesystem::path> ui_dir;  // static assets served at /
  unsigned workers = 2;
};

// JSON API under /api/v1 for one project. Long-running work (class
// indexing, extraction, annotation) runs as background jobs that clients
// poll.
class Server {
 public:
  // Throws Error when binding to a non-loopback host without allow_remote.
  Server(Project project, ServerOptions options);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Binds and serves on a background thread; returns the bound port.
  int start();
  // Binds and serves on the calling thread until stop().
  void run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

bool is_loopback_host(const std::string& host);

}  // namespace gazette
