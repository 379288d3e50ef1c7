// Copyright 2026 The 2FHA Authors
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

#include <chrono>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>

#include "twofha/accounts.hpp"
#include "twofha/config.hpp"

namespace twofha {

/// Sliding one-second window per key.
class RateLimiter {
 public:
  using TimePoint = std::chrono::steady_clock::time_point;

  explicit RateLimiter(int per_second) : per_second_(per_second) {}

  /// False once `key` has made per_second requests in the trailing second.
  bool allow(const std::string& key, TimePoint now = std::chrono::steady_clock::now());

 private:
  int per_second_;
  std::mutex mutex_;
  std::unordered_map<std::string, std::deque<TimePoint>> history_;
};

struct ApiServerOptions {
  int rate_limit_per_second = 5;
  /// Reports whether the honeychecker answers; shown by /health.
  std::function<bool()> honeychecker_probe;
};

/// HTTP+JSON facade over AccountService.
///
///   POST /register      form                      -> 201 provisioning | 409 | 422
///   POST /login         {username, password}      -> 200 session | 401 | 423 | 429
///   POST /login/otp     {session_id, code}        -> 200 token | 401 | 422 | 423 | 429 | 503
///   POST /admin/unlock  {username} + Bearer token -> 200 | 403 | 404
///   GET  /health                                  -> 200
///
/// Error bodies are {"error": {"code", "message", ...}}; see docs/api.md.
class ApiServer {
 public:
  ApiServer(AccountService& accounts, ApiServerOptions options);
  ~ApiServer();

  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  /// Port 0 picks a free port. Returns the bound port; throws IoError.
  int bind(const std::string& host, int port);
  /// Blocks until stop().
  void run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Everything `serve` needs, wired from configuration: store, remote
/// honeychecker client, SMS gateway, audit log, account service, HTTP API.
class ServerApp {
 public:
  explicit ServerApp(const AppConfig& config);
  ~ServerApp();

  int bind();
  void run();
  void stop();

  AccountService& accounts();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace twofha
