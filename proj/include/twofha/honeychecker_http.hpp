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

#include <memory>
#include <string>

#include "twofha/honeychecker.hpp"

namespace twofha {

/// Header carrying the shared secret on every honeychecker request.
inline constexpr const char* kHoneycheckerTokenHeader = "X-Honeychecker-Token";

/// Wire API of a standalone honeychecker process:
///
///   POST /v1/index/set     {"username": s, "sweet_index": n}  -> 200 {"ok": true}
///   POST /v1/index/check   {"username": s, "slot": n}         -> 200 {"match": b}
///   POST /v1/index/delete  {"username": s}                    -> 200 {"ok": true}
///   GET  /health                                              -> 200 {"status": "ok"}
///
/// Errors are {"error": {"code": ..., "message": ...}} with 400 (malformed
/// body), 401 (bad token), 404 (unknown user) or 422 (index out of range).
class HoneycheckerHttpService {
 public:
  HoneycheckerHttpService(Honeychecker& checker, std::string shared_secret);
  ~HoneycheckerHttpService();

  HoneycheckerHttpService(const HoneycheckerHttpService&) = delete;
  HoneycheckerHttpService& operator=(const HoneycheckerHttpService&) = delete;

  /// Binds; port 0 picks a free port. Returns the bound port.
  int bind(const std::string& host, int port);
  /// Blocks until stop().
  void run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// HTTP client for HoneycheckerHttpService. Connection failures and
/// authentication failures surface as IntegrityError: the accounts side can
/// no longer tell genuine from decoy submissions.
class RemoteHoneycheckerClient final : public HoneycheckerClient {
 public:
  RemoteHoneycheckerClient(std::string base_url, std::string shared_secret,
                           std::size_t pool_size = 4, int timeout_ms = 2000);
  ~RemoteHoneycheckerClient() override;

  void set_index(const std::string& username, int index) override;
  bool check(const std::string& username, int observed_slot) override;
  void delete_index(const std::string& username) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// POSTs each alarm as JSON to a URL. Delivery failures are reported on
/// stderr and otherwise swallowed so a dead webhook cannot block checks.
class WebhookAlarmSink final : public AlarmSink {
 public:
  explicit WebhookAlarmSink(std::string url);
  void raise(const AlarmSignal& alarm) override;

 private:
  std::string url_;
};

/// Splits "http://host:port/prefix" into scheme+authority and path prefix.
std::pair<std::string, std::string> split_http_url(const std::string& url);

}  // namespace twofha
