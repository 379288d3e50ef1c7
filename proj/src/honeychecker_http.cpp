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


#include "twofha/honeychecker_http.hpp"

#include <condition_variable>
#include <deque>
#include <iostream>
#include <mutex>

#include <httplib.h>
#include <json.hpp>

#include "server_lifecycle.hpp"

#include "twofha/crypto.hpp"
#include "twofha/errors.hpp"

namespace twofha {

namespace {

using nlohmann::json;

void send_error(httplib::Response& res, int status, std::string_view code,
                const std::string& message) {
  res.status = status;
  res.set_content(json{{"error", {{"code", code}, {"message", message}}}}.dump(),
                  "application/json");
}

std::optional<json> parse_body(const httplib::Request& req, httplib::Response& res) {
  json body = json::parse(req.body, nullptr, false);
  if (body.is_discarded() || !body.is_object()) {
    send_error(res, 400, "bad_request", "request body must be a JSON object");
    return std::nullopt;
  }
  return body;
}

bool require_string(const json& body, const char* key, httplib::Response& res) {
  if (!body.contains(key) || !body[key].is_string()) {
    send_error(res, 400, "bad_request", std::string("missing string field '") + key + "'");
    return false;
  }
  return true;
}

bool require_int(const json& body, const char* key, httplib::Response& res) {
  if (!body.contains(key) || !body[key].is_number_integer()) {
    send_error(res, 400, "bad_request", std::string("missing integer field '") + key + "'");
    return false;
  }
  return true;
}

}  // namespace

std::pair<std::string, std::string> split_http_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw ConfigError("URL needs a scheme: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, ""};
  std::string prefix = url.substr(path_start);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return {url.substr(0, path_start), prefix};
}

struct HoneycheckerHttpService::Impl {
  Honeychecker& checker;
  std::string secret;
  httplib::Server server;
  detail::ServerLifecycle lifecycle;

  Impl(Honeychecker& c, std::string s) : checker(c), secret(std::move(s)) {}

  bool authorized(const httplib::Request& req, httplib::Response& res) const {
    const std::string token = req.get_header_value(kHoneycheckerTokenHeader);
    if (!constant_time_equal(as_bytes(token), as_bytes(secret))) {
      send_error(res, 401, "unauthorized", "missing or invalid honeychecker token");
      return false;
    }
    return true;
  }

  template <typename Fn>
  void guarded(const httplib::Request& req, httplib::Response& res, Fn&& fn) {
    if (!authorized(req, res)) return;
    auto body = parse_body(req, res);
    if (!body) return;
    try {
      fn(*body);
    } catch (const LookupError& e) {
      send_error(res, 404, "not_found", e.what());
    } catch (const ValidationError& e) {
      send_error(res, 422, "validation_error", e.what());
    } catch (const std::exception&) {
      send_error(res, 500, "internal_error", "honeychecker failure");
    }
  }

  void install() {
    server.Post("/v1/index/set", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(req, res, [&](const json& body) {
        if (!require_string(body, "username", res) || !require_int(body, "sweet_index", res)) {
          return;
        }
        checker.set_index(body["username"].get<std::string>(), body["sweet_index"].get<int>());
        res.set_content(json{{"ok", true}}.dump(), "application/json");
      });
    });
    server.Post("/v1/index/check", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(req, res, [&](const json& body) {
        if (!require_string(body, "username", res) || !require_int(body, "slot", res)) return;
        auto result = checker.check(body["username"].get<std::string>(), body["slot"].get<int>());
        res.set_content(json{{"match", result.match}}.dump(), "application/json");
      });
    });
    server.Post("/v1/index/delete", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(req, res, [&](const json& body) {
        if (!require_string(body, "username", res)) return;
        checker.delete_index(body["username"].get<std::string>());
        res.set_content(json{{"ok", true}}.dump(), "application/json");
      });
    });
    server.Get("/health", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(json{{"status", "ok"}}.dump(), "application/json");
    });
  }
};

HoneycheckerHttpService::HoneycheckerHttpService(Honeychecker& checker, std::string shared_secret)
    : impl_(std::make_unique<Impl>(checker, std::move(shared_secret))) {
  if (impl_->secret.empty()) throw ConfigError("honeychecker shared secret must not be empty");
  impl_->install();
}

HoneycheckerHttpService::~HoneycheckerHttpService() { stop(); }

int HoneycheckerHttpService::bind(const std::string& host, int port) {
  int bound = port == 0 ? impl_->server.bind_to_any_port(host)
                        : (impl_->server.bind_to_port(host, port) ? port : -1);
  if (bound < 0) {
    throw IoError("cannot bind honeychecker to " + host + ":" + std::to_string(port));
  }
  return bound;
}

void HoneycheckerHttpService::run() { impl_->lifecycle.run(impl_->server); }

void HoneycheckerHttpService::stop() {
  if (impl_) impl_->lifecycle.stop(impl_->server);
}

struct RemoteHoneycheckerClient::Impl {
  std::string authority;
  std::string prefix;
  std::string secret;
  std::size_t pool_size;
  int timeout_ms;

  std::mutex mutex;
  std::condition_variable available;
  std::deque<std::unique_ptr<httplib::Client>> idle;
  std::size_t created = 0;

  std::unique_ptr<httplib::Client> acquire() {
    std::unique_lock lock(mutex);
    available.wait(lock, [&] { return !idle.empty() || created < pool_size; });
    if (!idle.empty()) {
      auto client = std::move(idle.front());
      idle.pop_front();
      return client;
    }
    ++created;
    lock.unlock();
    auto client = std::make_unique<httplib::Client>(authority);
    client->set_connection_timeout(timeout_ms / 1000, (timeout_ms % 1000) * 1000);
    client->set_read_timeout(timeout_ms / 1000, (timeout_ms % 1000) * 1000);
    client->set_write_timeout(timeout_ms / 1000, (timeout_ms % 1000) * 1000);
    client->set_keep_alive(true);
    return client;
  }

  void release(std::unique_ptr<httplib::Client> client) {
    {
      std::lock_guard lock(mutex);
      idle.push_back(std::move(client));
    }
    available.notify_one();
  }

  json post(const std::string& path, const json& body) {
    auto client = acquire();
    httplib::Headers headers{{kHoneycheckerTokenHeader, secret}};
    auto result = client->Post(prefix + path, headers, body.dump(), "application/json");
    release(std::move(client));

    if (!result) {
      throw IntegrityError("honeychecker unreachable: " + httplib::to_string(result.error()));
    }
    json reply = json::parse(result->body, nullptr, false);
    std::string message = "honeychecker error";
    if (!reply.is_discarded() && reply.contains("error")) {
      message = reply["error"].value("message", message);
    }
    switch (result->status) {
      case 200:
        if (reply.is_discarded()) throw IntegrityError("malformed honeychecker reply");
        return reply;
      case 404: throw LookupError(message);
      case 422: throw ValidationError(message);
      case 401: throw IntegrityError("honeychecker rejected the shared secret");
      default:
        throw IntegrityError("honeychecker returned HTTP " + std::to_string(result->status));
    }
  }
};

RemoteHoneycheckerClient::RemoteHoneycheckerClient(std::string base_url, std::string shared_secret,
                                                   std::size_t pool_size, int timeout_ms)
    : impl_(std::make_unique<Impl>()) {
  auto [authority, prefix] = split_http_url(base_url);
  impl_->authority = std::move(authority);
  impl_->prefix = std::move(prefix);
  impl_->secret = std::move(shared_secret);
  impl_->pool_size = pool_size == 0 ? 1 : pool_size;
  impl_->timeout_ms = timeout_ms;
}

RemoteHoneycheckerClient::~RemoteHoneycheckerClient() = default;

void RemoteHoneycheckerClient::set_index(const std::string& username, int index) {
  impl_->post("/v1/index/set", {{"username", username}, {"sweet_index", index}});
}

bool RemoteHoneycheckerClient::check(const std::string& username, int observed_slot) {
  json reply = impl_->post("/v1/index/check", {{"username", username}, {"slot", observed_slot}});
  if (!reply.contains("match") || !reply["match"].is_boolean()) {
    throw IntegrityError("malformed honeychecker check reply");
  }
  return reply["match"].get<bool>();
}

void RemoteHoneycheckerClient::delete_index(const std::string& username) {
  impl_->post("/v1/index/delete", {{"username", username}});
}

WebhookAlarmSink::WebhookAlarmSink(std::string url) : url_(std::move(url)) {
  split_http_url(url_);  // validate early
}

void WebhookAlarmSink::raise(const AlarmSignal& alarm) {
  auto [authority, path] = split_http_url(url_);
  httplib::Client client(authority);
  client.set_connection_timeout(1, 0);
  json body{{"event", "honeychecker_alarm"},
            {"username", alarm.username},
            {"observed_slot", alarm.observed_slot},
            {"raised_at", alarm.raised_at}};
  auto result = client.Post(path.empty() ? "/" : path, body.dump(), "application/json");
  if (!result || result->status >= 300) {
    std::cerr << json{{"event", "alarm_webhook_failed"}, {"username", alarm.username}}.dump()
              << std::endl;
  }
}

}  // namespace twofha
