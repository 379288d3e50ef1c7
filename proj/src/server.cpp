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


#include "twofha/server.hpp"

#include <iostream>

#include <httplib.h>
#include <json.hpp>

#include "server_lifecycle.hpp"

#include "twofha/errors.hpp"
#include "twofha/honeychecker_http.hpp"
#include "twofha/qr_image.hpp"

namespace twofha {

namespace {

using nlohmann::json;

constexpr const char* kJson = "application/json";

// Thrown for malformed request documents.
struct BadRequest {
  std::string message;
};

json parse_object(const httplib::Request& req) {
  json body = json::parse(req.body, nullptr, false);
  if (body.is_discarded() || !body.is_object()) throw BadRequest{"request body must be a JSON object"};
  return body;
}

std::string string_field(const json& body, const char* key) {
  if (!body.contains(key) || !body[key].is_string()) {
    throw BadRequest{std::string("missing string field '") + key + "'"};
  }
  return body[key].get<std::string>();
}

int int_field(const json& body, const char* key) {
  if (!body.contains(key) || !body[key].is_number_integer()) {
    throw BadRequest{std::string("missing integer field '") + key + "'"};
  }
  return body[key].get<int>();
}

void reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

json error_body(std::string_view code, const std::string& message) {
  return {{"error", {{"code", code}, {"message", message}}}};
}

int status_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kValidation:
    case ErrorKind::kPolicy:
      return 422;
    case ErrorKind::kConflict: return 409;
    case ErrorKind::kInvalidCredentials:
    case ErrorKind::kSession:
      return 401;
    case ErrorKind::kLocked: return 423;
    case ErrorKind::kAuthorization: return 403;
    case ErrorKind::kLookup: return 404;
    case ErrorKind::kIntegrity: return 503;
    default: return 500;
  }
}

// Messages of internal failures never reach clients.
std::string public_message(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::kIntegrity: return "authentication backend unavailable";
    case ErrorKind::kStorage:
    case ErrorKind::kIo:
    case ErrorKind::kConfig:
      return "internal error";
    default: return e.what();
  }
}

}  // namespace

bool RateLimiter::allow(const std::string& key, TimePoint now) {
  if (per_second_ <= 0) return true;
  std::lock_guard lock(mutex_);
  auto& window = history_[key];
  while (!window.empty() && now - window.front() >= std::chrono::seconds(1)) window.pop_front();
  if (window.size() >= static_cast<std::size_t>(per_second_)) return false;
  window.push_back(now);
  if (history_.size() > 10000) {
    for (auto it = history_.begin(); it != history_.end();) {
      it = it->second.empty() || now - it->second.back() >= std::chrono::seconds(1)
               ? history_.erase(it)
               : std::next(it);
    }
  }
  return true;
}

struct ApiServer::Impl {
  AccountService& accounts;
  ApiServerOptions options;
  RateLimiter limiter;
  httplib::Server server;
  detail::ServerLifecycle lifecycle;

  Impl(AccountService& a, ApiServerOptions o)
      : accounts(a), options(std::move(o)), limiter(options.rate_limit_per_second) {}

  template <typename Fn>
  void handle(const httplib::Request& req, httplib::Response& res, bool rate_limited, Fn&& fn) {
    if (rate_limited && !limiter.allow(req.remote_addr)) {
      reply(res, 429, error_body("rate_limited", "too many requests"));
      return;
    }
    try {
      fn(parse_object(req));
    } catch (const BadRequest& e) {
      reply(res, 400, error_body("bad_request", e.message));
    } catch (const Error& e) {
      reply(res, status_for(e.kind()), error_body(to_string(e.kind()), public_message(e)));
    } catch (const std::exception&) {
      reply(res, 500, error_body("internal_error", "internal error"));
    }
  }

  void install() {
    server.Post("/register", [this](const httplib::Request& req, httplib::Response& res) {
      handle(req, res, false, [&](const json& body) {
        RegistrationForm form{string_field(body, "username"), string_field(body, "password"),
                              string_field(body, "firstname"), string_field(body, "lastname"),
                              string_field(body, "phone"), int_field(body, "position")};
        const auto bundle = accounts.register_user(form);
        json entries = json::array();
        for (const auto& e : bundle.entries) {
          entries.push_back({{"slot", e.slot},
                             {"label", e.label},
                             {"uri", e.uri},
                             {"qr_png_base64", base64_encode(qr_to_png(e.qr))}});
        }
        reply(res, 201, {{"username", form.username},
                         {"slots", static_cast<int>(bundle.entries.size())},
                         {"entries", entries}});
      });
    });

    server.Post("/login", [this](const httplib::Request& req, httplib::Response& res) {
      handle(req, res, true, [&](const json& body) {
        const auto challenge =
            accounts.login_password(string_field(body, "username"), string_field(body, "password"));
        reply(res, 200, {{"session_id", challenge.session.session_id},
                         {"expires_at", challenge.session.expires_at},
                         {"slots", accounts.config().slot_count},
                         {"sms_delivered", challenge.sms_delivered}});
      });
    });

    server.Post("/login/otp", [this](const httplib::Request& req, httplib::Response& res) {
      handle(req, res, true, [&](const json& body) {
        const auto result =
            accounts.login_otp(string_field(body, "session_id"), string_field(body, "code"));
        switch (result.status) {
          case OtpLoginResult::Status::kAuthenticated:
            reply(res, 200, {{"status", "authenticated"}, {"token", result.auth_token}});
            break;
          case OtpLoginResult::Status::kRejected: {
            json err = error_body("invalid_code", "the code is not valid");
            err["error"]["attempts_remaining"] = result.attempts_remaining;
            reply(res, 401, err);
            break;
          }
          case OtpLoginResult::Status::kLocked: {
            json err = result.breach
                           ? error_body("account_locked",
                                        "possible breach detected; the account has been locked")
                           : error_body("account_locked", "account locked after repeated invalid codes");
            err["error"]["breach"] = result.breach;
            reply(res, 423, err);
            break;
          }
        }
      });
    });

    server.Post("/admin/unlock", [this](const httplib::Request& req, httplib::Response& res) {
      handle(req, res, false, [&](const json& body) {
        std::string auth = req.get_header_value("Authorization");
        constexpr std::string_view kBearer = "Bearer ";
        const std::string token =
            auth.rfind(kBearer, 0) == 0 ? auth.substr(kBearer.size()) : std::string();
        accounts.unlock(token, string_field(body, "username"));
        reply(res, 200, {{"ok", true}});
      });
    });

    server.Get("/health", [this](const httplib::Request&, httplib::Response& res) {
      json body{{"status", "ok"}};
      if (options.honeychecker_probe) {
        body["honeychecker"] = options.honeychecker_probe() ? "ok" : "unreachable";
      }
      reply(res, 200, body);
    });
  }
};

ApiServer::ApiServer(AccountService& accounts, ApiServerOptions options)
    : impl_(std::make_unique<Impl>(accounts, std::move(options))) {
  impl_->install();
}

ApiServer::~ApiServer() { stop(); }

int ApiServer::bind(const std::string& host, int port) {
  int bound = port == 0 ? impl_->server.bind_to_any_port(host)
                        : (impl_->server.bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw IoError("cannot bind " + host + ":" + std::to_string(port));
  return bound;
}

void ApiServer::run() { impl_->lifecycle.run(impl_->server); }

void ApiServer::stop() {
  if (impl_) impl_->lifecycle.stop(impl_->server);
}

struct ServerApp::Impl {
  AppConfig config;
  SystemClock clock;
  SecureRandom rng;
  std::unique_ptr<AuditLog> audit;
  std::unique_ptr<AccountStore> store;
  std::unique_ptr<RemoteHoneycheckerClient> honeychecker;
  std::unique_ptr<SmsGateway> sms;
  std::unique_ptr<AccountService> accounts;
  std::unique_ptr<ApiServer> api;
};

ServerApp::ServerApp(const AppConfig& config) : impl_(std::make_unique<Impl>()) {
  auto& s = *impl_;
  s.config = config;
  if (config.honeychecker.shared_secret.empty()) {
    throw ConfigError("honeychecker.shared_secret must be set");
  }
  s.audit = std::make_unique<AuditLog>(
      s.clock, config.server.audit_log.empty() ? AuditLog::to_stream(std::cerr)
                                               : AuditLog::to_file(config.server.audit_log.string()));
  s.store = std::make_unique<AccountStore>(config.server.accounts_db);
  s.honeychecker = std::make_unique<RemoteHoneycheckerClient>(config.honeychecker.url,
                                                              config.honeychecker.shared_secret);
  if (config.sms.gateway == "file") {
    s.sms = std::make_unique<FileSmsGateway>(config.sms.outbox);
  } else if (config.sms.gateway == "none") {
    s.sms = std::make_unique<UnavailableSmsGateway>();
  } else {
    s.sms = std::make_unique<MockSmsGateway>();
  }
  s.accounts = std::make_unique<AccountService>(*s.store, *s.honeychecker, *s.sms, s.clock, s.rng,
                                                *s.audit, config.accounts);

  ApiServerOptions options;
  options.rate_limit_per_second = config.server.rate_limit_per_second;
  const auto [authority, prefix] = split_http_url(config.honeychecker.url);
  options.honeychecker_probe = [authority = authority, prefix = prefix] {
    httplib::Client client(authority);
    client.set_connection_timeout(1, 0);
    auto r = client.Get(prefix + "/health");
    return r && r->status == 200;
  };
  s.api = std::make_unique<ApiServer>(*s.accounts, std::move(options));
}

ServerApp::~ServerApp() = default;

int ServerApp::bind() { return impl_->api->bind(impl_->config.server.host, impl_->config.server.port); }

void ServerApp::run() { impl_->api->run(); }

void ServerApp::stop() { impl_->api->stop(); }

AccountService& ServerApp::accounts() { return *impl_->accounts; }

}  // namespace twofha
