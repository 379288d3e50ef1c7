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


#include "twofha/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>

#include "twofha/errors.hpp"

namespace twofha {

namespace {

using nlohmann::json;

enum class EnvType { kString, kInt };

struct EnvOverride {
  const char* name;
  const char* pointer;
  EnvType type;
};

constexpr EnvOverride kEnvOverrides[] = {
    {"TWOFHA_SERVER_HOST", "/server/host", EnvType::kString},
    {"TWOFHA_SERVER_PORT", "/server/port", EnvType::kInt},
    {"TWOFHA_ACCOUNTS_DB", "/server/accounts_db", EnvType::kString},
    {"TWOFHA_AUDIT_LOG", "/server/audit_log", EnvType::kString},
    {"TWOFHA_RATE_LIMIT", "/server/rate_limit_per_second", EnvType::kInt},
    {"TWOFHA_ADMIN_TOKEN", "/accounts/admin_token", EnvType::kString},
    {"TWOFHA_HONEYCHECKER_URL", "/honeychecker/url", EnvType::kString},
    {"TWOFHA_HONEYCHECKER_SECRET", "/honeychecker/shared_secret", EnvType::kString},
    {"TWOFHA_HONEYCHECKER_HOST", "/honeychecker/host", EnvType::kString},
    {"TWOFHA_HONEYCHECKER_PORT", "/honeychecker/port", EnvType::kInt},
    {"TWOFHA_HONEYCHECKER_STORE", "/honeychecker/store", EnvType::kString},
    {"TWOFHA_SMS_GATEWAY", "/sms/gateway", EnvType::kString},
    {"TWOFHA_SMS_OUTBOX", "/sms/outbox", EnvType::kString},
    {"TWOFHA_SLOTS", "/otp/slots", EnvType::kInt},
};

// Walks one config section, rejecting keys nobody asked for.
class Section {
 public:
  Section(const json& doc, std::string name) : name_(std::move(name)) {
    if (doc.contains(name_)) {
      node_ = doc.at(name_);
      if (!node_.is_object()) throw ConfigError("config section '" + name_ + "' must be an object");
    } else {
      node_ = json::object();
    }
  }

  template <typename T>
  void read(const char* key, T& out) {
    seen_.insert(key);
    if (!node_.contains(key)) return;
    try {
      out = node_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError("config key '" + name_ + "." + key + "' has the wrong type");
    }
  }

  bool has(const char* key) const { return node_.contains(key); }
  const json& at(const char* key) {
    seen_.insert(key);
    return node_.at(key);
  }

  void finish() const {
    for (const auto& [key, value] : node_.items()) {
      if (!seen_.count(key)) throw ConfigError("unknown config key '" + name_ + "." + key + "'");
    }
  }

 private:
  std::string name_;
  json node_;
  std::set<std::string> seen_;
};

void apply_env(json& doc, const EnvLookup& env) {
  for (const auto& o : kEnvOverrides) {
    auto value = env(o.name);
    if (!value) continue;
    json::json_pointer ptr(o.pointer);
    if (o.type == EnvType::kInt) {
      try {
        std::size_t used = 0;
        const int v = std::stoi(*value, &used);
        if (used != value->size()) throw std::invalid_argument("trailing");
        doc[ptr] = v;
      } catch (const std::exception&) {
        throw ConfigError(std::string(o.name) + " must be an integer");
      }
    } else {
      doc[ptr] = *value;
    }
  }
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::filesystem::path& p) {
  if (p.empty() || p.is_absolute() || p == ":memory:") return p;
  return base / p;
}

}  // namespace

std::optional<std::string> process_env(const std::string& name) {
  if (const char* v = std::getenv(name.c_str())) return std::string(v);
  return std::nullopt;
}

AppConfig parse_config(const json& document, const EnvLookup& env) {
  if (!document.is_object()) throw ConfigError("config must be a JSON object");
  json doc = document;
  apply_env(doc, env);

  for (const auto& [key, value] : doc.items()) {
    static const std::set<std::string> kSections = {"server", "honeychecker", "sms", "otp",
                                                    "accounts"};
    if (!kSections.count(key)) throw ConfigError("unknown config section '" + key + "'");
  }

  AppConfig cfg;

  Section server(doc, "server");
  std::string accounts_db = cfg.server.accounts_db.string();
  std::string audit_log;
  server.read("host", cfg.server.host);
  server.read("port", cfg.server.port);
  server.read("accounts_db", accounts_db);
  server.read("audit_log", audit_log);
  server.read("rate_limit_per_second", cfg.server.rate_limit_per_second);
  server.finish();
  cfg.server.accounts_db = accounts_db;
  cfg.server.audit_log = audit_log;

  Section hc(doc, "honeychecker");
  std::string store = cfg.honeychecker.store.string();
  std::string alarm_log;
  hc.read("url", cfg.honeychecker.url);
  hc.read("shared_secret", cfg.honeychecker.shared_secret);
  hc.read("host", cfg.honeychecker.host);
  hc.read("port", cfg.honeychecker.port);
  hc.read("store", store);
  hc.read("alarm_log", alarm_log);
  hc.read("alarm_webhook", cfg.honeychecker.alarm_webhook);
  hc.finish();
  cfg.honeychecker.store = store;
  cfg.honeychecker.alarm_log = alarm_log;

  Section sms(doc, "sms");
  std::string outbox = cfg.sms.outbox.string();
  sms.read("gateway", cfg.sms.gateway);
  sms.read("outbox", outbox);
  sms.finish();
  cfg.sms.outbox = outbox;
  if (cfg.sms.gateway != "mock" && cfg.sms.gateway != "file" && cfg.sms.gateway != "none") {
    throw ConfigError("sms.gateway must be one of mock, file, none");
  }

  Section otp(doc, "otp");
  std::string algorithm = "SHA1";
  otp.read("slots", cfg.accounts.slot_count);
  cfg.accounts.length_schedule = default_length_schedule(cfg.accounts.slot_count);
  otp.read("length_schedule", cfg.accounts.length_schedule);
  otp.read("step", cfg.accounts.totp.step);
  otp.read("t0", cfg.accounts.totp.t0);
  otp.read("digits", cfg.accounts.totp.digits);
  otp.read("skew", cfg.accounts.totp.skew);
  otp.read("algorithm", algorithm);
  otp.finish();
  try {
    cfg.accounts.totp.algorithm = parse_hash_algorithm(algorithm);
  } catch (const ValidationError& e) {
    throw ConfigError(e.what());
  }

  Section acc(doc, "accounts");
  acc.read("issuer", cfg.accounts.issuer);
  acc.read("session_ttl", cfg.accounts.session_ttl);
  acc.read("max_password_failures", cfg.accounts.max_password_failures);
  acc.read("max_otp_failures", cfg.accounts.max_otp_failures);
  acc.read("password_min_length", cfg.accounts.password_policy.min_length);
  acc.read("password_denylist", cfg.accounts.password_policy.denylist);
  acc.read("admin_token", cfg.accounts.admin_token);
  if (acc.has("scrypt")) {
    const json& s = acc.at("scrypt");
    if (!s.is_object()) throw ConfigError("accounts.scrypt must be an object");
    for (const auto& [key, value] : s.items()) {
      if (key != "log2_n" && key != "r" && key != "p") {
        throw ConfigError("unknown config key 'accounts.scrypt." + key + "'");
      }
      if (!value.is_number_integer()) throw ConfigError("accounts.scrypt values must be integers");
    }
    cfg.accounts.password_hash.log2_n = s.value("log2_n", cfg.accounts.password_hash.log2_n);
    cfg.accounts.password_hash.r = s.value("r", cfg.accounts.password_hash.r);
    cfg.accounts.password_hash.p = s.value("p", cfg.accounts.password_hash.p);
  }
  acc.finish();

  cfg.accounts.validate();
  if (cfg.server.port < 0 || cfg.server.port > 65535 || cfg.honeychecker.port < 0 ||
      cfg.honeychecker.port > 65535) {
    throw ConfigError("ports must be in 0..65535");
  }
  if (cfg.server.rate_limit_per_second < 0) throw ConfigError("rate limit must be non-negative");
  return cfg;
}

AppConfig load_config(const std::filesystem::path& path, const EnvLookup& env) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded()) throw ConfigError("config file " + path.string() + " is not valid JSON");
  AppConfig cfg = parse_config(doc, env);

  const auto base = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  cfg.server.accounts_db = resolve(base, cfg.server.accounts_db);
  cfg.server.audit_log = resolve(base, cfg.server.audit_log);
  cfg.honeychecker.store = resolve(base, cfg.honeychecker.store);
  cfg.honeychecker.alarm_log = resolve(base, cfg.honeychecker.alarm_log);
  cfg.sms.outbox = resolve(base, cfg.sms.outbox);
  return cfg;
}

void prepare_state_dirs(const AppConfig& config) {
  for (const auto& file : {config.server.accounts_db, config.server.audit_log,
                           config.honeychecker.store, config.honeychecker.alarm_log,
                           config.sms.outbox}) {
    if (file.empty() || file == ":memory:" || !file.has_parent_path()) continue;
    std::error_code ec;
    std::filesystem::create_directories(file.parent_path(), ec);
    if (ec) throw IoError("cannot create " + file.parent_path().string() + ": " + ec.message());
  }
}

}  // namespace twofha
