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

#include <filesystem>
#include <functional>
#include <optional>
#include <string>

#include <json.hpp>

#include "twofha/accounts.hpp"

namespace twofha {

struct ServerConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::filesystem::path accounts_db = "accounts.db";
  std::filesystem::path audit_log;  // empty: stderr
  int rate_limit_per_second = 5;    // per client IP on login endpoints; 0 disables
};

struct HoneycheckerConfig {
  std::string url = "http://127.0.0.1:8081";  // what the server connects to
  std::string shared_secret;
  std::string host = "127.0.0.1";             // what the honeychecker binds
  int port = 8081;
  std::filesystem::path store = "honeychecker.log";
  std::filesystem::path alarm_log;  // empty: stderr
  std::string alarm_webhook;
};

struct SmsConfig {
  std::string gateway = "mock";  // mock | file | none
  std::filesystem::path outbox = "sms-outbox.jsonl";
};

struct AppConfig {
  ServerConfig server;
  HoneycheckerConfig honeychecker;
  SmsConfig sms;
  AccountsConfig accounts;
};

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

/// Reads the process environment.
std::optional<std::string> process_env(const std::string& name);

/// Builds a config from a JSON document, then applies TWOFHA_* environment
/// overrides (see README). Unknown keys are rejected. Throws ConfigError.
AppConfig parse_config(const nlohmann::json& document, const EnvLookup& env = process_env);

/// parse_config on a file. Relative store paths resolve against the file's
/// directory. Throws ConfigError.
AppConfig load_config(const std::filesystem::path& path, const EnvLookup& env = process_env);

/// Creates the parent directories of every configured state file.
void prepare_state_dirs(const AppConfig& config);

}  // namespace twofha
