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

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "twofha/honeytoken.hpp"

struct sqlite3;

namespace twofha {

enum class AccountStatus { kActive, kLocked };

/// One registered user. Deliberately has no field for the sweet index.
struct UserRecord {
  std::string username;
  std::string password_hash;
  std::string firstname;
  std::string lastname;
  std::string phone;
  AccountStatus status = AccountStatus::kActive;
  std::string lock_reason;  // "password", "otp" or "breach" when locked
  std::int64_t locked_at = 0;
  int failed_password_count = 0;
  int failed_otp_count = 0;
  SweetBundle bundle;
  std::int64_t created_at = 0;
};

struct LoginSession {
  std::string session_id;
  std::string username;
  std::int64_t issued_at = 0;
  std::int64_t expires_at = 0;
};

struct BreachEvent {
  std::string username;
  std::string submitted_code;
  int matched_slot = 0;
  std::int64_t at = 0;

  bool operator==(const BreachEvent&) const = default;
};

/// Single-file SQLite store for users, login sessions and breach events.
/// A path of ":memory:" keeps the database in RAM. All access goes through
/// one connection guarded by a mutex.
class AccountStore {
 public:
  static constexpr int kSchemaVersion = 1;

  explicit AccountStore(const std::filesystem::path& path);
  ~AccountStore();

  AccountStore(const AccountStore&) = delete;
  AccountStore& operator=(const AccountStore&) = delete;

  int schema_version() const;

  /// Throws ConflictError if the username exists.
  void insert_user(const UserRecord& user);
  std::optional<UserRecord> find_user(const std::string& username) const;
  /// Persists status, lock fields and failure counters.
  void update_user_state(const UserRecord& user);
  void delete_user(const std::string& username);
  std::size_t user_count() const;

  void insert_session(const LoginSession& session);
  /// Removes and returns the session in one step, so it can be used once.
  std::optional<LoginSession> take_session(const std::string& session_id);
  std::size_t purge_expired_sessions(std::int64_t now);

  void insert_breach(const BreachEvent& event);
  std::vector<BreachEvent> breaches(const std::string& username) const;

  /// Every table as JSON, for audits and store-inspection tests.
  nlohmann::json dump() const;

 private:
  void exec(const char* sql) const;

  mutable std::mutex mutex_;
  sqlite3* db_ = nullptr;
};

}  // namespace twofha
