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


#include "twofha/account_store.hpp"

#include <sqlite3.h>

#include "twofha/errors.hpp"

namespace twofha {

namespace {

using nlohmann::json;

class Statement {
 public:
  Statement(sqlite3* db, const char* sql) : db_(db) {
    if (sqlite3_prepare_v2(db, sql, -1, &stmt_, nullptr) != SQLITE_OK) {
      throw StorageError(std::string("prepare failed: ") + sqlite3_errmsg(db));
    }
  }
  ~Statement() { sqlite3_finalize(stmt_); }
  Statement(const Statement&) = delete;
  Statement& operator=(const Statement&) = delete;

  Statement& bind(int i, const std::string& v) {
    sqlite3_bind_text(stmt_, i, v.c_str(), static_cast<int>(v.size()), SQLITE_TRANSIENT);
    return *this;
  }
  Statement& bind(int i, std::int64_t v) {
    sqlite3_bind_int64(stmt_, i, v);
    return *this;
  }
  Statement& bind(int i, int v) { return bind(i, static_cast<std::int64_t>(v)); }

  /// True while a row is available.
  bool step() {
    const int rc = sqlite3_step(stmt_);
    if (rc == SQLITE_ROW) return true;
    if (rc == SQLITE_DONE) return false;
    last_error_ = rc;
    throw StorageError(std::string("statement failed: ") + sqlite3_errmsg(db_));
  }

  std::string text(int col) const {
    const auto* p = sqlite3_column_text(stmt_, col);
    return p ? std::string(reinterpret_cast<const char*>(p),
                           static_cast<std::size_t>(sqlite3_column_bytes(stmt_, col)))
             : std::string();
  }
  std::int64_t int64(int col) const { return sqlite3_column_int64(stmt_, col); }
  int integer(int col) const { return sqlite3_column_int(stmt_, col); }

  sqlite3_stmt* raw() const { return stmt_; }

 private:
  sqlite3* db_;
  sqlite3_stmt* stmt_ = nullptr;
  int last_error_ = SQLITE_OK;
};

std::string encode_slots(const SweetBundle& bundle) {
  json slots = json::array();
  for (const auto& s : bundle.slots()) slots.push_back(s.base32());
  return slots.dump();
}

SweetBundle decode_slots(const std::string& username, const std::string& text) {
  json slots = json::parse(text, nullptr, false);
  if (!slots.is_array()) throw StorageError("corrupt OTP secret column for a user");
  std::vector<SweetSecret> secrets;
  int ordinal = 1;
  for (const auto& s : slots) secrets.push_back(SweetSecret::from_base32(s.get<std::string>(), ordinal++));
  return SweetBundle(username, std::move(secrets));
}

constexpr const char* kUserColumns =
    "username, password_hash, firstname, lastname, phone, status, lock_reason, locked_at, "
    "failed_password_count, failed_otp_count, otp_secrets, created_at";

UserRecord read_user(const Statement& st) {
  const std::string username = st.text(0);
  return UserRecord{
      username,
      st.text(1),
      st.text(2),
      st.text(3),
      st.text(4),
      st.text(5) == "locked" ? AccountStatus::kLocked : AccountStatus::kActive,
      st.text(6),
      st.int64(7),
      st.integer(8),
      st.integer(9),
      decode_slots(username, st.text(10)),
      st.int64(11),
  };
}

const char* status_text(AccountStatus status) {
  return status == AccountStatus::kLocked ? "locked" : "active";
}

}  // namespace

AccountStore::AccountStore(const std::filesystem::path& path) {
  const int flags = SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE | SQLITE_OPEN_FULLMUTEX;
  if (sqlite3_open_v2(path.c_str(), &db_, flags, nullptr) != SQLITE_OK) {
    std::string message = db_ ? sqlite3_errmsg(db_) : "out of memory";
    sqlite3_close(db_);
    db_ = nullptr;
    throw StorageError("cannot open account store " + path.string() + ": " + message);
  }
  sqlite3_busy_timeout(db_, 5000);
  try {
    if (path != ":memory:") exec("PRAGMA journal_mode=WAL");
    exec("PRAGMA foreign_keys=ON");
    exec(
        "CREATE TABLE IF NOT EXISTS meta ("
        "  key TEXT PRIMARY KEY, value TEXT NOT NULL)");
    exec(
        "CREATE TABLE IF NOT EXISTS users ("
        "  username TEXT PRIMARY KEY,"
        "  password_hash TEXT NOT NULL,"
        "  firstname TEXT NOT NULL,"
        "  lastname TEXT NOT NULL,"
        "  phone TEXT NOT NULL,"
        "  status TEXT NOT NULL,"
        "  lock_reason TEXT NOT NULL DEFAULT '',"
        "  locked_at INTEGER NOT NULL DEFAULT 0,"
        "  failed_password_count INTEGER NOT NULL DEFAULT 0,"
        "  failed_otp_count INTEGER NOT NULL DEFAULT 0,"
        "  otp_secrets TEXT NOT NULL,"
        "  created_at INTEGER NOT NULL)");
    exec(
        "CREATE TABLE IF NOT EXISTS sessions ("
        "  session_id TEXT PRIMARY KEY,"
        "  username TEXT NOT NULL REFERENCES users(username) ON DELETE CASCADE,"
        "  issued_at INTEGER NOT NULL,"
        "  expires_at INTEGER NOT NULL)");
    exec(
        "CREATE TABLE IF NOT EXISTS breach_events ("
        "  id INTEGER PRIMARY KEY AUTOINCREMENT,"
        "  username TEXT NOT NULL,"
        "  submitted_code TEXT NOT NULL,"
        "  matched_slot INTEGER NOT NULL,"
        "  at INTEGER NOT NULL)");
    exec("INSERT OR IGNORE INTO meta(key, value) VALUES ('schema_version', '1')");
  } catch (...) {
    sqlite3_close(db_);
    db_ = nullptr;
    throw;
  }
  if (schema_version() != kSchemaVersion) {
    sqlite3_close(db_);
    db_ = nullptr;
    throw StorageError("account store has an unsupported schema version");
  }
}

AccountStore::~AccountStore() { sqlite3_close(db_); }

void AccountStore::exec(const char* sql) const {
  char* error = nullptr;
  if (sqlite3_exec(db_, sql, nullptr, nullptr, &error) != SQLITE_OK) {
    std::string message = error ? error : "unknown error";
    sqlite3_free(error);
    throw StorageError("account store: " + message);
  }
}

int AccountStore::schema_version() const {
  std::lock_guard lock(mutex_);
  Statement st(db_, "SELECT value FROM meta WHERE key = 'schema_version'");
  return st.step() ? std::stoi(st.text(0)) : 0;
}

void AccountStore::insert_user(const UserRecord& user) {
  std::lock_guard lock(mutex_);
  Statement st(db_,
               "INSERT INTO users(username, password_hash, firstname, lastname, phone, status, "
               "lock_reason, locked_at, failed_password_count, failed_otp_count, otp_secrets, "
               "created_at) VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?)");
  st.bind(1, user.username)
      .bind(2, user.password_hash)
      .bind(3, user.firstname)
      .bind(4, user.lastname)
      .bind(5, user.phone)
      .bind(6, std::string(status_text(user.status)))
      .bind(7, user.lock_reason)
      .bind(8, user.locked_at)
      .bind(9, user.failed_password_count)
      .bind(10, user.failed_otp_count)
      .bind(11, encode_slots(user.bundle))
      .bind(12, user.created_at);
  if (sqlite3_step(st.raw()) != SQLITE_DONE) {
    if (sqlite3_extended_errcode(db_) == SQLITE_CONSTRAINT_PRIMARYKEY) {
      throw ConflictError("username is already taken");
    }
    throw StorageError(std::string("insert user failed: ") + sqlite3_errmsg(db_));
  }
}

std::optional<UserRecord> AccountStore::find_user(const std::string& username) const {
  std::lock_guard lock(mutex_);
  Statement st(db_, (std::string("SELECT ") + kUserColumns + " FROM users WHERE username = ?").c_str());
  st.bind(1, username);
  if (!st.step()) return std::nullopt;
  return read_user(st);
}

void AccountStore::update_user_state(const UserRecord& user) {
  std::lock_guard lock(mutex_);
  Statement st(db_,
               "UPDATE users SET status = ?, lock_reason = ?, locked_at = ?, "
               "failed_password_count = ?, failed_otp_count = ? WHERE username = ?");
  st.bind(1, std::string(status_text(user.status)))
      .bind(2, user.lock_reason)
      .bind(3, user.locked_at)
      .bind(4, user.failed_password_count)
      .bind(5, user.failed_otp_count)
      .bind(6, user.username);
  st.step();
  if (sqlite3_changes(db_) != 1) throw LookupError("unknown user");
}

void AccountStore::delete_user(const std::string& username) {
  std::lock_guard lock(mutex_);
  Statement st(db_, "DELETE FROM users WHERE username = ?");
  st.bind(1, username);
  st.step();
}

std::size_t AccountStore::user_count() const {
  std::lock_guard lock(mutex_);
  Statement st(db_, "SELECT COUNT(*) FROM users");
  st.step();
  return static_cast<std::size_t>(st.int64(0));
}

void AccountStore::insert_session(const LoginSession& session) {
  std::lock_guard lock(mutex_);
  Statement st(db_,
               "INSERT INTO sessions(session_id, username, issued_at, expires_at) "
               "VALUES (?, ?, ?, ?)");
  st.bind(1, session.session_id)
      .bind(2, session.username)
      .bind(3, session.issued_at)
      .bind(4, session.expires_at);
  st.step();
}

std::optional<LoginSession> AccountStore::take_session(const std::string& session_id) {
  std::lock_guard lock(mutex_);
  Statement st(db_,
               "DELETE FROM sessions WHERE session_id = ? "
               "RETURNING session_id, username, issued_at, expires_at");
  st.bind(1, session_id);
  if (!st.step()) return std::nullopt;
  LoginSession session{st.text(0), st.text(1), st.int64(2), st.int64(3)};
  while (st.step()) {
  }
  return session;
}

std::size_t AccountStore::purge_expired_sessions(std::int64_t now) {
  std::lock_guard lock(mutex_);
  Statement st(db_, "DELETE FROM sessions WHERE expires_at <= ?");
  st.bind(1, now);
  st.step();
  return static_cast<std::size_t>(sqlite3_changes(db_));
}

void AccountStore::insert_breach(const BreachEvent& event) {
  std::lock_guard lock(mutex_);
  Statement st(db_,
               "INSERT INTO breach_events(username, submitted_code, matched_slot, at) "
               "VALUES (?, ?, ?, ?)");
  st.bind(1, event.username).bind(2, event.submitted_code).bind(3, event.matched_slot).bind(4, event.at);
  st.step();
}

std::vector<BreachEvent> AccountStore::breaches(const std::string& username) const {
  std::lock_guard lock(mutex_);
  Statement st(db_,
               "SELECT username, submitted_code, matched_slot, at FROM breach_events "
               "WHERE username = ? ORDER BY id");
  st.bind(1, username);
  std::vector<BreachEvent> out;
  while (st.step()) out.push_back({st.text(0), st.text(1), st.integer(2), st.int64(3)});
  return out;
}

json AccountStore::dump() const {
  std::lock_guard lock(mutex_);
  json out = json::object();
  for (const char* table : {"meta", "users", "sessions", "breach_events"}) {
    Statement st(db_, (std::string("SELECT * FROM ") + table).c_str());
    json rows = json::array();
    while (st.step()) {
      json row = json::object();
      const int cols = sqlite3_column_count(st.raw());
      for (int c = 0; c < cols; ++c) {
        const char* name = sqlite3_column_name(st.raw(), c);
        if (sqlite3_column_type(st.raw(), c) == SQLITE_INTEGER) {
          row[name] = st.int64(c);
        } else {
          row[name] = st.text(c);
        }
      }
      rows.push_back(std::move(row));
    }
    out[table] = std::move(rows);
  }
  return out;
}

}  // namespace twofha
