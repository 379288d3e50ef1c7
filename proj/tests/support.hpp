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

#include <fcntl.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <filesystem>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "twofha/accounts.hpp"
#include "twofha/honeychecker.hpp"

extern char** environ;

namespace twofha::testing {

/// RFC 4226 / RFC 6238 SHA-1 test key.
inline const Bytes kRfcSecret = {'1', '2', '3', '4', '5', '6', '7', '8', '9', '0',
                                 '1', '2', '3', '4', '5', '6', '7', '8', '9', '0'};

/// Seeded fixture (seed 2024, user "alice", schedule 10/15/20) evaluated at
/// kFixtureTime. Codes computed with Python's hmac module on an independent
/// re-implementation of the seeded generator.
inline constexpr std::uint64_t kFixtureSeed = 2024;
inline constexpr std::int64_t kFixtureTime = 1700000000;
inline const std::vector<std::string> kFixtureSecrets = {
    "2XWI56HMR5WZ7UXS", "P6S5WWF7PRXUYWNYTOXOA2N6", "PJBXMZDFYGQNJ222IVUW263LRWLTEYHD"};
inline const std::vector<std::string> kFixtureCodes = {"239723", "801697", "417211"};

class TempDir {
 public:
  TempDir() {
    std::string pattern = (std::filesystem::temp_directory_path() / "twofha-test-XXXXXX").string();
    if (!mkdtemp(pattern.data())) throw std::runtime_error("mkdtemp failed");
    path_ = pattern;
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

/// Child process with stdout captured through a pipe.
class Subprocess {
 public:
  explicit Subprocess(const std::vector<std::string>& argv, bool capture_stderr = false) {
    int fds[2];
    if (pipe(fds) != 0) throw std::runtime_error("pipe failed");
    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_adddup2(&actions, fds[1], STDOUT_FILENO);
    if (capture_stderr) posix_spawn_file_actions_adddup2(&actions, fds[1], STDERR_FILENO);
    posix_spawn_file_actions_addclose(&actions, fds[0]);
    std::vector<char*> args;
    for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
    args.push_back(nullptr);
    const int rc = posix_spawn(&pid_, args[0], &actions, nullptr, args.data(), environ);
    posix_spawn_file_actions_destroy(&actions);
    close(fds[1]);
    if (rc != 0) {
      close(fds[0]);
      throw std::runtime_error("posix_spawn failed for " + argv[0]);
    }
    out_fd_ = fds[0];
  }

  ~Subprocess() {
    if (pid_ > 0 && !exited_) {
      kill(pid_, SIGKILL);
      waitpid(pid_, nullptr, 0);
    }
    if (out_fd_ >= 0) close(out_fd_);
  }

  Subprocess(const Subprocess&) = delete;
  Subprocess& operator=(const Subprocess&) = delete;

  /// Reads one line of stdout; nullopt on EOF.
  std::optional<std::string> read_line() {
    std::string line;
    char c;
    while (true) {
      const ssize_t n = read(out_fd_, &c, 1);
      if (n <= 0) return line.empty() ? std::nullopt : std::optional<std::string>(line);
      if (c == '\n') return line;
      line.push_back(c);
    }
  }

  std::string read_all() {
    std::string out;
    char buf[4096];
    ssize_t n;
    while ((n = read(out_fd_, buf, sizeof buf)) > 0) out.append(buf, static_cast<std::size_t>(n));
    return out;
  }

  void signal(int sig) { kill(pid_, sig); }

  int wait() {
    int status = 0;
    waitpid(pid_, &status, 0);
    exited_ = true;
    return WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
  }

 private:
  pid_t pid_ = -1;
  int out_fd_ = -1;
  bool exited_ = false;
};

struct CommandResult {
  int exit_code;
  std::string output;
};

/// Runs to completion; output is stdout (plus stderr if requested).
inline CommandResult run_command(const std::vector<std::string>& argv, bool with_stderr = false) {
  Subprocess p(argv, with_stderr);
  std::string out = p.read_all();
  return {p.wait(), out};
}

/// Cheap scrypt so suites that hash thousands of passwords stay fast.
inline AccountsConfig fast_config() {
  AccountsConfig cfg;
  cfg.password_hash = {4, 8, 1};
  cfg.admin_token = "admin-secret-token";
  return cfg;
}

inline RegistrationForm form_for(const std::string& username, int position) {
  return {username, "correct horse battery", "Alice", "Anderson", "+306912345678", position};
}

/// A complete in-process deployment: in-memory account store, local
/// honeychecker with an in-memory alarm sink, mock SMS and frozen clock.
struct Harness {
  explicit Harness(AccountsConfig cfg = fast_config(), std::uint64_t seed = 7,
                   std::filesystem::path accounts_db = ":memory:",
                   std::filesystem::path index_store = {})
      : clock(kFixtureTime),
        rng(seed),
        audit(clock, audit_lines.sink()),
        store(accounts_db),
        checker(std::make_unique<IndexStore>(index_store), cfg.slot_count, alarms, clock),
        checker_client(checker),
        accounts(store, checker_client, sms, clock, rng, audit, cfg) {}

  /// Current delivered codes for a user, read back from the SMS outbox.
  std::vector<std::string> last_sms_codes() const {
    auto outbox = sms.outbox();
    if (outbox.empty()) return {};
    std::vector<std::string> codes;
    std::string body = outbox.back().body;
    std::size_t pos = 0;
    while (pos < body.size()) {
      auto end = body.find('\n', pos);
      if (end == std::string::npos) end = body.size();
      const std::string line = body.substr(pos, end - pos);
      codes.push_back(line.substr(line.find(": ") + 2));
      pos = end + 1;
    }
    return codes;
  }

  ManualClock clock;
  SeededRandom rng;
  AuditCapture audit_lines;
  AuditLog audit;
  AccountStore store;
  MemoryAlarmSink alarms;
  Honeychecker checker;
  LocalHoneycheckerClient checker_client;
  MockSmsGateway sms;
  AccountService accounts;
};

}  // namespace twofha::testing
