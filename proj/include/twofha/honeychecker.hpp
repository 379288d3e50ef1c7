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
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "twofha/clock.hpp"

namespace twofha {

struct SweetIndexRecord {
  std::string username;
  int sweet_index = 0;
  std::int64_t updated_at = 0;

  bool operator==(const SweetIndexRecord&) const = default;
};

/// Raised when a submitted slot is not the stored sweet index.
struct AlarmSignal {
  std::string username;
  int observed_slot = 0;
  std::int64_t raised_at = 0;

  bool operator==(const AlarmSignal&) const = default;
};

class AlarmSink {
 public:
  virtual ~AlarmSink() = default;
  virtual void raise(const AlarmSignal& alarm) = 0;
};

class MemoryAlarmSink final : public AlarmSink {
 public:
  void raise(const AlarmSignal& alarm) override;
  std::vector<AlarmSignal> alarms() const;
  std::size_t count() const;

 private:
  mutable std::mutex mutex_;
  std::vector<AlarmSignal> alarms_;
};

/// One JSON line per alarm, appended to a file (or stderr if the path is empty).
class LogAlarmSink final : public AlarmSink {
 public:
  explicit LogAlarmSink(std::filesystem::path path = {});
  void raise(const AlarmSignal& alarm) override;

 private:
  std::mutex mutex_;
  std::filesystem::path path_;
};

/// Sends every alarm to several sinks.
class FanoutAlarmSink final : public AlarmSink {
 public:
  void add(std::shared_ptr<AlarmSink> sink) { sinks_.push_back(std::move(sink)); }
  void raise(const AlarmSignal& alarm) override;

 private:
  std::vector<std::shared_ptr<AlarmSink>> sinks_;
};

/// Sweet-index persistence. Backed by an append-only JSON-lines log that is
/// replayed (and compacted) on open; each write is flushed and fsync'ed
/// before returning. An empty path keeps everything in memory.
///
/// The log only ever holds username, sweet_index and timestamps.
class IndexStore {
 public:
  explicit IndexStore(std::filesystem::path path = {});

  void upsert(const SweetIndexRecord& record);
  void erase(const std::string& username, std::int64_t at);
  std::optional<SweetIndexRecord> find(const std::string& username) const;
  std::size_t size() const { return records_.size(); }
  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  void replay();
  void compact();
  void append(const std::string& line);

  std::filesystem::path path_;
  std::map<std::string, SweetIndexRecord> records_;
};

/// The separated component that knows which slot is genuine.
/// Concurrent checks share a reader lock; set/delete are exclusive.
class Honeychecker {
 public:
  struct CheckResult {
    bool match = false;
    std::optional<AlarmSignal> alarm;
  };

  Honeychecker(std::unique_ptr<IndexStore> store, int slot_count, AlarmSink& alarms,
               const Clock& clock);

  /// Throws ValidationError for an empty username or index outside 1..N.
  void set_index(const std::string& username, int index);

  /// Throws LookupError for an unknown username. On mismatch exactly one
  /// AlarmSignal goes to the sink.
  CheckResult check(const std::string& username, int observed_slot);

  /// Idempotent.
  void delete_index(const std::string& username);

  int slot_count() const noexcept { return slot_count_; }
  const IndexStore& store() const noexcept { return *store_; }

 private:
  std::unique_ptr<IndexStore> store_;
  int slot_count_;
  AlarmSink& alarms_;
  const Clock& clock_;
  mutable std::shared_mutex mutex_;
};

/// What the accounts service needs from a honeychecker, local or remote.
class HoneycheckerClient {
 public:
  virtual ~HoneycheckerClient() = default;
  virtual void set_index(const std::string& username, int index) = 0;
  virtual bool check(const std::string& username, int observed_slot) = 0;
  virtual void delete_index(const std::string& username) = 0;
};

/// In-process adapter.
class LocalHoneycheckerClient final : public HoneycheckerClient {
 public:
  explicit LocalHoneycheckerClient(Honeychecker& checker) : checker_(checker) {}
  void set_index(const std::string& username, int index) override {
    checker_.set_index(username, index);
  }
  bool check(const std::string& username, int observed_slot) override {
    return checker_.check(username, observed_slot).match;
  }
  void delete_index(const std::string& username) override { checker_.delete_index(username); }

 private:
  Honeychecker& checker_;
};

}  // namespace twofha
