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


#include "twofha/honeychecker.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <iostream>
#include <sstream>

#include <json.hpp>

#include "twofha/errors.hpp"

namespace twofha {

namespace {

using nlohmann::json;

json alarm_json(const AlarmSignal& alarm) {
  return {{"event", "honeychecker_alarm"},
          {"username", alarm.username},
          {"observed_slot", alarm.observed_slot},
          {"raised_at", alarm.raised_at}};
}

void write_all_and_sync(int fd, const std::string& data, const std::filesystem::path& path) {
  std::size_t written = 0;
  while (written < data.size()) {
    ssize_t n = ::write(fd, data.data() + written, data.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw StorageError("write to " + path.string() + " failed");
    }
    written += static_cast<std::size_t>(n);
  }
  if (::fsync(fd) != 0) throw StorageError("fsync of " + path.string() + " failed");
}

std::string set_line(const SweetIndexRecord& record) {
  return json{{"op", "set"},
              {"username", record.username},
              {"sweet_index", record.sweet_index},
              {"updated_at", record.updated_at}}
             .dump() +
         "\n";
}

}  // namespace

void MemoryAlarmSink::raise(const AlarmSignal& alarm) {
  std::lock_guard lock(mutex_);
  alarms_.push_back(alarm);
}

std::vector<AlarmSignal> MemoryAlarmSink::alarms() const {
  std::lock_guard lock(mutex_);
  return alarms_;
}

std::size_t MemoryAlarmSink::count() const {
  std::lock_guard lock(mutex_);
  return alarms_.size();
}

LogAlarmSink::LogAlarmSink(std::filesystem::path path) : path_(std::move(path)) {}

void LogAlarmSink::raise(const AlarmSignal& alarm) {
  std::lock_guard lock(mutex_);
  const std::string line = alarm_json(alarm).dump();
  if (path_.empty()) {
    std::cerr << line << std::endl;
    return;
  }
  std::ofstream out(path_, std::ios::app);
  out << line << '\n';
}

void FanoutAlarmSink::raise(const AlarmSignal& alarm) {
  for (auto& sink : sinks_) sink->raise(alarm);
}

IndexStore::IndexStore(std::filesystem::path path) : path_(std::move(path)) {
  if (path_.empty()) return;
  if (std::filesystem::exists(path_)) replay();
  compact();
}

void IndexStore::replay() {
  std::ifstream in(path_);
  if (!in) throw StorageError("cannot open honeychecker store " + path_.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json entry = json::parse(line, nullptr, false);
    if (entry.is_discarded() || !entry.is_object()) {
      // A torn final append is dropped; corruption anywhere else is fatal.
      if (in.peek() == std::char_traits<char>::eof()) break;
      throw StorageError("corrupt honeychecker store at line " + std::to_string(line_no));
    }
    const std::string op = entry.value("op", "");
    const std::string username = entry.value("username", "");
    if (op == "set") {
      records_[username] = SweetIndexRecord{username, entry.value("sweet_index", 0),
                                            entry.value("updated_at", std::int64_t{0})};
    } else if (op == "delete") {
      records_.erase(username);
    } else {
      throw StorageError("unknown operation in honeychecker store at line " +
                         std::to_string(line_no));
    }
  }
}

void IndexStore::compact() {
  std::string data;
  for (const auto& [name, record] : records_) data += set_line(record);

  auto tmp = path_;
  tmp += ".tmp";
  int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0600);
  if (fd < 0) throw StorageError("cannot create " + tmp.string());
  try {
    write_all_and_sync(fd, data, tmp);
  } catch (...) {
    ::close(fd);
    throw;
  }
  ::close(fd);
  std::error_code ec;
  std::filesystem::rename(tmp, path_, ec);
  if (ec) throw StorageError("cannot replace " + path_.string() + ": " + ec.message());
}

void IndexStore::append(const std::string& line) {
  if (path_.empty()) return;
  int fd = ::open(path_.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0600);
  if (fd < 0) throw StorageError("cannot open " + path_.string());
  try {
    write_all_and_sync(fd, line, path_);
  } catch (...) {
    ::close(fd);
    throw;
  }
  ::close(fd);
}

void IndexStore::upsert(const SweetIndexRecord& record) {
  append(set_line(record));
  records_[record.username] = record;
}

void IndexStore::erase(const std::string& username, std::int64_t at) {
  if (records_.find(username) == records_.end()) return;
  append(json{{"op", "delete"}, {"username", username}, {"updated_at", at}}.dump() + "\n");
  records_.erase(username);
}

std::optional<SweetIndexRecord> IndexStore::find(const std::string& username) const {
  auto it = records_.find(username);
  if (it == records_.end()) return std::nullopt;
  return it->second;
}

Honeychecker::Honeychecker(std::unique_ptr<IndexStore> store, int slot_count, AlarmSink& alarms,
                           const Clock& clock)
    : store_(std::move(store)), slot_count_(slot_count), alarms_(alarms), clock_(clock) {
  if (slot_count_ < 2) throw ConfigError("honeychecker slot count must be at least 2");
}

void Honeychecker::set_index(const std::string& username, int index) {
  if (username.empty()) throw ValidationError("username must not be empty");
  if (index < 1 || index > slot_count_) {
    throw ValidationError("sweet index must be in 1.." + std::to_string(slot_count_));
  }
  std::unique_lock lock(mutex_);
  store_->upsert({username, index, clock_.now()});
}

Honeychecker::CheckResult Honeychecker::check(const std::string& username, int observed_slot) {
  CheckResult result;
  {
    std::shared_lock lock(mutex_);
    auto record = store_->find(username);
    if (!record) throw LookupError("no sweet index registered for this user");
    result.match = record->sweet_index == observed_slot;
    if (!result.match) result.alarm = AlarmSignal{username, observed_slot, clock_.now()};
  }
  if (result.alarm) alarms_.raise(*result.alarm);
  return result;
}

void Honeychecker::delete_index(const std::string& username) {
  std::unique_lock lock(mutex_);
  store_->erase(username, clock_.now());
}

}  // namespace twofha
