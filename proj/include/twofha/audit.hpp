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
#include <functional>
#include <mutex>
#include <ostream>
#include <string>
#include <vector>

#include "twofha/clock.hpp"

namespace twofha {

/// Structured audit trail: one JSON object per line carrying a timestamp,
/// event kind, username and optional plain detail. Callers never pass
/// secrets, passwords, codes or sweet indexes.
class AuditLog {
 public:
  using Sink = std::function<void(const std::string& line)>;

  explicit AuditLog(const Clock& clock, Sink sink = {});

  /// Convenience sinks.
  static Sink to_stream(std::ostream& out);
  static Sink to_file(const std::string& path);

  void record(const std::string& event, const std::string& username,
              const std::string& detail = {});

 private:
  const Clock& clock_;
  Sink sink_;
  std::mutex mutex_;
};

/// Thread-safe capture of audit lines for tests.
class AuditCapture {
 public:
  AuditLog::Sink sink();
  std::vector<std::string> lines() const;

 private:
  mutable std::mutex mutex_;
  std::vector<std::string> lines_;
};

}  // namespace twofha
