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


#include "twofha/audit.hpp"

#include <fstream>
#include <memory>

#include <json.hpp>

namespace twofha {

AuditLog::AuditLog(const Clock& clock, Sink sink) : clock_(clock), sink_(std::move(sink)) {}

AuditLog::Sink AuditLog::to_stream(std::ostream& out) {
  return [&out](const std::string& line) { out << line << '\n' << std::flush; };
}

AuditLog::Sink AuditLog::to_file(const std::string& path) {
  auto file = std::make_shared<std::ofstream>(path, std::ios::app);
  return [file](const std::string& line) { *file << line << '\n' << std::flush; };
}

void AuditLog::record(const std::string& event, const std::string& username,
                      const std::string& detail) {
  if (!sink_) return;
  nlohmann::json entry{{"ts", clock_.now()}, {"event", event}, {"username", username}};
  if (!detail.empty()) entry["detail"] = detail;
  std::lock_guard lock(mutex_);
  sink_(entry.dump());
}

AuditLog::Sink AuditCapture::sink() {
  return [this](const std::string& line) {
    std::lock_guard lock(mutex_);
    lines_.push_back(line);
  };
}

std::vector<std::string> AuditCapture::lines() const {
  std::lock_guard lock(mutex_);
  return lines_;
}

}  // namespace twofha
