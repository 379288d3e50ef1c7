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


#include "twofha/sms.hpp"

#include <fstream>

#include <json.hpp>

#include "twofha/errors.hpp"

namespace twofha {

std::string format_sms_body(const std::vector<OtpCode>& codes) {
  std::string body;
  for (std::size_t i = 0; i < codes.size(); ++i) {
    if (i > 0) body += '\n';
    body += std::to_string(i + 1) + ": " + codes[i].str();
  }
  return body;
}

void MockSmsGateway::send(const SmsMessage& message) {
  std::lock_guard lock(mutex_);
  if (down_) throw IoError("SMS gateway unavailable");
  outbox_.push_back(message);
}

std::vector<SmsMessage> MockSmsGateway::outbox() const {
  std::lock_guard lock(mutex_);
  return outbox_;
}

std::size_t MockSmsGateway::size() const {
  std::lock_guard lock(mutex_);
  return outbox_.size();
}

void MockSmsGateway::set_down(bool down) {
  std::lock_guard lock(mutex_);
  down_ = down;
}

void FileSmsGateway::send(const SmsMessage& message) {
  std::lock_guard lock(mutex_);
  std::ofstream out(path_, std::ios::app);
  out << nlohmann::json{{"to", message.to}, {"body", message.body}}.dump() << '\n';
  if (!out) throw IoError("cannot append to SMS outbox " + path_.string());
}

void UnavailableSmsGateway::send(const SmsMessage&) {
  throw IoError("no SMS gateway configured");
}

}  // namespace twofha
