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
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "twofha/otp.hpp"

namespace twofha {

struct SmsMessage {
  std::string to;
  std::string body;

  bool operator==(const SmsMessage&) const = default;
};

/// "1: 123456\n2: 654321\n3: 000111" -- one line per slot, in slot order.
std::string format_sms_body(const std::vector<OtpCode>& codes);

/// Pluggable carrier. send() throws on delivery failure.
class SmsGateway {
 public:
  virtual ~SmsGateway() = default;
  virtual void send(const SmsMessage& message) = 0;
};

/// Keeps every message in an inspectable outbox. Can be switched into a
/// failing mode to simulate a carrier outage.
class MockSmsGateway final : public SmsGateway {
 public:
  void send(const SmsMessage& message) override;
  std::vector<SmsMessage> outbox() const;
  std::size_t size() const;
  void set_down(bool down);

 private:
  mutable std::mutex mutex_;
  std::vector<SmsMessage> outbox_;
  bool down_ = false;
};

/// Appends each message as a JSON line to a file; a development outbox.
class FileSmsGateway final : public SmsGateway {
 public:
  explicit FileSmsGateway(std::filesystem::path path) : path_(std::move(path)) {}
  void send(const SmsMessage& message) override;

 private:
  std::mutex mutex_;
  std::filesystem::path path_;
};

/// Always fails. Stands in for an unconfigured or unreachable carrier.
class UnavailableSmsGateway final : public SmsGateway {
 public:
  void send(const SmsMessage& message) override;
};

}  // namespace twofha
