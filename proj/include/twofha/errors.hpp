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

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace twofha {

/// Machine-readable error category. Every exception thrown by the library
/// derives from Error and carries one of these.
enum class ErrorKind {
  kValidation,     // malformed or out-of-range input
  kCodec,          // Base32 / base64 decoding failure
  kParse,          // otpauth URI parse failure
  kConfig,         // bad configuration
  kSize,           // QR capacity exceeded
  kConflict,       // duplicate username
  kPolicy,         // password policy violation
  kLookup,         // unknown record
  kInvalidCredentials,
  kLocked,
  kSession,        // unknown, expired or consumed login session
  kAuthorization,  // bad admin credential
  kIntegrity,      // honeychecker unreachable or out of sync with accounts
  kStorage,
  kIo,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

#define TWOFHA_DEFINE_ERROR(Name, Kind)                                      \
  class Name : public Error {                                                \
   public:                                                                   \
    explicit Name(const std::string& message) : Error(Kind, message) {}     \
  };

TWOFHA_DEFINE_ERROR(ValidationError, ErrorKind::kValidation)
TWOFHA_DEFINE_ERROR(CodecError, ErrorKind::kCodec)
TWOFHA_DEFINE_ERROR(ConfigError, ErrorKind::kConfig)
TWOFHA_DEFINE_ERROR(SizeError, ErrorKind::kSize)
TWOFHA_DEFINE_ERROR(ConflictError, ErrorKind::kConflict)
TWOFHA_DEFINE_ERROR(PolicyError, ErrorKind::kPolicy)
TWOFHA_DEFINE_ERROR(LookupError, ErrorKind::kLookup)
TWOFHA_DEFINE_ERROR(InvalidCredentialsError, ErrorKind::kInvalidCredentials)
TWOFHA_DEFINE_ERROR(LockedError, ErrorKind::kLocked)
TWOFHA_DEFINE_ERROR(SessionError, ErrorKind::kSession)
TWOFHA_DEFINE_ERROR(AuthorizationError, ErrorKind::kAuthorization)
TWOFHA_DEFINE_ERROR(IntegrityError, ErrorKind::kIntegrity)
TWOFHA_DEFINE_ERROR(StorageError, ErrorKind::kStorage)
TWOFHA_DEFINE_ERROR(IoError, ErrorKind::kIo)

#undef TWOFHA_DEFINE_ERROR

/// URI parse failure; `position()` is the byte offset into the input where
/// parsing gave up.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : Error(ErrorKind::kParse,
              message + " (at offset " + std::to_string(position) + ")"),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace twofha
