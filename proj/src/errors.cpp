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


#include "twofha/errors.hpp"

namespace twofha {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::kValidation: return "validation_error";
    case ErrorKind::kCodec: return "codec_error";
    case ErrorKind::kParse: return "parse_error";
    case ErrorKind::kConfig: return "config_error";
    case ErrorKind::kSize: return "size_error";
    case ErrorKind::kConflict: return "conflict";
    case ErrorKind::kPolicy: return "policy_error";
    case ErrorKind::kLookup: return "not_found";
    case ErrorKind::kInvalidCredentials: return "invalid_credentials";
    case ErrorKind::kLocked: return "account_locked";
    case ErrorKind::kSession: return "session_error";
    case ErrorKind::kAuthorization: return "unauthorized";
    case ErrorKind::kIntegrity: return "integrity_error";
    case ErrorKind::kStorage: return "storage_error";
    case ErrorKind::kIo: return "io_error";
  }
  return "error";
}

}  // namespace twofha
