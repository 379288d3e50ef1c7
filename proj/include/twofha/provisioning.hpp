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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "twofha/honeytoken.hpp"
#include "twofha/otp.hpp"
#include "twofha/qr.hpp"

namespace twofha {

enum class OtpType { kTotp, kHotp };

/// Fields carried by an otpauth:// key URI.
struct OtpauthKey {
  OtpType type = OtpType::kTotp;
  std::string issuer;
  std::string account;
  std::optional<int> slot;  // from a trailing " (slot N)" in the label
  Bytes secret;
  TotpParams params;           // step/digits/algorithm; skew and t0 are not carried
  std::uint64_t counter = 0;   // HOTP only

  bool operator==(const OtpauthKey&) const = default;
};

/// RFC 3986 percent-encoding. Unreserved characters and '(' ')' pass through.
std::string percent_encode(std::string_view text);
/// Throws ParseError on a truncated or non-hex escape.
std::string percent_decode(std::string_view text, std::size_t offset_base = 0);

/// otpauth://totp/{issuer}:{account} (slot {n})?secret=..&issuer=..&algorithm=..&digits=..&period=..
/// Throws ValidationError on an empty issuer or account.
std::string build_otpauth_uri(const std::string& issuer, const std::string& account,
                              const SweetSecret& secret, const TotpParams& params, int slot);

/// General form; omits the slot suffix when `key.slot` is empty and emits
/// `counter` instead of `period` for HOTP.
std::string build_otpauth_uri(const OtpauthKey& key);

/// Throws ParseError (with byte offset) on a foreign scheme, unknown type,
/// missing secret or malformed parameter.
OtpauthKey parse_otpauth_uri(std::string_view uri);

struct ProvisioningEntry {
  int slot = 0;
  std::string label;
  std::string uri;
  QrPayload qr;
};

struct ProvisioningBundle {
  std::vector<ProvisioningEntry> entries;
};

/// One entry per slot, in slot order. Labels all share the same shape and
/// differ only in the ordinal.
ProvisioningBundle provision(const SweetBundle& bundle, const std::string& issuer,
                             const TotpParams& params);

}  // namespace twofha
