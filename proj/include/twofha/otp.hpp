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
#include <string>
#include <string_view>
#include <vector>

#include "twofha/crypto.hpp"

namespace twofha {

/// Parameters shared by HOTP and TOTP. The defaults are the ones every
/// mainstream authenticator app honours.
struct TotpParams {
  std::int64_t step = 30;  // seconds
  std::int64_t t0 = 0;     // unix time of counter 0
  int digits = 6;
  HashAlgorithm algorithm = HashAlgorithm::kSha1;
  int skew = 1;  // accepted +/- steps in verify_code

  /// Throws ValidationError unless step > 0, 6 <= digits <= 8, skew >= 0.
  void validate() const;

  bool operator==(const TotpParams&) const = default;
};

/// One OTP key of a sweet bundle. `id` is the 1-based slot ordinal.
class SweetSecret {
 public:
  static constexpr std::size_t kMinLength = 10;

  /// Throws ValidationError if `raw` is shorter than kMinLength bytes.
  explicit SweetSecret(Bytes raw, int id = 1);

  static SweetSecret from_base32(std::string_view text, int id = 1);

  const Bytes& raw() const noexcept { return raw_; }
  int id() const noexcept { return id_; }
  std::string base32() const;

  bool operator==(const SweetSecret&) const = default;

 private:
  Bytes raw_;
  int id_;
};

/// A decimal one-time code, zero-padded to a fixed number of digits.
class OtpCode {
 public:
  /// Throws ValidationError unless `text` is exactly `digits` ASCII digits.
  static OtpCode parse(std::string_view text, int digits = 6);

  const std::string& str() const noexcept { return text_; }
  std::size_t size() const noexcept { return text_.size(); }
  std::uint32_t value() const;

  bool operator==(const OtpCode&) const = default;

 private:
  explicit OtpCode(std::string text) : text_(std::move(text)) {}
  friend OtpCode hotp(const SweetSecret&, std::uint64_t, const TotpParams&);

  std::string text_;
};

/// RFC 4226: dynamic truncation of HMAC(secret, big-endian counter).
OtpCode hotp(const SweetSecret& secret, std::uint64_t counter, const TotpParams& params);

/// RFC 6238 time-step counter. Throws ValidationError if unix_time < t0.
std::uint64_t time_counter(std::int64_t unix_time, const TotpParams& params);

/// RFC 6238. Throws ValidationError if unix_time < params.t0.
OtpCode totp(const SweetSecret& secret, std::int64_t unix_time, const TotpParams& params);

/// Seconds until the current time step ends.
std::int64_t seconds_remaining(std::int64_t unix_time, const TotpParams& params);

/// True iff `candidate` equals totp(secret, unix_time + k*step) for some
/// |k| <= skew. Every window position is computed and compared in constant
/// time, so timing does not reveal which (if any) matched. Throws
/// ValidationError for a malformed candidate.
bool verify_code(const SweetSecret& secret, std::string_view candidate,
                 std::int64_t unix_time, const TotpParams& params);

/// The distinct codes verify_code accepts at `unix_time`, in window order.
std::vector<OtpCode> window_codes(const SweetSecret& secret, std::int64_t unix_time,
                                  const TotpParams& params);

}  // namespace twofha
