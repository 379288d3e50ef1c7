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


#include "twofha/otp.hpp"

#include <algorithm>
#include <array>

#include "twofha/base32.hpp"
#include "twofha/errors.hpp"

namespace twofha {

namespace {

constexpr std::array<std::uint32_t, 9> kPow10 = {
    1, 10, 100, 1000, 10000, 100000, 1000000, 10000000, 100000000};

void validate_candidate(std::string_view candidate, int digits) {
  if (candidate.size() != static_cast<std::size_t>(digits)) {
    throw ValidationError("OTP code must have exactly " + std::to_string(digits) + " digits");
  }
  for (char c : candidate) {
    if (c < '0' || c > '9') throw ValidationError("OTP code must contain only digits");
  }
}

}  // namespace

void TotpParams::validate() const {
  if (step <= 0) throw ValidationError("TOTP step must be positive");
  if (digits < 6 || digits > 8) throw ValidationError("OTP digits must be between 6 and 8");
  if (skew < 0) throw ValidationError("TOTP skew must be non-negative");
}

SweetSecret::SweetSecret(Bytes raw, int id) : raw_(std::move(raw)), id_(id) {
  if (raw_.size() < kMinLength) {
    throw ValidationError("OTP secret must be at least " + std::to_string(kMinLength) +
                          " bytes, got " + std::to_string(raw_.size()));
  }
}

SweetSecret SweetSecret::from_base32(std::string_view text, int id) {
  return SweetSecret(base32_decode(text), id);
}

std::string SweetSecret::base32() const { return base32_encode(raw_); }

OtpCode OtpCode::parse(std::string_view text, int digits) {
  validate_candidate(text, digits);
  return OtpCode(std::string(text));
}

std::uint32_t OtpCode::value() const { return static_cast<std::uint32_t>(std::stoul(text_)); }

OtpCode hotp(const SweetSecret& secret, std::uint64_t counter, const TotpParams& params) {
  params.validate();
  std::array<std::uint8_t, 8> message{};
  for (int i = 7; i >= 0; --i) {
    message[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(counter & 0xff);
    counter >>= 8;
  }
  const Bytes mac = hmac(params.algorithm, secret.raw(), message);

  const std::size_t offset = mac.back() & 0x0f;
  const std::uint32_t binary = (static_cast<std::uint32_t>(mac[offset] & 0x7f) << 24) |
                               (static_cast<std::uint32_t>(mac[offset + 1]) << 16) |
                               (static_cast<std::uint32_t>(mac[offset + 2]) << 8) |
                               static_cast<std::uint32_t>(mac[offset + 3]);
  std::uint32_t value = binary % kPow10[static_cast<std::size_t>(params.digits)];

  std::string text(static_cast<std::size_t>(params.digits), '0');
  for (auto it = text.rbegin(); it != text.rend(); ++it) {
    *it = static_cast<char>('0' + value % 10);
    value /= 10;
  }
  return OtpCode(std::move(text));
}

std::uint64_t time_counter(std::int64_t unix_time, const TotpParams& params) {
  params.validate();
  if (unix_time < params.t0) {
    throw ValidationError("time precedes the TOTP epoch t0");
  }
  return static_cast<std::uint64_t>((unix_time - params.t0) / params.step);
}

OtpCode totp(const SweetSecret& secret, std::int64_t unix_time, const TotpParams& params) {
  return hotp(secret, time_counter(unix_time, params), params);
}

std::int64_t seconds_remaining(std::int64_t unix_time, const TotpParams& params) {
  params.validate();
  std::int64_t into = (unix_time - params.t0) % params.step;
  if (into < 0) into += params.step;
  return params.step - into;
}

bool verify_code(const SweetSecret& secret, std::string_view candidate,
                 std::int64_t unix_time, const TotpParams& params) {
  params.validate();
  validate_candidate(candidate, params.digits);
  const std::uint64_t center = time_counter(unix_time, params);

  bool matched = false;
  for (std::int64_t k = -params.skew; k <= params.skew; ++k) {
    if (k < 0 && static_cast<std::uint64_t>(-k) > center) continue;
    const OtpCode expected = hotp(secret, center + static_cast<std::uint64_t>(k), params);
    // No early exit: every window position costs the same.
    matched |= constant_time_equal(as_bytes(expected.str()), as_bytes(candidate));
  }
  return matched;
}

std::vector<OtpCode> window_codes(const SweetSecret& secret, std::int64_t unix_time,
                                  const TotpParams& params) {
  const std::uint64_t center = time_counter(unix_time, params);
  std::vector<OtpCode> codes;
  for (std::int64_t k = -params.skew; k <= params.skew; ++k) {
    if (k < 0 && static_cast<std::uint64_t>(-k) > center) continue;
    OtpCode code = hotp(secret, center + static_cast<std::uint64_t>(k), params);
    if (std::find(codes.begin(), codes.end(), code) == codes.end()) {
      codes.push_back(std::move(code));
    }
  }
  return codes;
}

}  // namespace twofha
