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


#include "twofha/password.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <sstream>

#include "twofha/errors.hpp"

namespace twofha {

namespace {

constexpr std::size_t kSaltLength = 16;
constexpr std::size_t kKeyLength = 32;

Bytes derive(std::string_view password, ByteView salt, const PasswordHashParams& params) {
  Bytes key(kKeyLength);
  const std::uint64_t n = std::uint64_t{1} << params.log2_n;
  const std::uint64_t maxmem =
      128ULL * static_cast<std::uint64_t>(params.r) * (n + static_cast<std::uint64_t>(params.p) + 2) +
      (1ULL << 20);
  if (EVP_PBE_scrypt(password.data(), password.size(), salt.data(), salt.size(), n,
                     static_cast<std::uint64_t>(params.r), static_cast<std::uint64_t>(params.p),
                     maxmem, key.data(), key.size()) != 1) {
    throw ConfigError("scrypt rejected its parameters");
  }
  return key;
}

void validate(const PasswordHashParams& params) {
  if (params.log2_n < 1 || params.log2_n > 24 || params.r < 1 || params.r > 64 || params.p < 1 ||
      params.p > 16) {
    throw ConfigError("password hash parameters out of range");
  }
}

}  // namespace

std::string hash_password(std::string_view password, const PasswordHashParams& params,
                          RandomSource& rng) {
  validate(params);
  const Bytes salt = rng.bytes(kSaltLength);
  const Bytes key = derive(password, salt, params);
  std::ostringstream out;
  out << "$scrypt$ln=" << params.log2_n << ",r=" << params.r << ",p=" << params.p << '$'
      << base64_encode(salt) << '$' << base64_encode(key);
  return out.str();
}

bool verify_password(std::string_view password, std::string_view encoded) {
  constexpr std::string_view kPrefix = "$scrypt$";
  if (encoded.substr(0, kPrefix.size()) != kPrefix) return false;
  const std::string rest(encoded.substr(kPrefix.size()));

  PasswordHashParams params;
  char salt_buf[128] = {};
  char key_buf[128] = {};
  if (std::sscanf(rest.c_str(), "ln=%d,r=%d,p=%d$%127[^$]$%127s", &params.log2_n, &params.r,
                  &params.p, salt_buf, key_buf) != 5) {
    return false;
  }
  try {
    validate(params);
    const Bytes salt = base64_decode(salt_buf);
    const Bytes expected = base64_decode(key_buf);
    if (expected.size() != kKeyLength) return false;
    return constant_time_equal(derive(password, salt, params), expected);
  } catch (const Error&) {
    return false;
  }
}

void PasswordPolicy::check(std::string_view password) const {
  if (password.size() < min_length) {
    throw PolicyError("password must be at least " + std::to_string(min_length) + " characters");
  }
  std::string lower(password);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (std::find(denylist.begin(), denylist.end(), lower) != denylist.end()) {
    throw PolicyError("password is too common");
  }
}

std::vector<std::string> PasswordPolicy::default_denylist() {
  return {"0123456789",   "1234567890",    "12345678910",  "123456789a",    "1q2w3e4r5t",
          "1qaz2wsx3edc", "abcdefghij",    "administrator", "baseball123",  "dragon12345",
          "football123",  "iloveyou123",   "letmein1234",  "monkey12345",   "passw0rd123",
          "password1",    "password12",    "password123",  "password1234",  "princess123",
          "qwerty12345",  "qwerty123456",  "qwertyuiop",   "qwertyuiop123", "sunshine123",
          "trustno1234",  "welcome123",    "zaq12wsxcde"};
}

}  // namespace twofha
