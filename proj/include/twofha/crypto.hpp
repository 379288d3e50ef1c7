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
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace twofha {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

inline ByteView as_bytes(std::string_view text) noexcept {
  return {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()};
}

enum class HashAlgorithm { kSha1, kSha256, kSha512 };

std::string_view to_string(HashAlgorithm algorithm) noexcept;

/// Accepts the otpauth spellings "SHA1", "SHA256", "SHA512" (case-insensitive).
HashAlgorithm parse_hash_algorithm(std::string_view name);

std::size_t digest_size(HashAlgorithm algorithm) noexcept;

Bytes hmac(HashAlgorithm algorithm, ByteView key, ByteView message);

/// Timing does not depend on where the inputs differ. Inputs of different
/// length compare unequal.
bool constant_time_equal(ByteView a, ByteView b) noexcept;

/// Source of random bytes. Production code uses SecureRandom; tests plug in
/// a seeded generator for reproducible fixtures.
class RandomSource {
 public:
  virtual ~RandomSource() = default;
  virtual void fill(std::span<std::uint8_t> out) = 0;

  Bytes bytes(std::size_t n) {
    Bytes out(n);
    fill(out);
    return out;
  }

  /// Uniform integer in [0, bound).
  std::uint64_t uniform(std::uint64_t bound);
};

/// OpenSSL CSPRNG.
class SecureRandom final : public RandomSource {
 public:
  void fill(std::span<std::uint8_t> out) override;
};

/// Deterministic, NOT cryptographically secure. For test fixtures only.
class SeededRandom final : public RandomSource {
 public:
  explicit SeededRandom(std::uint64_t seed) : state_(seed) {}
  void fill(std::span<std::uint8_t> out) override;

 private:
  std::uint64_t next();
  std::uint64_t state_;
};

/// Lower-case hex of `n` random bytes.
std::string random_token(RandomSource& rng, std::size_t n);

std::string base64_encode(ByteView data);
Bytes base64_decode(std::string_view text);

std::string to_hex(ByteView data);

}  // namespace twofha
