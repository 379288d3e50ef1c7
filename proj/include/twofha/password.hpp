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

#include <string>
#include <string_view>
#include <vector>

#include "twofha/crypto.hpp"

namespace twofha {

/// scrypt cost. Encoded into every hash so parameters can change without
/// invalidating stored records.
struct PasswordHashParams {
  int log2_n = 15;  // N = 2^15, 32 MiB with r = 8
  int r = 8;
  int p = 1;
};

/// "$scrypt$ln=15,r=8,p=1$<salt>$<key>" with base64 salt and key.
std::string hash_password(std::string_view password, const PasswordHashParams& params,
                          RandomSource& rng);

/// Recomputes with the parameters embedded in `encoded`; constant-time
/// comparison. Malformed encodings verify as false.
bool verify_password(std::string_view password, std::string_view encoded);

struct PasswordPolicy {
  std::size_t min_length = 10;
  std::vector<std::string> denylist = default_denylist();

  /// Throws PolicyError.
  void check(std::string_view password) const;

  static std::vector<std::string> default_denylist();
};

}  // namespace twofha
