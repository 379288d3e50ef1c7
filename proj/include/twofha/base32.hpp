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

#include "twofha/crypto.hpp"

namespace twofha {

/// RFC 4648 Base32. Output is upper-case and unpadded, which is what
/// authenticator apps import.
std::string base32_encode(ByteView raw);

/// Case-insensitive; trailing '=' padding is accepted but not required.
/// Throws CodecError on characters outside the alphabet, on misplaced
/// padding, or on an impossible length.
Bytes base32_decode(std::string_view text);

}  // namespace twofha
