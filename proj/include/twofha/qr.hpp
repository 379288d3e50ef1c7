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

namespace twofha {

enum class QrEcc { kLow, kMedium, kQuartile, kHigh };

/// A QR Code symbol (ISO/IEC 18004, byte mode) together with the text it
/// encodes. Module (x, y) is column x, row y; true is dark.
class QrPayload {
 public:
  const std::string& text() const noexcept { return text_; }
  int version() const noexcept { return version_; }
  QrEcc ecc() const noexcept { return ecc_; }
  int mask() const noexcept { return mask_; }
  int size() const noexcept { return size_; }
  bool module(int x, int y) const {
    return modules_[static_cast<std::size_t>(y * size_ + x)] != 0;
  }
  /// Row-major square grid.
  std::vector<std::vector<bool>> matrix() const;

  bool operator==(const QrPayload&) const = default;

 private:
  friend QrPayload render_qr(std::string_view, QrEcc, int);
  std::string text_;
  int version_ = 0;
  QrEcc ecc_ = QrEcc::kMedium;
  int mask_ = 0;
  int size_ = 0;
  std::vector<std::uint8_t> modules_;
};

/// Largest byte-mode payload a version-40 symbol holds at the given level.
std::size_t qr_byte_capacity(QrEcc ecc, int version = 40);

/// Encodes `text` in byte mode using the smallest version that fits.
/// `mask` in 0..7 forces a mask pattern; -1 picks the lowest-penalty one.
/// Throws SizeError if even version 40 is too small.
QrPayload render_qr(std::string_view text, QrEcc ecc = QrEcc::kMedium, int mask = -1);

/// Center coordinates of alignment patterns for a version (empty for 1).
std::vector<int> qr_alignment_positions(int version);

}  // namespace twofha
