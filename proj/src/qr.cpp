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


#include "twofha/qr.hpp"

#include <algorithm>
#include <array>
#include <climits>
#include <cstdlib>

#include "twofha/errors.hpp"

namespace twofha {

namespace {

// Indexed [ecc][version]; version 0 is unused.
constexpr std::array<std::array<std::int8_t, 41>, 4> kEccCodewordsPerBlock = {{
    {-1, 7,  10, 15, 20, 26, 18, 20, 24, 30, 18, 20, 24, 26, 30, 22, 24, 28, 30, 28, 28,
     28, 28, 30, 30, 26, 28, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30},
    {-1, 10, 16, 26, 18, 24, 16, 18, 22, 22, 26, 30, 22, 22, 24, 24, 28, 28, 26, 26, 26,
     26, 28, 28, 28, 28, 28, 28, 28, 28, 28, 28, 28, 28, 28, 28, 28, 28, 28, 28, 28},
    {-1, 13, 22, 18, 26, 18, 24, 18, 22, 20, 24, 28, 26, 24, 20, 30, 24, 28, 28, 26, 30,
     28, 30, 30, 30, 30, 28, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30},
    {-1, 17, 28, 22, 16, 22, 28, 26, 26, 24, 28, 24, 28, 22, 24, 24, 30, 28, 28, 26, 28,
     30, 24, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30},
}};

constexpr std::array<std::array<std::int8_t, 41>, 4> kErrorCorrectionBlocks = {{
    {-1, 1, 1, 1, 1, 1, 2, 2, 2, 2, 4, 4, 4, 4, 4, 6, 6, 6, 6, 7, 8,
     8, 9, 9, 10, 12, 12, 12, 13, 14, 15, 16, 17, 18, 19, 19, 20, 21, 22, 24, 25},
    {-1, 1, 1, 1, 2, 2, 4, 4, 4, 5, 5, 5, 8, 9, 9, 10, 10, 11, 13, 14, 16,
     17, 17, 18, 20, 21, 23, 25, 26, 28, 29, 31, 33, 35, 37, 38, 40, 43, 45, 47, 49},
    {-1, 1, 1, 2, 2, 4, 4, 6, 6, 8, 8, 8, 10, 12, 16, 12, 17, 16, 18, 21, 20,
     23, 23, 25, 27, 29, 34, 34, 35, 38, 40, 43, 45, 48, 51, 53, 56, 59, 62, 65, 68},
    {-1, 1, 1, 2, 4, 4, 4, 5, 6, 8, 8, 11, 11, 16, 16, 18, 16, 19, 21, 25, 25,
     25, 34, 30, 32, 35, 37, 40, 42, 45, 48, 51, 54, 57, 60, 63, 66, 70, 74, 77, 81},
}};

int ecc_index(QrEcc ecc) { return static_cast<int>(ecc); }

// Two-bit level indicator written into the format information.
int ecc_format_bits(QrEcc ecc) {
  switch (ecc) {
    case QrEcc::kLow: return 1;
    case QrEcc::kMedium: return 0;
    case QrEcc::kQuartile: return 3;
    case QrEcc::kHigh: return 2;
  }
  return 0;
}

int raw_data_modules(int version) {
  int result = (16 * version + 128) * version + 64;
  if (version >= 2) {
    const int num_align = version / 7 + 2;
    result -= (25 * num_align - 10) * num_align - 55;
    if (version >= 7) result -= 36;
  }
  return result;
}

int data_codewords(int version, QrEcc ecc) {
  const int e = ecc_index(ecc);
  return raw_data_modules(version) / 8 -
         kEccCodewordsPerBlock[e][version] * kErrorCorrectionBlocks[e][version];
}

int count_bits(int version) { return version <= 9 ? 8 : 16; }

// GF(2^8) with the QR reducing polynomial x^8 + x^4 + x^3 + x^2 + 1.
std::uint8_t gf_multiply(std::uint8_t x, std::uint8_t y) {
  int z = 0;
  for (int i = 7; i >= 0; --i) {
    z = (z << 1) ^ ((z >> 7) * 0x11D);
    z ^= ((y >> i) & 1) * x;
  }
  return static_cast<std::uint8_t>(z);
}

std::vector<std::uint8_t> rs_divisor(int degree) {
  std::vector<std::uint8_t> result(static_cast<std::size_t>(degree), 0);
  result.back() = 1;
  std::uint8_t root = 1;
  for (int i = 0; i < degree; ++i) {
    for (std::size_t j = 0; j < result.size(); ++j) {
      result[j] = gf_multiply(result[j], root);
      if (j + 1 < result.size()) result[j] ^= result[j + 1];
    }
    root = gf_multiply(root, 0x02);
  }
  return result;
}

std::vector<std::uint8_t> rs_remainder(const std::vector<std::uint8_t>& data,
                                       const std::vector<std::uint8_t>& divisor) {
  std::vector<std::uint8_t> result(divisor.size(), 0);
  for (auto b : data) {
    const std::uint8_t factor = b ^ result.front();
    result.erase(result.begin());
    result.push_back(0);
    for (std::size_t i = 0; i < result.size(); ++i) result[i] ^= gf_multiply(divisor[i], factor);
  }
  return result;
}

class BitBuffer {
 public:
  void append(std::uint32_t value, int length) {
    for (int i = length - 1; i >= 0; --i) bits_.push_back(((value >> i) & 1) != 0);
  }
  std::size_t size() const { return bits_.size(); }
  std::vector<std::uint8_t> bytes() const {
    std::vector<std::uint8_t> out(bits_.size() / 8, 0);
    for (std::size_t i = 0; i < bits_.size(); ++i) {
      if (bits_[i]) out[i >> 3] |= static_cast<std::uint8_t>(1 << (7 - (i & 7)));
    }
    return out;
  }

 private:
  std::vector<bool> bits_;
};

class Symbol {
 public:
  Symbol(int version, QrEcc ecc)
      : version_(version),
        ecc_(ecc),
        size_(version * 4 + 17),
        modules_(static_cast<std::size_t>(size_ * size_), 0),
        function_(static_cast<std::size_t>(size_ * size_), 0) {
    draw_function_patterns();
  }

  int size() const { return size_; }
  const std::vector<std::uint8_t>& modules() const { return modules_; }

  void draw_codewords(const std::vector<std::uint8_t>& data) {
    std::size_t i = 0;
    const std::size_t total_bits = data.size() * 8;
    for (int right = size_ - 1; right >= 1; right -= 2) {
      if (right == 6) right = 5;
      for (int vert = 0; vert < size_; ++vert) {
        for (int j = 0; j < 2; ++j) {
          const int x = right - j;
          const bool upward = ((right + 1) & 2) == 0;
          const int y = upward ? size_ - 1 - vert : vert;
          if (!is_function(x, y) && i < total_bits) {
            at(x, y) = (data[i >> 3] >> (7 - (i & 7))) & 1;
            ++i;
          }
          // Remaining remainder bits stay light.
        }
      }
    }
  }

  void apply_mask(int mask) {
    for (int y = 0; y < size_; ++y) {
      for (int x = 0; x < size_; ++x) {
        bool invert = false;
        switch (mask) {
          case 0: invert = (x + y) % 2 == 0; break;
          case 1: invert = y % 2 == 0; break;
          case 2: invert = x % 3 == 0; break;
          case 3: invert = (x + y) % 3 == 0; break;
          case 4: invert = (x / 3 + y / 2) % 2 == 0; break;
          case 5: invert = x * y % 2 + x * y % 3 == 0; break;
          case 6: invert = (x * y % 2 + x * y % 3) % 2 == 0; break;
          case 7: invert = ((x + y) % 2 + x * y % 3) % 2 == 0; break;
          default: break;
        }
        if (invert && !is_function(x, y)) at(x, y) ^= 1;
      }
    }
  }

  void draw_format_bits(int mask) {
    const int data = ecc_format_bits(ecc_) << 3 | mask;
    int rem = data;
    for (int i = 0; i < 10; ++i) rem = (rem << 1) ^ ((rem >> 9) * 0x537);
    const int bits = (data << 10 | rem) ^ 0x5412;
    auto bit = [&](int i) { return ((bits >> i) & 1) != 0; };

    for (int i = 0; i <= 5; ++i) set_function(8, i, bit(i));
    set_function(8, 7, bit(6));
    set_function(8, 8, bit(7));
    set_function(7, 8, bit(8));
    for (int i = 9; i < 15; ++i) set_function(14 - i, 8, bit(i));

    for (int i = 0; i < 8; ++i) set_function(size_ - 1 - i, 8, bit(i));
    for (int i = 8; i < 15; ++i) set_function(8, size_ - 15 + i, bit(i));
    set_function(8, size_ - 8, true);  // always-dark module
  }

  long penalty() const {
    long result = 0;
    // Runs of five or more same-coloured modules, and finder-like patterns.
    for (int pass = 0; pass < 2; ++pass) {
      for (int a = 0; a < size_; ++a) {
        int run = 0;
        bool run_color = false;
        for (int b = 0; b < size_; ++b) {
          const bool color = pass == 0 ? get(b, a) : get(a, b);
          if (b == 0 || color != run_color) {
            if (run >= 5) result += 3 + (run - 5);
            run_color = color;
            run = 1;
          } else {
            ++run;
          }
        }
        if (run >= 5) result += 3 + (run - 5);

        for (int b = 0; b + 11 <= size_; ++b) {
          static constexpr std::array<bool, 11> kPatternA = {1, 0, 1, 1, 1, 0, 1, 0, 0, 0, 0};
          static constexpr std::array<bool, 11> kPatternB = {0, 0, 0, 0, 1, 0, 1, 1, 1, 0, 1};
          bool match_a = true;
          bool match_b = true;
          for (int k = 0; k < 11; ++k) {
            const bool color = pass == 0 ? get(b + k, a) : get(a, b + k);
            match_a = match_a && color == kPatternA[static_cast<std::size_t>(k)];
            match_b = match_b && color == kPatternB[static_cast<std::size_t>(k)];
          }
          if (match_a) result += 40;
          if (match_b) result += 40;
        }
      }
    }
    // 2x2 blocks.
    for (int y = 0; y + 1 < size_; ++y) {
      for (int x = 0; x + 1 < size_; ++x) {
        const bool c = get(x, y);
        if (c == get(x + 1, y) && c == get(x, y + 1) && c == get(x + 1, y + 1)) result += 3;
      }
    }
    // Dark/light balance.
    long dark = 0;
    for (auto m : modules_) dark += m;
    const long total = static_cast<long>(size_) * size_;
    const long k = (std::labs(dark * 20 - total * 10) + total - 1) / total - 1;
    result += k * 10;
    return result;
  }

 private:
  std::uint8_t& at(int x, int y) { return modules_[static_cast<std::size_t>(y * size_ + x)]; }
  bool get(int x, int y) const { return modules_[static_cast<std::size_t>(y * size_ + x)] != 0; }
  bool is_function(int x, int y) const {
    return function_[static_cast<std::size_t>(y * size_ + x)] != 0;
  }
  void set_function(int x, int y, bool dark) {
    at(x, y) = dark ? 1 : 0;
    function_[static_cast<std::size_t>(y * size_ + x)] = 1;
  }

  void draw_function_patterns() {
    for (int i = 0; i < size_; ++i) {
      set_function(6, i, i % 2 == 0);
      set_function(i, 6, i % 2 == 0);
    }
    draw_finder(3, 3);
    draw_finder(size_ - 4, 3);
    draw_finder(3, size_ - 4);

    const auto positions = qr_alignment_positions(version_);
    const auto n = positions.size();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        // Skip the three corners occupied by finder patterns.
        if ((i == 0 && j == 0) || (i == 0 && j == n - 1) || (i == n - 1 && j == 0)) continue;
        draw_alignment(positions[i], positions[j]);
      }
    }

    draw_format_bits(0);  // reserve; real bits drawn after masking
    draw_version();
  }

  void draw_version() {
    if (version_ < 7) return;
    int rem = version_;
    for (int i = 0; i < 12; ++i) rem = (rem << 1) ^ ((rem >> 11) * 0x1F25);
    const long bits = static_cast<long>(version_) << 12 | rem;
    for (int i = 0; i < 18; ++i) {
      const bool bit = ((bits >> i) & 1) != 0;
      const int a = size_ - 11 + i % 3;
      const int b = i / 3;
      set_function(a, b, bit);
      set_function(b, a, bit);
    }
  }

  void draw_finder(int cx, int cy) {
    for (int dy = -4; dy <= 4; ++dy) {
      for (int dx = -4; dx <= 4; ++dx) {
        const int dist = std::max(std::abs(dx), std::abs(dy));
        const int x = cx + dx;
        const int y = cy + dy;
        if (x >= 0 && x < size_ && y >= 0 && y < size_) {
          set_function(x, y, dist != 2 && dist != 4);
        }
      }
    }
  }

  void draw_alignment(int cx, int cy) {
    for (int dy = -2; dy <= 2; ++dy) {
      for (int dx = -2; dx <= 2; ++dx) {
        set_function(cx + dx, cy + dy, std::max(std::abs(dx), std::abs(dy)) != 1);
      }
    }
  }

  int version_;
  QrEcc ecc_;
  int size_;
  std::vector<std::uint8_t> modules_;
  std::vector<std::uint8_t> function_;
};

std::vector<std::uint8_t> add_ecc_and_interleave(const std::vector<std::uint8_t>& data,
                                                 int version, QrEcc ecc) {
  const int e = ecc_index(ecc);
  const int num_blocks = kErrorCorrectionBlocks[e][version];
  const int block_ecc_len = kEccCodewordsPerBlock[e][version];
  const int raw_codewords = raw_data_modules(version) / 8;
  const int num_short_blocks = num_blocks - raw_codewords % num_blocks;
  const int short_block_len = raw_codewords / num_blocks;

  const auto divisor = rs_divisor(block_ecc_len);
  std::vector<std::vector<std::uint8_t>> blocks;
  std::size_t k = 0;
  for (int i = 0; i < num_blocks; ++i) {
    const std::size_t dat_len =
        static_cast<std::size_t>(short_block_len - block_ecc_len + (i < num_short_blocks ? 0 : 1));
    std::vector<std::uint8_t> block(data.begin() + static_cast<long>(k),
                                    data.begin() + static_cast<long>(k + dat_len));
    k += dat_len;
    const auto ecc_bytes = rs_remainder(block, divisor);
    // Short blocks get a placeholder so every block has the same length.
    if (i < num_short_blocks) block.push_back(0);
    block.insert(block.end(), ecc_bytes.begin(), ecc_bytes.end());
    blocks.push_back(std::move(block));
  }

  std::vector<std::uint8_t> result;
  result.reserve(static_cast<std::size_t>(raw_codewords));
  for (std::size_t i = 0; i < blocks[0].size(); ++i) {
    for (std::size_t j = 0; j < blocks.size(); ++j) {
      if (i != static_cast<std::size_t>(short_block_len - block_ecc_len) ||
          j >= static_cast<std::size_t>(num_short_blocks)) {
        result.push_back(blocks[j][i]);
      }
    }
  }
  return result;
}

}  // namespace

std::vector<std::vector<bool>> QrPayload::matrix() const {
  std::vector<std::vector<bool>> grid(static_cast<std::size_t>(size_),
                                      std::vector<bool>(static_cast<std::size_t>(size_)));
  for (int y = 0; y < size_; ++y) {
    for (int x = 0; x < size_; ++x) {
      grid[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)] = module(x, y);
    }
  }
  return grid;
}

std::vector<int> qr_alignment_positions(int version) {
  if (version < 1 || version > 40) throw ValidationError("QR version must be in 1..40");
  if (version == 1) return {};
  const int num_align = version / 7 + 2;
  const int step =
      version == 32 ? 26 : (version * 4 + num_align * 2 + 1) / (num_align * 2 - 2) * 2;
  std::vector<int> result;
  const int size = version * 4 + 17;
  for (int i = 0, pos = size - 7; i < num_align - 1; ++i, pos -= step) {
    result.insert(result.begin(), pos);
  }
  result.insert(result.begin(), 6);
  return result;
}

std::size_t qr_byte_capacity(QrEcc ecc, int version) {
  const int bits = data_codewords(version, ecc) * 8 - 4 - count_bits(version);
  return static_cast<std::size_t>(bits / 8);
}

QrPayload render_qr(std::string_view text, QrEcc ecc, int mask) {
  if (mask < -1 || mask > 7) throw ValidationError("QR mask must be -1 or 0..7");

  int version = 1;
  for (; version <= 40; ++version) {
    if (text.size() <= qr_byte_capacity(ecc, version)) break;
  }
  if (version > 40) {
    throw SizeError("text of " + std::to_string(text.size()) +
                    " bytes exceeds QR capacity of " + std::to_string(qr_byte_capacity(ecc)) +
                    " bytes");
  }

  const std::size_t capacity_bits = static_cast<std::size_t>(data_codewords(version, ecc)) * 8;
  BitBuffer bb;
  bb.append(0x4, 4);  // byte mode
  bb.append(static_cast<std::uint32_t>(text.size()), count_bits(version));
  for (unsigned char c : text) bb.append(c, 8);
  bb.append(0, static_cast<int>(std::min<std::size_t>(4, capacity_bits - bb.size())));
  bb.append(0, static_cast<int>((8 - bb.size() % 8) % 8));
  for (std::uint8_t pad = 0xEC; bb.size() < capacity_bits; pad ^= 0xEC ^ 0x11) bb.append(pad, 8);

  Symbol symbol(version, ecc);
  symbol.draw_codewords(add_ecc_and_interleave(bb.bytes(), version, ecc));

  if (mask == -1) {
    long best = LONG_MAX;
    for (int m = 0; m < 8; ++m) {
      symbol.apply_mask(m);
      symbol.draw_format_bits(m);
      const long p = symbol.penalty();
      if (p < best) {
        best = p;
        mask = m;
      }
      symbol.apply_mask(m);  // XOR undoes it
    }
  }
  symbol.apply_mask(mask);
  symbol.draw_format_bits(mask);

  QrPayload payload;
  payload.text_ = std::string(text);
  payload.version_ = version;
  payload.ecc_ = ecc;
  payload.mask_ = mask;
  payload.size_ = symbol.size();
  payload.modules_ = symbol.modules();
  return payload;
}

}  // namespace twofha
