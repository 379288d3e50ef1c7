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

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "twofha/crypto.hpp"
#include "twofha/qr.hpp"

namespace twofha {

struct QrImageOptions {
  int scale = 8;   // pixels per module (PNG only)
  int border = 4;  // quiet zone, in modules
};

/// 8-bit greyscale PNG.
Bytes qr_to_png(const QrPayload& qr, const QrImageOptions& options = {});

/// One `path` element with a unit square per dark module; the viewBox is in
/// module units and includes the quiet zone.
std::string qr_to_svg(const QrPayload& qr, const QrImageOptions& options = {});

/// Reads back an SVG produced by qr_to_svg into a row-major module grid that
/// spans the whole viewBox (quiet zone included). Throws ParseError on
/// anything else.
std::vector<std::vector<bool>> qr_grid_from_svg(std::string_view svg);

/// Writes `<stem>.png` and `<stem>.svg`. Refuses to replace existing files
/// unless `overwrite` is set (IoError).
void write_qr_files(const QrPayload& qr, const std::filesystem::path& stem, bool overwrite,
                    const QrImageOptions& options = {});

}  // namespace twofha
