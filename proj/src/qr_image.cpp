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


#include "twofha/qr_image.hpp"

#include <zlib.h>

#include <charconv>
#include <fstream>
#include <sstream>

#include "twofha/errors.hpp"

namespace twofha {

namespace {

void put_u32(Bytes& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

void put_chunk(Bytes& out, const char (&type)[5], const Bytes& data) {
  put_u32(out, static_cast<std::uint32_t>(data.size()));
  const std::size_t type_at = out.size();
  out.insert(out.end(), type, type + 4);
  out.insert(out.end(), data.begin(), data.end());
  uLong crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, out.data() + type_at, static_cast<uInt>(4 + data.size()));
  put_u32(out, static_cast<std::uint32_t>(crc));
}

bool dark_at(const QrPayload& qr, int border, int mx, int my) {
  const int x = mx - border;
  const int y = my - border;
  return x >= 0 && y >= 0 && x < qr.size() && y < qr.size() && qr.module(x, y);
}

int parse_int(std::string_view text, std::size_t& pos, std::string_view svg_for_offset) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), value);
  if (ec != std::errc()) {
    throw ParseError("expected integer in SVG", static_cast<std::size_t>(
                                                    text.data() + pos - svg_for_offset.data()));
  }
  pos = static_cast<std::size_t>(ptr - text.data());
  return value;
}

}  // namespace

Bytes qr_to_png(const QrPayload& qr, const QrImageOptions& options) {
  if (options.scale < 1 || options.border < 0) throw ValidationError("bad QR image options");
  const int modules = qr.size() + 2 * options.border;
  const int side = modules * options.scale;

  Bytes raw;
  raw.reserve(static_cast<std::size_t>(side) * static_cast<std::size_t>(side + 1));
  for (int py = 0; py < side; ++py) {
    raw.push_back(0);  // filter: none
    for (int px = 0; px < side; ++px) {
      const bool dark = dark_at(qr, options.border, px / options.scale, py / options.scale);
      raw.push_back(dark ? 0x00 : 0xFF);
    }
  }

  uLongf compressed_len = compressBound(static_cast<uLong>(raw.size()));
  Bytes compressed(compressed_len);
  if (compress2(compressed.data(), &compressed_len, raw.data(), static_cast<uLong>(raw.size()),
                Z_BEST_COMPRESSION) != Z_OK) {
    throw IoError("PNG compression failed");
  }
  compressed.resize(compressed_len);

  Bytes png = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};
  Bytes header;
  put_u32(header, static_cast<std::uint32_t>(side));
  put_u32(header, static_cast<std::uint32_t>(side));
  header.insert(header.end(), {8, 0, 0, 0, 0});  // 8-bit greyscale, no interlace
  put_chunk(png, "IHDR", header);
  put_chunk(png, "IDAT", compressed);
  put_chunk(png, "IEND", {});
  return png;
}

std::string qr_to_svg(const QrPayload& qr, const QrImageOptions& options) {
  if (options.border < 0) throw ValidationError("bad QR image options");
  const int modules = qr.size() + 2 * options.border;
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"0 0 " << modules
      << ' ' << modules << "\" stroke=\"none\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"#FFFFFF\"/>\n"
      << "<path d=\"";
  bool first = true;
  for (int y = 0; y < qr.size(); ++y) {
    for (int x = 0; x < qr.size(); ++x) {
      if (!qr.module(x, y)) continue;
      if (!first) out << ' ';
      first = false;
      out << 'M' << x + options.border << ',' << y + options.border << "h1v1h-1z";
    }
  }
  out << "\" fill=\"#000000\"/>\n</svg>\n";
  return out.str();
}

std::vector<std::vector<bool>> qr_grid_from_svg(std::string_view svg) {
  constexpr std::string_view kViewBox = "viewBox=\"0 0 ";
  const auto vb = svg.find(kViewBox);
  if (vb == std::string_view::npos) throw ParseError("SVG has no viewBox", 0);
  std::size_t pos = vb + kViewBox.size();
  const int width = parse_int(svg, pos, svg);
  if (pos >= svg.size() || svg[pos] != ' ') throw ParseError("malformed viewBox", pos);
  ++pos;
  const int height = parse_int(svg, pos, svg);
  if (width <= 0 || width != height || width > 1000) throw ParseError("unexpected viewBox", pos);

  constexpr std::string_view kPath = "<path d=\"";
  const auto path_at = svg.find(kPath);
  if (path_at == std::string_view::npos) throw ParseError("SVG has no path", 0);
  pos = path_at + kPath.size();
  const auto path_end = svg.find('"', pos);
  if (path_end == std::string_view::npos) throw ParseError("unterminated path", pos);

  std::vector<std::vector<bool>> grid(static_cast<std::size_t>(height),
                                      std::vector<bool>(static_cast<std::size_t>(width), false));
  constexpr std::string_view kCell = "h1v1h-1z";
  while (pos < path_end) {
    if (svg[pos] == ' ') {
      ++pos;
      continue;
    }
    if (svg[pos] != 'M') throw ParseError("expected moveto in SVG path", pos);
    ++pos;
    const int x = parse_int(svg, pos, svg);
    if (svg[pos] != ',') throw ParseError("expected ',' in SVG path", pos);
    ++pos;
    const int y = parse_int(svg, pos, svg);
    if (svg.substr(pos, kCell.size()) != kCell) throw ParseError("expected unit square", pos);
    pos += kCell.size();
    if (x < 0 || y < 0 || x >= width || y >= height) throw ParseError("module outside viewBox", pos);
    grid[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)] = true;
  }
  return grid;
}

void write_qr_files(const QrPayload& qr, const std::filesystem::path& stem, bool overwrite,
                    const QrImageOptions& options) {
  auto png_path = stem;
  png_path += ".png";
  auto svg_path = stem;
  svg_path += ".svg";
  if (!overwrite) {
    for (const auto& p : {png_path, svg_path}) {
      if (std::filesystem::exists(p)) {
        throw IoError(p.string() + " already exists (use --force to overwrite)");
      }
    }
  }
  const Bytes png = qr_to_png(qr, options);
  std::ofstream png_out(png_path, std::ios::binary | std::ios::trunc);
  png_out.write(reinterpret_cast<const char*>(png.data()), static_cast<std::streamsize>(png.size()));
  std::ofstream svg_out(svg_path, std::ios::trunc);
  svg_out << qr_to_svg(qr, options);
  if (!png_out || !svg_out) throw IoError("cannot write QR images next to " + stem.string());
}

}  // namespace twofha
