/*
 * Copyright 2026 rgbt-toolkit authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "core/image.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace rgbt {
namespace {

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open for reading: " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::Io, "cannot open for writing: " + path);
  return out;
}

// Netpbm token reader: skips whitespace and '#' comment lines.
std::string next_token(std::istream& in, const std::string& path) {
  std::string tok;
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
    } else if (std::isspace(c)) {
      c = in.get();
    } else {
      break;
    }
  }
  while (c != EOF && !std::isspace(c)) {
    tok.push_back(static_cast<char>(c));
    c = in.get();
  }
  if (tok.empty()) fail(ErrorCode::Parse, "truncated netpbm header: " + path);
  return tok;
}

long parse_long(const std::string& tok, const std::string& path) {
  try {
    return std::stol(tok);
  } catch (const std::exception&) {
    fail(ErrorCode::Parse, "bad netpbm header value '" + tok + "': " + path);
  }
}

static_assert(std::endian::native == std::endian::little,
              "float raster formats assume a little-endian host");

void read_exact(std::istream& in, void* dst, std::size_t n, const std::string& path) {
  in.read(static_cast<char*>(dst), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n)
    fail(ErrorCode::Parse, "truncated raster data: " + path);
}

}  // namespace

ImageU8 load_pnm_u8(const std::string& path) {
  auto in = open_in(path);
  std::string magic = next_token(in, path);
  int channels;
  if (magic == "P5")
    channels = 1;
  else if (magic == "P6")
    channels = 3;
  else
    fail(ErrorCode::Parse, "expected P5/P6 magic in " + path);
  long w = parse_long(next_token(in, path), path);
  long h = parse_long(next_token(in, path), path);
  long maxval = parse_long(next_token(in, path), path);
  if (w <= 0 || h <= 0) fail(ErrorCode::Parse, "bad dimensions in " + path);
  if (maxval != 255) fail(ErrorCode::Parse, "expected maxval 255 in " + path);
  ImageU8 img(static_cast<int>(w), static_cast<int>(h), channels);
  read_exact(in, img.data.data(), img.data.size(), path);
  return img;
}

ImageU16 load_pgm_u16(const std::string& path) {
  auto in = open_in(path);
  if (next_token(in, path) != "P5") fail(ErrorCode::Parse, "expected P5 magic in " + path);
  long w = parse_long(next_token(in, path), path);
  long h = parse_long(next_token(in, path), path);
  long maxval = parse_long(next_token(in, path), path);
  if (w <= 0 || h <= 0) fail(ErrorCode::Parse, "bad dimensions in " + path);
  if (maxval != 65535) fail(ErrorCode::Parse, "expected maxval 65535 in " + path);
  ImageU16 img(static_cast<int>(w), static_cast<int>(h), 1);
  std::vector<std::uint8_t> raw(img.data.size() * 2);
  read_exact(in, raw.data(), raw.size(), path);
  for (std::size_t i = 0; i < img.data.size(); ++i)
    img.data[i] = static_cast<std::uint16_t>((raw[2 * i] << 8) | raw[2 * i + 1]);
  return img;
}

void save_pnm_u8(const ImageU8& img, const std::string& path) {
  if (img.channels != 1 && img.channels != 3)
    fail(ErrorCode::InvalidArgument, "save_pnm_u8 needs 1 or 3 channels");
  auto out = open_out(path);
  out << (img.channels == 1 ? "P5" : "P6") << "\n"
      << img.width << " " << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.data.data()),
            static_cast<std::streamsize>(img.data.size()));
  if (!out) fail(ErrorCode::Io, "short write: " + path);
}

void save_pgm_u16(const ImageU16& img, const std::string& path) {
  if (img.channels != 1) fail(ErrorCode::InvalidArgument, "16-bit PGM is single channel");
  auto out = open_out(path);
  out << "P5\n" << img.width << " " << img.height << "\n65535\n";
  std::vector<std::uint8_t> raw(img.data.size() * 2);
  for (std::size_t i = 0; i < img.data.size(); ++i) {
    raw[2 * i] = static_cast<std::uint8_t>(img.data[i] >> 8);
    raw[2 * i + 1] = static_cast<std::uint8_t>(img.data[i] & 0xff);
  }
  out.write(reinterpret_cast<const char*>(raw.data()),
            static_cast<std::streamsize>(raw.size()));
  if (!out) fail(ErrorCode::Io, "short write: " + path);
}

ImageF32 load_pfm(const std::string& path) {
  auto in = open_in(path);
  if (next_token(in, path) != "Pf") fail(ErrorCode::Parse, "expected Pf magic in " + path);
  long w = parse_long(next_token(in, path), path);
  long h = parse_long(next_token(in, path), path);
  double scale = std::stod(next_token(in, path));
  if (w <= 0 || h <= 0) fail(ErrorCode::Parse, "bad dimensions in " + path);
  if (scale >= 0) fail(ErrorCode::Parse, "big-endian PFM unsupported: " + path);
  ImageF32 img(static_cast<int>(w), static_cast<int>(h), 1);
  // PFM scanlines run bottom-to-top.
  std::vector<float> row(static_cast<std::size_t>(w));
  for (long y = h - 1; y >= 0; --y) {
    read_exact(in, row.data(), row.size() * 4, path);
    std::memcpy(&img.at(0, static_cast<int>(y)), row.data(), row.size() * 4);
  }
  return img;
}

void save_pfm(const ImageF32& img, const std::string& path) {
  if (img.channels != 1) fail(ErrorCode::InvalidArgument, "PFM writer is single channel");
  auto out = open_out(path);
  out << "Pf\n" << img.width << " " << img.height << "\n-1.0\n";
  for (int y = img.height - 1; y >= 0; --y)
    out.write(reinterpret_cast<const char*>(&img.at(0, y)),
              static_cast<std::streamsize>(img.width) * 4);
  if (!out) fail(ErrorCode::Io, "short write: " + path);
}

ImageF32 load_rgtd(const std::string& path) {
  auto in = open_in(path);
  char magic[4];
  read_exact(in, magic, 4, path);
  if (std::memcmp(magic, "RGTD", 4) != 0)
    fail(ErrorCode::Parse, "expected RGTD magic in " + path);
  std::uint32_t w, h, reserved;
  read_exact(in, &w, 4, path);
  read_exact(in, &h, 4, path);
  read_exact(in, &reserved, 4, path);
  if (w == 0 || h == 0) fail(ErrorCode::Parse, "bad dimensions in " + path);
  ImageF32 img(static_cast<int>(w), static_cast<int>(h), 1);
  read_exact(in, img.data.data(), img.data.size() * 4, path);
  return img;
}

void save_rgtd(const ImageF32& img, const std::string& path) {
  if (img.channels != 1) fail(ErrorCode::InvalidArgument, "RGTD writer is single channel");
  auto out = open_out(path);
  out.write("RGTD", 4);
  std::uint32_t w = static_cast<std::uint32_t>(img.width);
  std::uint32_t h = static_cast<std::uint32_t>(img.height);
  std::uint32_t reserved = 0;
  out.write(reinterpret_cast<const char*>(&w), 4);
  out.write(reinterpret_cast<const char*>(&h), 4);
  out.write(reinterpret_cast<const char*>(&reserved), 4);
  out.write(reinterpret_cast<const char*>(img.data.data()),
            static_cast<std::streamsize>(img.data.size()) * 4);
  if (!out) fail(ErrorCode::Io, "short write: " + path);
}

ImageF32 load_f32_auto(const std::string& path) {
  auto in = open_in(path);
  char magic[4] = {};
  in.read(magic, 4);
  in.close();
  if (std::memcmp(magic, "RGTD", 4) == 0) return load_rgtd(path);
  if (magic[0] == 'P' && magic[1] == 'f') return load_pfm(path);
  fail(ErrorCode::Parse, "unrecognized float raster format: " + path);
}

}  // namespace rgbt
