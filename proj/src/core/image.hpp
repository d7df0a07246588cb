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
#ifndef RGBT_CORE_IMAGE_HPP
#define RGBT_CORE_IMAGE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "core/common.hpp"

namespace rgbt {

// Row-major raster with interleaved channels. Pixel centers sit at integer
// coordinates; u grows right, v grows down.
template <typename T>
struct Image {
  int width = 0;
  int height = 0;
  int channels = 1;
  std::vector<T> data;

  Image() = default;
  Image(int w, int h, int c = 1, T fill = T{})
      : width(w), height(h), channels(c),
        data(static_cast<std::size_t>(w) * h * c, fill) {
    if (w <= 0 || h <= 0 || c <= 0)
      fail(ErrorCode::InvalidArgument, "image dimensions must be positive");
  }

  T& at(int x, int y, int c = 0) {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  const T& at(int x, int y, int c = 0) const {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width) * height;
  }
  template <typename U>
  bool same_size(const Image<U>& other) const {
    return width == other.width && height == other.height;
  }
};

using ImageU8 = Image<std::uint8_t>;
using ImageU16 = Image<std::uint16_t>;
using ImageF32 = Image<float>;

// --- Netpbm (PGM P5 / PPM P6) ------------------------------------------
// 16-bit PGM uses big-endian two-byte samples per the PGM spec.

ImageU8 load_pnm_u8(const std::string& path);    // P5 (1ch) or P6 (3ch), maxval 255
ImageU16 load_pgm_u16(const std::string& path);  // P5, maxval 65535
void save_pnm_u8(const ImageU8& img, const std::string& path);
void save_pgm_u16(const ImageU16& img, const std::string& path);

// --- Float rasters -------------------------------------------------------
// PFM: "Pf" grayscale, scale -1.0 (little-endian), bottom-to-top scanlines.
// RGTD: 16-byte header {magic "RGTD", width u32, height u32, reserved u32},
// then row-major f32, everything little-endian, top-to-bottom.

ImageF32 load_pfm(const std::string& path);
void save_pfm(const ImageF32& img, const std::string& path);
ImageF32 load_rgtd(const std::string& path);
void save_rgtd(const ImageF32& img, const std::string& path);

// Dispatch on file magic (PFM vs RGTD).
ImageF32 load_f32_auto(const std::string& path);

}  // namespace rgbt

#endif
