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
#ifndef RGBT_CORE_THERMAL_HPP
#define RGBT_CORE_THERMAL_HPP

#include <cstdint>
#include <vector>

#include "core/image.hpp"

namespace rgbt {

// 16-bit radiometric counts to trainable 8-bit frames. Every stage is a
// pure per-frame function; rounding is half-away-from-zero throughout.

struct Normalized8 {
  ImageU8 frame;
  bool degenerate = false;  // zero-span input (e.g. lens-cap frame)
};

// Optional percentile clipping before scaling (nearest-rank percentiles,
// values clamped into the clipped span). Defaults reproduce plain min-max.
struct MinmaxConfig {
  double lo_percentile = 0.0;
  double hi_percentile = 100.0;
};

// out = round(255*(x-min)/(max-min)); a zero-span frame yields all zeros
// with the degenerate flag set instead of an error.
Normalized8 minmax_normalize(const ImageU16& frame, const MinmaxConfig& cfg = {});

struct ClaheConfig {
  int tiles_x = 8;
  int tiles_y = 8;
  double clip_limit = 2.0;  // multiples of the uniform bin count; may be +inf
};

// Contrast-limited adaptive histogram equalization. Per-tile 256-bin
// histograms are clipped at clip_limit*(tile_pixels/256) with the excess
// redistributed uniformly; each output pixel bilinearly interpolates the
// CDF mappings of its four surrounding tile centers (clamped at edges).
// A grid with more tiles than pixels falls back to a single tile.
ImageU8 clahe(const ImageU8& frame, const ClaheConfig& cfg);

struct BilateralConfig {
  int radius = 4;
  double sigma_color = 25.0;
  double sigma_space = 5.0;
};

// Gaussian range/space weighted mean over the (2r+1)^2 window with border
// replication.
ImageU8 bilateral_filter(const ImageU8& frame, const BilateralConfig& cfg);

struct ThermalPipelineConfig {
  MinmaxConfig minmax;
  ClaheConfig clahe;
  BilateralConfig bilateral;
};

// Exactly minmax_normalize -> clahe -> bilateral_filter, in that order.
Normalized8 thermal_to_8bit(const ImageU16& frame, const ThermalPipelineConfig& cfg);

struct FfcEvent {
  std::int64_t start_ns = 0;
  std::int64_t end_ns = 0;
};

// Drops every timestamp inside [start-guard, end+guard] of any event.
// Events must be sorted and non-overlapping.
std::vector<std::int64_t> filter_ffc(const std::vector<std::int64_t>& timestamps,
                                     const std::vector<FfcEvent>& events,
                                     std::int64_t guard_ns);

}  // namespace rgbt

#endif
