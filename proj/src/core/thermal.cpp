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
#include "core/thermal.hpp"

#include <algorithm>
#include <cmath>

namespace rgbt {

Normalized8 minmax_normalize(const ImageU16& frame, const MinmaxConfig& cfg) {
  if (frame.channels != 1)
    fail(ErrorCode::InvalidArgument, "thermal frames are single channel");
  if (!(cfg.lo_percentile >= 0.0 && cfg.hi_percentile <= 100.0 &&
        cfg.lo_percentile < cfg.hi_percentile))
    fail(ErrorCode::InvalidArgument, "percentiles must satisfy 0 <= lo < hi <= 100");
  Normalized8 out;
  out.frame = ImageU8(frame.width, frame.height, 1);

  double mn, mx;
  if (cfg.lo_percentile == 0.0 && cfg.hi_percentile == 100.0) {
    auto [mn_it, mx_it] = std::minmax_element(frame.data.begin(), frame.data.end());
    mn = *mn_it;
    mx = *mx_it;
  } else {
    // Nearest-rank percentiles on a sorted copy.
    std::vector<std::uint16_t> sorted(frame.data);
    std::sort(sorted.begin(), sorted.end());
    auto rank = [&](double p) {
      const auto n = static_cast<double>(sorted.size());
      const auto idx = static_cast<std::size_t>(
          std::min(n - 1.0, std::max(0.0, std::ceil(p / 100.0 * n) - 1.0)));
      return static_cast<double>(sorted[idx]);
    };
    mn = rank(cfg.lo_percentile);
    mx = rank(cfg.hi_percentile);
  }
  if (mx == mn) {
    out.degenerate = true;  // all zeros already
    return out;
  }
  const double span = mx - mn;
  for (std::size_t i = 0; i < frame.data.size(); ++i) {
    const double clipped = std::clamp(static_cast<double>(frame.data[i]), mn, mx);
    out.frame.data[i] =
        static_cast<std::uint8_t>(std::llround(255.0 * (clipped - mn) / span));
  }
  return out;
}

ImageU8 clahe(const ImageU8& frame, const ClaheConfig& cfg) {
  if (cfg.tiles_x < 1 || cfg.tiles_y < 1)
    fail(ErrorCode::InvalidArgument, "tile grid must be at least 1x1");
  if (!(cfg.clip_limit >= 1.0))
    fail(ErrorCode::InvalidArgument, "clip limit must be >= 1");
  const int W = frame.width, H = frame.height;
  // Single-tile fallback when tiles would be smaller than one pixel.
  const int tx = (cfg.tiles_x > W) ? 1 : cfg.tiles_x;
  const int ty = (cfg.tiles_y > H) ? 1 : cfg.tiles_y;

  // Tile i spans [bx[i], bx[i+1]); uneven sizes go to the trailing tiles.
  std::vector<int> bx(tx + 1), by(ty + 1);
  for (int i = 0; i <= tx; ++i) bx[i] = static_cast<int>((static_cast<long>(i) * W) / tx);
  for (int j = 0; j <= ty; ++j) by[j] = static_cast<int>((static_cast<long>(j) * H) / ty);

  // Real-valued per-tile mapping: clip, redistribute, cumulative sum.
  std::vector<std::array<double, 256>> mapping(static_cast<std::size_t>(tx) * ty);
  for (int j = 0; j < ty; ++j) {
    for (int i = 0; i < tx; ++i) {
      std::array<std::int64_t, 256> hist{};
      for (int y = by[j]; y < by[j + 1]; ++y)
        for (int x = bx[i]; x < bx[i + 1]; ++x) hist[frame.at(x, y)]++;
      const double cnt =
          static_cast<double>(bx[i + 1] - bx[i]) * (by[j + 1] - by[j]);
      const double clip_at = cfg.clip_limit * cnt / 256.0;
      std::array<double, 256> clipped;
      double excess = 0.0;
      for (int b = 0; b < 256; ++b) {
        double h = static_cast<double>(hist[b]);
        clipped[b] = std::min(h, clip_at);
        excess += h - clipped[b];
      }
      const double add = excess / 256.0;
      auto& m = mapping[static_cast<std::size_t>(j) * tx + i];
      double cum = 0.0;
      for (int b = 0; b < 256; ++b) {
        cum += clipped[b] + add;
        m[b] = std::clamp(255.0 * cum / cnt, 0.0, 255.0);
      }
    }
  }

  // Tile centers; pixels outside the first/last center clamp to that tile.
  std::vector<double> cxs(tx), cys(ty);
  for (int i = 0; i < tx; ++i) cxs[i] = bx[i] + (bx[i + 1] - bx[i] - 1) / 2.0;
  for (int j = 0; j < ty; ++j) cys[j] = by[j] + (by[j + 1] - by[j] - 1) / 2.0;

  ImageU8 out(W, H, 1);
  for (int y = 0; y < H; ++y) {
    int j0, j1;
    double fy;
    if (ty == 1 || y <= cys[0]) {
      j0 = j1 = 0;
      fy = 0.0;
    } else if (y >= cys[ty - 1]) {
      j0 = j1 = ty - 1;
      fy = 0.0;
    } else {
      j0 = 0;
      while (!(cys[j0] <= y && y < cys[j0 + 1])) ++j0;
      j1 = j0 + 1;
      fy = (y - cys[j0]) / (cys[j1] - cys[j0]);
    }
    for (int x = 0; x < W; ++x) {
      int i0, i1;
      double fx;
      if (tx == 1 || x <= cxs[0]) {
        i0 = i1 = 0;
        fx = 0.0;
      } else if (x >= cxs[tx - 1]) {
        i0 = i1 = tx - 1;
        fx = 0.0;
      } else {
        i0 = 0;
        while (!(cxs[i0] <= x && x < cxs[i0 + 1])) ++i0;
        i1 = i0 + 1;
        fx = (x - cxs[i0]) / (cxs[i1] - cxs[i0]);
      }
      const int v = frame.at(x, y);
      const double m00 = mapping[static_cast<std::size_t>(j0) * tx + i0][v];
      const double m10 = mapping[static_cast<std::size_t>(j0) * tx + i1][v];
      const double m01 = mapping[static_cast<std::size_t>(j1) * tx + i0][v];
      const double m11 = mapping[static_cast<std::size_t>(j1) * tx + i1][v];
      const double top = (1.0 - fx) * m00 + fx * m10;
      const double bot = (1.0 - fx) * m01 + fx * m11;
      const double val = (1.0 - fy) * top + fy * bot;
      out.at(x, y) = static_cast<std::uint8_t>(std::llround(val));
    }
  }
  return out;
}

ImageU8 bilateral_filter(const ImageU8& frame, const BilateralConfig& cfg) {
  if (cfg.radius < 1) fail(ErrorCode::InvalidArgument, "radius must be >= 1");
  if (!(cfg.sigma_color > 0) || !(cfg.sigma_space > 0))
    fail(ErrorCode::InvalidArgument, "sigmas must be positive");
  const int W = frame.width, H = frame.height, r = cfg.radius;

  // Both kernels are lookups of the same expressions evaluated per index.
  std::vector<double> range_w(256);
  for (int d = 0; d < 256; ++d)
    range_w[d] = std::exp(-(static_cast<double>(d) * d) /
                          (2.0 * cfg.sigma_color * cfg.sigma_color));
  const int side = 2 * r + 1;
  std::vector<double> space_w(static_cast<std::size_t>(side) * side);
  for (int dy = -r; dy <= r; ++dy)
    for (int dx = -r; dx <= r; ++dx)
      space_w[static_cast<std::size_t>(dy + r) * side + (dx + r)] =
          std::exp(-(static_cast<double>(dx) * dx + static_cast<double>(dy) * dy) /
                   (2.0 * cfg.sigma_space * cfg.sigma_space));

  ImageU8 out(W, H, 1);
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      const int center = frame.at(x, y);
      double num = 0.0, den = 0.0;
      for (int dy = -r; dy <= r; ++dy) {
        const int yy = std::clamp(y + dy, 0, H - 1);  // border replication
        for (int dx = -r; dx <= r; ++dx) {
          const int xx = std::clamp(x + dx, 0, W - 1);
          const int v = frame.at(xx, yy);
          const double w = space_w[static_cast<std::size_t>(dy + r) * side + (dx + r)] *
                           range_w[std::abs(v - center)];
          num += w * v;
          den += w;
        }
      }
      out.at(x, y) = static_cast<std::uint8_t>(std::llround(num / den));
    }
  }
  return out;
}

Normalized8 thermal_to_8bit(const ImageU16& frame, const ThermalPipelineConfig& cfg) {
  Normalized8 normalized = minmax_normalize(frame, cfg.minmax);
  // A zero-span frame stays all zero; equalizing it would only amplify noise.
  if (normalized.degenerate) return normalized;
  normalized.frame = bilateral_filter(clahe(normalized.frame, cfg.clahe), cfg.bilateral);
  return normalized;
}

std::vector<std::int64_t> filter_ffc(const std::vector<std::int64_t>& timestamps,
                                     const std::vector<FfcEvent>& events,
                                     std::int64_t guard_ns) {
  if (guard_ns < 0) fail(ErrorCode::InvalidArgument, "guard must be non-negative");
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (events[i].start_ns >= events[i].end_ns)
      fail(ErrorCode::InvalidArgument, "FFC event must have start < end");
    if (i > 0 && events[i].start_ns <= events[i - 1].end_ns)
      fail(ErrorCode::InvalidArgument, "FFC events must be sorted and non-overlapping");
  }
  std::vector<std::int64_t> kept;
  kept.reserve(timestamps.size());
  for (std::int64_t t : timestamps) {
    bool inside = false;
    for (const auto& e : events) {
      if (t >= e.start_ns - guard_ns && t <= e.end_ns + guard_ns) {
        inside = true;
        break;
      }
    }
    if (!inside) kept.push_back(t);
  }
  return kept;
}

}  // namespace rgbt
