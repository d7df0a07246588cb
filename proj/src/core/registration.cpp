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
#include "core/registration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rgbt {

std::vector<SplatSample> lift_rgb(const ImageF32& depth, const CameraModel& cam_rgb,
                                  const RigidTransform& rgb_to_thermal,
                                  const CameraModel& cam_thermal, const ImageU8& rgb) {
  if (!depth.same_size(rgb))
    fail(ErrorCode::InvalidArgument, "depth and rgb dimensions differ");
  if (cam_rgb.distortion != DistortionModel::None ||
      cam_thermal.distortion != DistortionModel::None)
    fail(ErrorCode::Unsupported, "registration expects rectified cameras");
  std::vector<SplatSample> samples;
  samples.reserve(depth.pixel_count());
  const int W = cam_thermal.width, H = cam_thermal.height;
  for (int y = 0; y < rgb.height; ++y) {
    for (int x = 0; x < rgb.width; ++x) {
      const float d = depth.at(x, y);
      if (!std::isfinite(d) || d <= 0.0f) continue;
      Vec3 p = backproject({static_cast<double>(x), static_cast<double>(y)}, d, cam_rgb);
      Vec3 q = transform_point(rgb_to_thermal, p);
      if (!(q.z > 0)) continue;  // behind the thermal camera
      Pixel t{cam_thermal.fx * q.x / q.z + cam_thermal.cx,
              cam_thermal.fy * q.y / q.z + cam_thermal.cy};
      // 1-pixel splat margin: keep samples whose 4-neighborhood can touch
      // the image.
      if (t.u <= -1.0 || t.u >= W || t.v <= -1.0 || t.v >= H) continue;
      SplatSample s;
      s.u = t.u;
      s.v = t.v;
      s.depth = q.z;
      s.channels = rgb.channels;
      for (int c = 0; c < rgb.channels; ++c) s.payload[c] = rgb.at(x, y, c);
      samples.push_back(s);
    }
  }
  return samples;
}

namespace {

struct Neighbor {
  int x, y;
  double w;
};

// Visibility and payload share the same support: a corner below the
// negligible-weight cutoff neither blocks via the z-buffer nor contributes.
// The cutoff also keeps identity rigs exact when projection round-off puts
// a sample an ulp off its integer pixel.
constexpr double kMinSplatWeight = 1e-9;

int footprint(const SplatSample& s, int W, int H, Neighbor out[4]) {
  const int u0 = static_cast<int>(std::floor(s.u));
  const int v0 = static_cast<int>(std::floor(s.v));
  const double a = s.u - u0;
  const double b = s.v - v0;
  const double w[4] = {(1.0 - a) * (1.0 - b), a * (1.0 - b), (1.0 - a) * b, a * b};
  const int px[4] = {u0, u0 + 1, u0, u0 + 1};
  const int py[4] = {v0, v0, v0 + 1, v0 + 1};
  int n = 0;
  for (int i = 0; i < 4; ++i) {
    if (w[i] < kMinSplatWeight) continue;
    if (px[i] < 0 || px[i] >= W || py[i] < 0 || py[i] >= H) continue;
    out[n++] = {px[i], py[i], w[i]};
  }
  return n;
}

bool canonical_less(const SplatSample& a, const SplatSample& b) {
  if (a.u != b.u) return a.u < b.u;
  if (a.v != b.v) return a.v < b.v;
  if (a.depth != b.depth) return a.depth < b.depth;
  for (int c = 0; c < 3; ++c)
    if (a.payload[c] != b.payload[c]) return a.payload[c] < b.payload[c];
  return false;
}

}  // namespace

SplatResult zbuffer_splat(const std::vector<SplatSample>& samples, int width,
                          int height, double depth_tol) {
  if (width <= 0 || height <= 0)
    fail(ErrorCode::InvalidArgument, "target size must be positive");
  if (!(depth_tol >= 0.0 && depth_tol < 1.0))
    fail(ErrorCode::InvalidArgument, "depth tolerance must be in [0, 1)");
  int channels = samples.empty() ? 1 : samples.front().channels;
  if (channels < 1 || channels > 3)
    fail(ErrorCode::InvalidArgument, "sample payloads must have 1 to 3 channels");
  for (const auto& s : samples) {
    if (!(s.depth > 0)) fail(ErrorCode::InvalidArgument, "sample depth must be positive");
    if (s.channels != channels)
      fail(ErrorCode::InvalidArgument, "samples disagree on payload channel count");
  }

  // Canonical order makes the floating accumulation independent of the
  // caller's sample order (and of any parallel partitioning upstream).
  std::vector<SplatSample> ordered(samples);
  std::sort(ordered.begin(), ordered.end(), canonical_less);

  SplatResult res;
  res.payload = ImageF32(width, height, channels);
  res.weight = ImageF32(width, height, 1);
  res.depth = ImageF32(width, height, 1, std::numeric_limits<float>::quiet_NaN());

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> min_depth(static_cast<std::size_t>(width) * height, inf);

  Neighbor nb[4];
  for (const auto& s : ordered) {
    const int n = footprint(s, width, height, nb);
    for (int i = 0; i < n; ++i) {
      auto& md = min_depth[static_cast<std::size_t>(nb[i].y) * width + nb[i].x];
      if (s.depth < md) md = s.depth;
    }
  }

  std::vector<double> acc(static_cast<std::size_t>(width) * height * channels, 0.0);
  std::vector<double> wsum(static_cast<std::size_t>(width) * height, 0.0);
  for (const auto& s : ordered) {
    const int n = footprint(s, width, height, nb);
    for (int i = 0; i < n; ++i) {
      const std::size_t p = static_cast<std::size_t>(nb[i].y) * width + nb[i].x;
      if (s.depth > min_depth[p] * (1.0 + depth_tol)) continue;
      for (int c = 0; c < channels; ++c) acc[p * channels + c] += nb[i].w * s.payload[c];
      wsum[p] += nb[i].w;
    }
  }

  for (std::size_t p = 0; p < wsum.size(); ++p) {
    res.weight.data[p] = static_cast<float>(wsum[p]);
    if (wsum[p] > 0.0) {
      res.depth.data[p] = static_cast<float>(min_depth[p]);
      for (int c = 0; c < channels; ++c)
        res.payload.data[p * channels + c] =
            static_cast<float>(acc[p * channels + c] / wsum[p]);
    }
  }
  return res;
}

RegisteredPair register_pair(const ImageU8& rgb, const ImageF32& depth,
                             const CameraModel& cam_rgb,
                             const RigidTransform& rgb_to_thermal,
                             const CameraModel& cam_thermal, const ImageU8& thermal8,
                             double depth_tol) {
  if (thermal8.width != cam_thermal.width || thermal8.height != cam_thermal.height)
    fail(ErrorCode::InvalidArgument, "thermal frame does not match thermal intrinsics");
  auto samples = lift_rgb(depth, cam_rgb, rgb_to_thermal, cam_thermal, rgb);
  SplatResult splat =
      zbuffer_splat(samples, cam_thermal.width, cam_thermal.height, depth_tol);
  RegisteredPair pair;
  pair.warped_rgb = ImageU8(cam_thermal.width, cam_thermal.height, rgb.channels);
  pair.mask = std::move(splat.weight);
  pair.thermal = thermal8;
  for (std::size_t p = 0; p < pair.mask.data.size(); ++p) {
    if (pair.mask.data[p] <= 0.0f) continue;
    for (int c = 0; c < rgb.channels; ++c)
      pair.warped_rgb.data[p * rgb.channels + c] =
          static_cast<std::uint8_t>(std::llround(splat.payload.data[p * rgb.channels + c]));
  }
  return pair;
}

ImageU8 alpha_blend(const ImageU8& a, const ImageU8& b, double alpha) {
  if (!a.same_size(b)) fail(ErrorCode::InvalidArgument, "alpha_blend size mismatch");
  if (!(alpha >= 0.0 && alpha <= 1.0))
    fail(ErrorCode::InvalidArgument, "alpha must be in [0, 1]");
  const int channels = std::max(a.channels, b.channels);
  ImageU8 out(a.width, a.height, channels);
  for (std::size_t p = 0; p < a.pixel_count(); ++p) {
    for (int c = 0; c < channels; ++c) {
      const double av = a.data[p * a.channels + (a.channels == 1 ? 0 : c)];
      const double bv = b.data[p * b.channels + (b.channels == 1 ? 0 : c)];
      out.data[p * channels + c] =
          static_cast<std::uint8_t>(std::llround((1.0 - alpha) * av + alpha * bv));
    }
  }
  return out;
}

}  // namespace rgbt
