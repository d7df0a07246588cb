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
#ifndef RGBT_CORE_REGISTRATION_HPP
#define RGBT_CORE_REGISTRATION_HPP

#include <vector>

#include "core/geometry.hpp"
#include "core/image.hpp"

namespace rgbt {

// Forward-warping of rectified RGB into the thermal pixel grid:
// backproject -> rigid transform -> project, then z-buffered bilinear
// splatting. Pixels no sample reaches stay black with mask 0; there is no
// hole-filling, so unseen regions never receive invented content.

struct SplatSample {
  double u = 0, v = 0;   // continuous target pixel (thermal frame)
  double depth = 0;      // meters in the thermal frame
  float payload[3] = {0, 0, 0};
  int channels = 1;
};

// Lifts every valid-depth RGB pixel into the thermal image plane. Depth
// entries that are non-finite or <= 0 are invalid. Samples behind the
// thermal camera or beyond a 1-pixel splat margin are culled.
std::vector<SplatSample> lift_rgb(const ImageF32& depth, const CameraModel& cam_rgb,
                                  const RigidTransform& rgb_to_thermal,
                                  const CameraModel& cam_thermal, const ImageU8& rgb);

struct SplatResult {
  ImageF32 payload;  // channels follow the samples; weighted mean where mask > 0
  ImageF32 weight;   // sum of accepted bilinear weights (the validity mask)
  ImageF32 depth;    // nearest accepted depth per pixel; NaN where untouched
};

// Two passes: (1) per-pixel minimum depth over each sample's positive-weight
// neighbors, (2) weight accumulation of samples within depth_tol of that
// minimum. Samples are first brought into a canonical order, so the result
// is independent of input order.
SplatResult zbuffer_splat(const std::vector<SplatSample>& samples, int width,
                          int height, double depth_tol);

struct RegisteredPair {
  ImageU8 warped_rgb;  // thermal dimensions; 0 where mask is 0
  ImageF32 mask;       // weight sum; 0 exactly where no sample contributed
  ImageU8 thermal;
};

RegisteredPair register_pair(const ImageU8& rgb, const ImageF32& depth,
                             const CameraModel& cam_rgb,
                             const RigidTransform& rgb_to_thermal,
                             const CameraModel& cam_thermal, const ImageU8& thermal8,
                             double depth_tol);

// out = round((1-alpha)*a + alpha*b) per channel; grayscale inputs broadcast.
ImageU8 alpha_blend(const ImageU8& a, const ImageU8& b, double alpha);

}  // namespace rgbt

#endif
