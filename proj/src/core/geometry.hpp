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
#ifndef RGBT_CORE_GEOMETRY_HPP
#define RGBT_CORE_GEOMETRY_HPP

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core/common.hpp"
#include "core/image.hpp"

namespace rgbt {

// Camera coordinates: +z forward, +x right, +y down.
// Pixels: u right, v down, pixel centers at integer coordinates.

struct Vec3 {
  double x = 0, y = 0, z = 0;
};

inline Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
double norm(Vec3 a);

// Row-major 3x3 matrix.
struct Mat3 {
  std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

  static Mat3 identity() { return Mat3{}; }
  double operator()(int r, int c) const { return m[r * 3 + c]; }
  double& operator()(int r, int c) { return m[r * 3 + c]; }
};

Vec3 operator*(const Mat3& A, Vec3 v);
Mat3 operator*(const Mat3& A, const Mat3& B);
Mat3 transpose(const Mat3& A);
double determinant(const Mat3& A);

struct Pixel {
  double u = 0, v = 0;
};

enum class DistortionModel { None, Fisheye4 };

struct CameraModel {
  double fx = 0, fy = 0, cx = 0, cy = 0;
  int width = 0, height = 0;
  DistortionModel distortion = DistortionModel::None;
  std::array<double, 4> k{0, 0, 0, 0};  // equidistant theta-polynomial coefficients

  // Throws InvalidArgument when the intrinsics invariants do not hold.
  void validate() const;
};

struct RigidTransform {
  Mat3 rotation;
  Vec3 translation;

  static RigidTransform identity() { return RigidTransform{}; }
  // Orthonormality and det(R)=+1 within 1e-9 per entry.
  void validate() const;
};

Vec3 transform_point(const RigidTransform& T, Vec3 p);
// compose(A, B) applies B first, then A.
RigidTransform compose(const RigidTransform& A, const RigidTransform& B);
RigidTransform invert(const RigidTransform& T);

// Pinhole back-projection of a pixel at the given depth. The camera must be
// rectified (distortion none); depth must be positive.
Vec3 backproject(Pixel p, double depth, const CameraModel& cam);

struct Projection {
  Pixel pixel;
  double depth = 0;
};

// Pinhole projection; the result may lie outside image bounds (caller culls).
Projection project(Vec3 p, const CameraModel& cam);

// Forward equidistant fisheye model: theta_d = theta(1 + k1 t^2 + k2 t^4 + k3 t^6 + k4 t^8).
Pixel fisheye_project(Vec3 p, const CameraModel& cam);

// Per-destination-pixel source coordinates; entries outside the source
// image are invalid.
struct RectificationMap {
  int width = 0, height = 0;
  std::vector<double> src_u;  // NaN where invalid
  std::vector<double> src_v;
  bool valid(int x, int y) const {
    return std::isfinite(src_u[static_cast<std::size_t>(y) * width + x]);
  }
};

// Builds a destination->source map. A fisheye4 source goes through the
// forward theta polynomial; a distortion-free source short-circuits to
// pinhole reprojection (identity when intrinsics match).
RectificationMap build_rectification_map(const CameraModel& src, const CameraModel& dst);

template <typename T>
struct Remapped {
  Image<T> image;
  ImageU8 mask;  // 255 where the map entry was valid
};

Remapped<std::uint8_t> remap_bilinear(const ImageU8& img, const RectificationMap& map);
Remapped<std::uint16_t> remap_bilinear(const ImageU16& img, const RectificationMap& map);

// --- Calibration file ----------------------------------------------------
// Single JSON document: named cameras (fx,fy,cx,cy,width,height,distortion
// array) and named transforms (3x3 row-major rotation + translation).

struct Calibration {
  std::map<std::string, CameraModel> cameras;
  std::map<std::string, RigidTransform> transforms;

  const CameraModel& camera(const std::string& name) const;
  const RigidTransform& transform(const std::string& name) const;
};

Calibration load_calibration(const std::string& path);
Calibration parse_calibration(const std::string& json_text);

}  // namespace rgbt

#endif
