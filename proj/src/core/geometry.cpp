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
#include "core/geometry.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace rgbt {

double norm(Vec3 a) { return std::sqrt(dot(a, a)); }

Vec3 operator*(const Mat3& A, Vec3 v) {
  return {A(0, 0) * v.x + A(0, 1) * v.y + A(0, 2) * v.z,
          A(1, 0) * v.x + A(1, 1) * v.y + A(1, 2) * v.z,
          A(2, 0) * v.x + A(2, 1) * v.y + A(2, 2) * v.z};
}

Mat3 operator*(const Mat3& A, const Mat3& B) {
  Mat3 out;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      out(r, c) = A(r, 0) * B(0, c) + A(r, 1) * B(1, c) + A(r, 2) * B(2, c);
  return out;
}

Mat3 transpose(const Mat3& A) {
  Mat3 out;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) out(r, c) = A(c, r);
  return out;
}

double determinant(const Mat3& A) {
  return A(0, 0) * (A(1, 1) * A(2, 2) - A(1, 2) * A(2, 1)) -
         A(0, 1) * (A(1, 0) * A(2, 2) - A(1, 2) * A(2, 0)) +
         A(0, 2) * (A(1, 0) * A(2, 1) - A(1, 1) * A(2, 0));
}

void CameraModel::validate() const {
  if (!(fx > 0) || !(fy > 0))
    fail(ErrorCode::InvalidArgument, "focal lengths must be positive");
  if (width <= 0 || height <= 0)
    fail(ErrorCode::InvalidArgument, "image size must be positive");
  if (!(cx >= 0 && cx < width) || !(cy >= 0 && cy < height))
    fail(ErrorCode::InvalidArgument, "principal point must lie inside the image");
  for (double c : k)
    if (!std::isfinite(c))
      fail(ErrorCode::InvalidArgument, "distortion coefficients must be finite");
}

void RigidTransform::validate() const {
  constexpr double tol = 1e-9;
  Mat3 shouldBeI = transpose(rotation) * rotation;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      double want = (r == c) ? 1.0 : 0.0;
      if (std::abs(shouldBeI(r, c) - want) > tol)
        fail(ErrorCode::InvalidArgument, "rotation is not orthonormal");
    }
  if (std::abs(determinant(rotation) - 1.0) > tol)
    fail(ErrorCode::InvalidArgument, "rotation determinant is not +1");
  if (!std::isfinite(translation.x) || !std::isfinite(translation.y) ||
      !std::isfinite(translation.z))
    fail(ErrorCode::InvalidArgument, "translation must be finite");
}

Vec3 transform_point(const RigidTransform& T, Vec3 p) {
  return T.rotation * p + T.translation;
}

RigidTransform compose(const RigidTransform& A, const RigidTransform& B) {
  // (A∘B)(p) = A.R (B.R p + B.t) + A.t
  return {A.rotation * B.rotation, A.rotation * B.translation + A.translation};
}

RigidTransform invert(const RigidTransform& T) {
  Mat3 Rt = transpose(T.rotation);
  Vec3 mt = Rt * T.translation;
  return {Rt, {-mt.x, -mt.y, -mt.z}};
}

Vec3 backproject(Pixel p, double depth, const CameraModel& cam) {
  if (!(depth > 0)) fail(ErrorCode::Domain, "backproject requires positive depth");
  if (cam.distortion != DistortionModel::None)
    fail(ErrorCode::Unsupported, "backproject operates on rectified (pinhole) images");
  return {(p.u - cam.cx) / cam.fx * depth, (p.v - cam.cy) / cam.fy * depth, depth};
}

Projection project(Vec3 p, const CameraModel& cam) {
  if (cam.distortion != DistortionModel::None)
    fail(ErrorCode::Unsupported, "project operates on rectified (pinhole) images");
  if (!(p.z > 0)) fail(ErrorCode::Domain, "point is behind the camera");
  return {{cam.fx * p.x / p.z + cam.cx, cam.fy * p.y / p.z + cam.cy}, p.z};
}

Pixel fisheye_project(Vec3 p, const CameraModel& cam) {
  double r = std::sqrt(p.x * p.x + p.y * p.y);
  if (r <= std::numeric_limits<double>::min())
    return {cam.cx, cam.cy};  // axial ray
  double theta = std::atan2(r, p.z);
  double t2 = theta * theta;
  double theta_d =
      theta * (1.0 + t2 * (cam.k[0] + t2 * (cam.k[1] + t2 * (cam.k[2] + t2 * cam.k[3]))));
  return {cam.fx * theta_d * (p.x / r) + cam.cx, cam.fy * theta_d * (p.y / r) + cam.cy};
}

RectificationMap build_rectification_map(const CameraModel& src, const CameraModel& dst) {
  src.validate();
  dst.validate();
  if (dst.distortion != DistortionModel::None)
    fail(ErrorCode::InvalidArgument, "destination model must be pinhole");
  RectificationMap map;
  map.width = dst.width;
  map.height = dst.height;
  const std::size_t n = static_cast<std::size_t>(dst.width) * dst.height;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  map.src_u.assign(n, nan);
  map.src_v.assign(n, nan);
  for (int y = 0; y < dst.height; ++y) {
    for (int x = 0; x < dst.width; ++x) {
      Vec3 ray{(x - dst.cx) / dst.fx, (y - dst.cy) / dst.fy, 1.0};
      Pixel s;
      if (src.distortion == DistortionModel::Fisheye4) {
        s = fisheye_project(ray, src);
      } else {
        s = {src.fx * ray.x + src.cx, src.fy * ray.y + src.cy};
      }
      if (s.u >= 0 && s.u <= src.width - 1 && s.v >= 0 && s.v <= src.height - 1) {
        std::size_t i = static_cast<std::size_t>(y) * dst.width + x;
        map.src_u[i] = s.u;
        map.src_v[i] = s.v;
      }
    }
  }
  return map;
}

namespace {

template <typename T>
Remapped<T> remap_impl(const Image<T>& img, const RectificationMap& map) {
  if (img.channels != 1 && img.channels != 3)
    fail(ErrorCode::InvalidArgument, "remap supports 1 or 3 channels");
  Remapped<T> out;
  out.image = Image<T>(map.width, map.height, img.channels);
  out.mask = ImageU8(map.width, map.height, 1);
  for (int y = 0; y < map.height; ++y) {
    for (int x = 0; x < map.width; ++x) {
      std::size_t i = static_cast<std::size_t>(y) * map.width + x;
      const double su = map.src_u[i];
      const double sv = map.src_v[i];
      if (!std::isfinite(su)) continue;
      int u0 = static_cast<int>(std::floor(su));
      int v0 = static_cast<int>(std::floor(sv));
      double a = su - u0;
      double b = sv - v0;
      int u1 = std::min(u0 + 1, img.width - 1);
      int v1 = std::min(v0 + 1, img.height - 1);
      for (int c = 0; c < img.channels; ++c) {
        double top = (1.0 - a) * img.at(u0, v0, c) + a * img.at(u1, v0, c);
        double bot = (1.0 - a) * img.at(u0, v1, c) + a * img.at(u1, v1, c);
        double val = (1.0 - b) * top + b * bot;
        out.image.at(x, y, c) = static_cast<T>(std::llround(val));
      }
      out.mask.at(x, y) = 255;
    }
  }
  return out;
}

}  // namespace

Remapped<std::uint8_t> remap_bilinear(const ImageU8& img, const RectificationMap& map) {
  return remap_impl(img, map);
}

Remapped<std::uint16_t> remap_bilinear(const ImageU16& img, const RectificationMap& map) {
  return remap_impl(img, map);
}

const CameraModel& Calibration::camera(const std::string& name) const {
  auto it = cameras.find(name);
  if (it == cameras.end()) fail(ErrorCode::InvalidArgument, "no such camera: " + name);
  return it->second;
}

const RigidTransform& Calibration::transform(const std::string& name) const {
  auto it = transforms.find(name);
  if (it == transforms.end()) fail(ErrorCode::InvalidArgument, "no such transform: " + name);
  return it->second;
}

Calibration parse_calibration(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Parse, std::string("calibration JSON: ") + e.what());
  }
  Calibration calib;
  try {
    for (auto& [name, j] : doc.at("cameras").items()) {
      CameraModel cam;
      cam.fx = j.at("fx").get<double>();
      cam.fy = j.at("fy").get<double>();
      cam.cx = j.at("cx").get<double>();
      cam.cy = j.at("cy").get<double>();
      cam.width = j.at("width").get<int>();
      cam.height = j.at("height").get<int>();
      auto dist = j.at("distortion");
      if (dist.empty()) {
        cam.distortion = DistortionModel::None;
      } else if (dist.size() == 4) {
        cam.distortion = DistortionModel::Fisheye4;
        for (int i = 0; i < 4; ++i) cam.k[i] = dist[i].get<double>();
      } else {
        fail(ErrorCode::Parse, "camera '" + name + "': distortion must have 0 or 4 entries");
      }
      cam.validate();
      calib.cameras.emplace(name, cam);
    }
    if (doc.contains("transforms")) {
      for (auto& [name, j] : doc.at("transforms").items()) {
        RigidTransform T;
        auto rot = j.at("rotation");
        auto tr = j.at("translation");
        if (rot.size() != 9 || tr.size() != 3)
          fail(ErrorCode::Parse, "transform '" + name + "': need 9 rotation + 3 translation entries");
        for (int i = 0; i < 9; ++i) T.rotation.m[i] = rot[i].get<double>();
        T.translation = {tr[0].get<double>(), tr[1].get<double>(), tr[2].get<double>()};
        T.validate();
        calib.transforms.emplace(name, T);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Parse, std::string("calibration JSON: ") + e.what());
  }
  if (calib.cameras.empty())
    fail(ErrorCode::InvalidArgument, "calibration defines no cameras");
  return calib;
}

Calibration load_calibration(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open calibration file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_calibration(ss.str());
}

}  // namespace rgbt
