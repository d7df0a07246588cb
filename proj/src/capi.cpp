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
#include "rgbt/rgbt.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include <json.hpp>

#include "core/crossmodal.hpp"
#include "core/dataset.hpp"
#include "core/evaluate.hpp"
#include "core/geometry.hpp"
#include "core/image.hpp"
#include "core/registration.hpp"
#include "core/thermal.hpp"

/* Opaque handle definitions. */
struct rgbt_image_u8 { rgbt::ImageU8 image; };
struct rgbt_image_u16 { rgbt::ImageU16 image; };
struct rgbt_image_f32 { rgbt::ImageF32 image; };
struct rgbt_calibration { rgbt::Calibration calibration; };
struct rgbt_rectification_map { rgbt::RectificationMap map; };
struct rgbt_manifest { rgbt::DatasetManifest manifest; };
struct rgbt_embedding_set { rgbt::EmbeddingSet set; };
struct rgbt_distill_result { rgbt::ToyDistillResult result; std::vector<rgbt_distill_history_entry> history; };
struct rgbt_seg_eval { rgbt::SegAccumulator accumulator; };
struct rgbt_depth_eval { rgbt::DepthAccumulator accumulator; };

namespace {

thread_local std::string g_last_error;

rgbt_status to_status(rgbt::ErrorCode code) {
  switch (code) {
    case rgbt::ErrorCode::InvalidArgument: return RGBT_ERROR_INVALID_ARGUMENT;
    case rgbt::ErrorCode::Io: return RGBT_ERROR_IO;
    case rgbt::ErrorCode::Parse: return RGBT_ERROR_PARSE;
    case rgbt::ErrorCode::Domain: return RGBT_ERROR_DOMAIN;
    case rgbt::ErrorCode::Unsupported: return RGBT_ERROR_UNSUPPORTED;
    case rgbt::ErrorCode::Numeric: return RGBT_ERROR_NUMERIC;
  }
  return RGBT_ERROR_UNKNOWN;
}

template <typename F>
rgbt_status guarded(F&& fn) {
  try {
    fn();
    return RGBT_OK;
  } catch (const rgbt::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return RGBT_ERROR_UNKNOWN;
  }
}

void require(bool condition, const char* message) {
  if (!condition) rgbt::fail(rgbt::ErrorCode::InvalidArgument, message);
}

rgbt::CameraModel to_core(const rgbt_camera& c) {
  rgbt::CameraModel cam;
  cam.fx = c.fx;
  cam.fy = c.fy;
  cam.cx = c.cx;
  cam.cy = c.cy;
  cam.width = c.width;
  cam.height = c.height;
  if (c.num_distortion == 0) {
    cam.distortion = rgbt::DistortionModel::None;
  } else if (c.num_distortion == 4) {
    cam.distortion = rgbt::DistortionModel::Fisheye4;
    for (int i = 0; i < 4; ++i) cam.k[i] = c.k[i];
  } else {
    rgbt::fail(rgbt::ErrorCode::InvalidArgument, "num_distortion must be 0 or 4");
  }
  cam.validate();
  return cam;
}

rgbt_camera from_core(const rgbt::CameraModel& cam) {
  rgbt_camera c{};
  c.fx = cam.fx;
  c.fy = cam.fy;
  c.cx = cam.cx;
  c.cy = cam.cy;
  c.width = cam.width;
  c.height = cam.height;
  c.num_distortion = cam.distortion == rgbt::DistortionModel::Fisheye4 ? 4 : 0;
  for (int i = 0; i < 4; ++i) c.k[i] = cam.k[i];
  return c;
}

rgbt::RigidTransform to_transform(const double rotation[9], const double translation[3]) {
  require(rotation && translation, "rotation/translation must not be NULL");
  rgbt::RigidTransform T;
  for (int i = 0; i < 9; ++i) T.rotation.m[i] = rotation[i];
  T.translation = {translation[0], translation[1], translation[2]};
  T.validate();
  return T;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) rgbt::fail(rgbt::ErrorCode::Io, "out of memory");
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename T>
T* dup_buffer(const std::vector<T>& v) {
  T* out = static_cast<T*>(std::malloc(sizeof(T) * std::max<std::size_t>(v.size(), 1)));
  if (!out) rgbt::fail(rgbt::ErrorCode::Io, "out of memory");
  if (!v.empty()) std::memcpy(out, v.data(), sizeof(T) * v.size());
  return out;
}

const rgbt::SequenceRecord& sequence_at(const rgbt_manifest* m, size_t index) {
  require(m != nullptr, "manifest must not be NULL");
  if (index >= m->manifest.sequences.size())
    rgbt::fail(rgbt::ErrorCode::InvalidArgument, "sequence index out of range");
  return m->manifest.sequences[index];
}

const char* metric_name(rgbt_metric m) {
  return m == RGBT_METRIC_EUCLIDEAN ? "euclidean" : "cosine";
}

rgbt::DistanceMetric to_metric(rgbt_metric m) {
  switch (m) {
    case RGBT_METRIC_EUCLIDEAN: return rgbt::DistanceMetric::Euclidean;
    case RGBT_METRIC_COSINE: return rgbt::DistanceMetric::Cosine;
  }
  rgbt::fail(rgbt::ErrorCode::InvalidArgument, "unknown metric");
}

}  // namespace

extern "C" {

const char* rgbt_version(void) { return rgbt::kToolkitVersion; }

void rgbt_schema_versions(int32_t* manifest, int32_t* embedding, int32_t* summary) {
  if (manifest) *manifest = rgbt::kManifestSchemaVersion;
  if (embedding) *embedding = rgbt::kEmbeddingFileVersion;
  if (summary) *summary = rgbt::kSummarySchemaVersion;
}

const char* rgbt_last_error_message(void) { return g_last_error.c_str(); }

void rgbt_buffer_free(void* buffer) { std::free(buffer); }
void rgbt_string_free(char* string) { std::free(string); }

/* --- rasters ------------------------------------------------------- */

rgbt_status rgbt_image_u8_create(int32_t width, int32_t height, int32_t channels,
                                 const uint8_t* data, rgbt_image_u8** out) {
  return guarded([&] {
    require(out != nullptr, "out must not be NULL");
    auto* handle = new rgbt_image_u8{rgbt::ImageU8(width, height, channels)};
    if (data)
      std::memcpy(handle->image.data.data(), data, handle->image.data.size());
    *out = handle;
  });
}

rgbt_status rgbt_image_u8_load(const char* path, rgbt_image_u8** out) {
  return guarded([&] {
    require(path && out, "path/out must not be NULL");
    *out = new rgbt_image_u8{rgbt::load_pnm_u8(path)};
  });
}

rgbt_status rgbt_image_u8_save(const rgbt_image_u8* image, const char* path) {
  return guarded([&] {
    require(image && path, "image/path must not be NULL");
    rgbt::save_pnm_u8(image->image, path);
  });
}

rgbt_status rgbt_image_u8_info(const rgbt_image_u8* image, int32_t* width,
                               int32_t* height, int32_t* channels) {
  return guarded([&] {
    require(image != nullptr, "image must not be NULL");
    if (width) *width = image->image.width;
    if (height) *height = image->image.height;
    if (channels) *channels = image->image.channels;
  });
}

const uint8_t* rgbt_image_u8_data(const rgbt_image_u8* image) {
  return image ? image->image.data.data() : nullptr;
}

void rgbt_image_u8_free(rgbt_image_u8* image) { delete image; }

rgbt_status rgbt_image_u16_create(int32_t width, int32_t height, const uint16_t* data,
                                  rgbt_image_u16** out) {
  return guarded([&] {
    require(out != nullptr, "out must not be NULL");
    auto* handle = new rgbt_image_u16{rgbt::ImageU16(width, height, 1)};
    if (data)
      std::memcpy(handle->image.data.data(), data, handle->image.data.size() * 2);
    *out = handle;
  });
}

rgbt_status rgbt_image_u16_load(const char* path, rgbt_image_u16** out) {
  return guarded([&] {
    require(path && out, "path/out must not be NULL");
    *out = new rgbt_image_u16{rgbt::load_pgm_u16(path)};
  });
}

rgbt_status rgbt_image_u16_save(const rgbt_image_u16* image, const char* path) {
  return guarded([&] {
    require(image && path, "image/path must not be NULL");
    rgbt::save_pgm_u16(image->image, path);
  });
}

rgbt_status rgbt_image_u16_info(const rgbt_image_u16* image, int32_t* width,
                                int32_t* height) {
  return guarded([&] {
    require(image != nullptr, "image must not be NULL");
    if (width) *width = image->image.width;
    if (height) *height = image->image.height;
  });
}

const uint16_t* rgbt_image_u16_data(const rgbt_image_u16* image) {
  return image ? image->image.data.data() : nullptr;
}

void rgbt_image_u16_free(rgbt_image_u16* image) { delete image; }

rgbt_status rgbt_image_f32_create(int32_t width, int32_t height, const float* data,
                                  rgbt_image_f32** out) {
  return guarded([&] {
    require(out != nullptr, "out must not be NULL");
    auto* handle = new rgbt_image_f32{rgbt::ImageF32(width, height, 1)};
    if (data)
      std::memcpy(handle->image.data.data(), data, handle->image.data.size() * 4);
    *out = handle;
  });
}

rgbt_status rgbt_image_f32_load(const char* path, rgbt_image_f32** out) {
  return guarded([&] {
    require(path && out, "path/out must not be NULL");
    *out = new rgbt_image_f32{rgbt::load_f32_auto(path)};
  });
}

rgbt_status rgbt_image_f32_save_rgtd(const rgbt_image_f32* image, const char* path) {
  return guarded([&] {
    require(image && path, "image/path must not be NULL");
    rgbt::save_rgtd(image->image, path);
  });
}

rgbt_status rgbt_image_f32_save_pfm(const rgbt_image_f32* image, const char* path) {
  return guarded([&] {
    require(image && path, "image/path must not be NULL");
    rgbt::save_pfm(image->image, path);
  });
}

rgbt_status rgbt_image_f32_info(const rgbt_image_f32* image, int32_t* width,
                                int32_t* height) {
  return guarded([&] {
    require(image != nullptr, "image must not be NULL");
    if (width) *width = image->image.width;
    if (height) *height = image->image.height;
  });
}

const float* rgbt_image_f32_data(const rgbt_image_f32* image) {
  return image ? image->image.data.data() : nullptr;
}

void rgbt_image_f32_free(rgbt_image_f32* image) { delete image; }

/* --- thermal pipeline ------------------------------------------------ */

void rgbt_thermal_config_default(rgbt_thermal_config* config) {
  if (!config) return;
  config->lo_percentile = 0.0;
  config->hi_percentile = 100.0;
  config->tiles_x = 8;
  config->tiles_y = 8;
  config->clip_limit = 2.0;
  config->bilateral_radius = 4;
  config->sigma_color = 25.0;
  config->sigma_space = 5.0;
}

rgbt_status rgbt_minmax_normalize(const rgbt_image_u16* frame, rgbt_image_u8** out,
                                  int32_t* degenerate) {
  return guarded([&] {
    require(frame && out, "frame/out must not be NULL");
    auto result = rgbt::minmax_normalize(frame->image);
    if (degenerate) *degenerate = result.degenerate ? 1 : 0;
    *out = new rgbt_image_u8{std::move(result.frame)};
  });
}

rgbt_status rgbt_clahe(const rgbt_image_u8* frame, int32_t tiles_x, int32_t tiles_y,
                       double clip_limit, rgbt_image_u8** out) {
  return guarded([&] {
    require(frame && out, "frame/out must not be NULL");
    *out = new rgbt_image_u8{rgbt::clahe(frame->image, {tiles_x, tiles_y, clip_limit})};
  });
}

rgbt_status rgbt_bilateral_filter(const rgbt_image_u8* frame, int32_t radius,
                                  double sigma_color, double sigma_space,
                                  rgbt_image_u8** out) {
  return guarded([&] {
    require(frame && out, "frame/out must not be NULL");
    *out = new rgbt_image_u8{
        rgbt::bilateral_filter(frame->image, {radius, sigma_color, sigma_space})};
  });
}

rgbt_status rgbt_thermal_to_8bit(const rgbt_image_u16* frame,
                                 const rgbt_thermal_config* config, rgbt_image_u8** out,
                                 int32_t* degenerate) {
  return guarded([&] {
    require(frame && config && out, "frame/config/out must not be NULL");
    rgbt::ThermalPipelineConfig cfg;
    cfg.minmax = {config->lo_percentile, config->hi_percentile};
    cfg.clahe = {config->tiles_x, config->tiles_y, config->clip_limit};
    cfg.bilateral = {config->bilateral_radius, config->sigma_color, config->sigma_space};
    auto result = rgbt::thermal_to_8bit(frame->image, cfg);
    if (degenerate) *degenerate = result.degenerate ? 1 : 0;
    *out = new rgbt_image_u8{std::move(result.frame)};
  });
}

rgbt_status rgbt_filter_ffc(const int64_t* timestamps, size_t count,
                            const rgbt_ffc_event* events, size_t event_count,
                            int64_t guard_ns, int64_t** kept, size_t* kept_count) {
  return guarded([&] {
    require(kept && kept_count, "kept/kept_count must not be NULL");
    require(timestamps || count == 0, "timestamps must not be NULL");
    require(events || event_count == 0, "events must not be NULL");
    std::vector<std::int64_t> ts(timestamps, timestamps + count);
    std::vector<rgbt::FfcEvent> evs(event_count);
    for (size_t i = 0; i < event_count; ++i)
      evs[i] = {events[i].start_ns, events[i].end_ns};
    auto result = rgbt::filter_ffc(ts, evs, guard_ns);
    *kept = dup_buffer(result);
    *kept_count = result.size();
  });
}

/* --- geometry -------------------------------------------------------- */

rgbt_status rgbt_calibration_load(const char* path, rgbt_calibration** out) {
  return guarded([&] {
    require(path && out, "path/out must not be NULL");
    *out = new rgbt_calibration{rgbt::load_calibration(path)};
  });
}

rgbt_status rgbt_calibration_get_camera(const rgbt_calibration* calibration,
                                        const char* name, rgbt_camera* out) {
  return guarded([&] {
    require(calibration && name && out, "calibration/name/out must not be NULL");
    *out = from_core(calibration->calibration.camera(name));
  });
}

rgbt_status rgbt_calibration_get_transform(const rgbt_calibration* calibration,
                                           const char* name, double rotation[9],
                                           double translation[3]) {
  return guarded([&] {
    require(calibration && name && rotation && translation,
            "calibration/name/rotation/translation must not be NULL");
    const auto& T = calibration->calibration.transform(name);
    for (int i = 0; i < 9; ++i) rotation[i] = T.rotation.m[i];
    translation[0] = T.translation.x;
    translation[1] = T.translation.y;
    translation[2] = T.translation.z;
  });
}

void rgbt_calibration_free(rgbt_calibration* calibration) { delete calibration; }

rgbt_status rgbt_backproject(const rgbt_camera* camera, double u, double v,
                             double depth, double point[3]) {
  return guarded([&] {
    require(camera && point, "camera/point must not be NULL");
    auto p = rgbt::backproject({u, v}, depth, to_core(*camera));
    point[0] = p.x;
    point[1] = p.y;
    point[2] = p.z;
  });
}

rgbt_status rgbt_project(const rgbt_camera* camera, const double point[3], double* u,
                         double* v, double* depth) {
  return guarded([&] {
    require(camera && point, "camera/point must not be NULL");
    auto proj = rgbt::project({point[0], point[1], point[2]}, to_core(*camera));
    if (u) *u = proj.pixel.u;
    if (v) *v = proj.pixel.v;
    if (depth) *depth = proj.depth;
  });
}

rgbt_status rgbt_transform_point(const double rotation[9], const double translation[3],
                                 const double point[3], double out[3]) {
  return guarded([&] {
    require(point && out, "point/out must not be NULL");
    auto T = to_transform(rotation, translation);
    auto q = rgbt::transform_point(T, {point[0], point[1], point[2]});
    out[0] = q.x;
    out[1] = q.y;
    out[2] = q.z;
  });
}

rgbt_status rgbt_rectification_map_build(const rgbt_camera* source,
                                         const rgbt_camera* destination,
                                         rgbt_rectification_map** out) {
  return guarded([&] {
    require(source && destination && out, "source/destination/out must not be NULL");
    *out = new rgbt_rectification_map{
        rgbt::build_rectification_map(to_core(*source), to_core(*destination))};
  });
}

void rgbt_rectification_map_free(rgbt_rectification_map* map) { delete map; }

rgbt_status rgbt_remap_u8(const rgbt_image_u8* image, const rgbt_rectification_map* map,
                          rgbt_image_u8** out, rgbt_image_u8** mask) {
  return guarded([&] {
    require(image && map && out, "image/map/out must not be NULL");
    auto result = rgbt::remap_bilinear(image->image, map->map);
    *out = new rgbt_image_u8{std::move(result.image)};
    if (mask) *mask = new rgbt_image_u8{std::move(result.mask)};
  });
}

rgbt_status rgbt_remap_u16(const rgbt_image_u16* image,
                           const rgbt_rectification_map* map, rgbt_image_u16** out,
                           rgbt_image_u8** mask) {
  return guarded([&] {
    require(image && map && out, "image/map/out must not be NULL");
    auto result = rgbt::remap_bilinear(image->image, map->map);
    *out = new rgbt_image_u16{std::move(result.image)};
    if (mask) *mask = new rgbt_image_u8{std::move(result.mask)};
  });
}

/* --- registration ----------------------------------------------------- */

rgbt_status rgbt_register_pair(const rgbt_camera* rgb_camera,
                               const double rotation_rgb_to_thermal[9],
                               const double translation_rgb_to_thermal[3],
                               const rgbt_camera* thermal_camera,
                               const rgbt_image_u8* rgb, const rgbt_image_f32* depth,
                               const rgbt_image_u8* thermal8, double depth_tolerance,
                               rgbt_image_u8** warped_rgb, rgbt_image_f32** mask) {
  return guarded([&] {
    require(rgb_camera && thermal_camera && rgb && depth && thermal8 && warped_rgb,
            "required arguments must not be NULL");
    auto pair = rgbt::register_pair(
        rgb->image, depth->image, to_core(*rgb_camera),
        to_transform(rotation_rgb_to_thermal, translation_rgb_to_thermal),
        to_core(*thermal_camera), thermal8->image, depth_tolerance);
    *warped_rgb = new rgbt_image_u8{std::move(pair.warped_rgb)};
    if (mask) *mask = new rgbt_image_f32{std::move(pair.mask)};
  });
}

rgbt_status rgbt_alpha_blend(const rgbt_image_u8* a, const rgbt_image_u8* b,
                             double alpha, rgbt_image_u8** out) {
  return guarded([&] {
    require(a && b && out, "a/b/out must not be NULL");
    *out = new rgbt_image_u8{rgbt::alpha_blend(a->image, b->image, alpha)};
  });
}

/* --- dataset ----------------------------------------------------------- */

rgbt_status rgbt_manifest_load(const char* path, rgbt_manifest** out) {
  return guarded([&] {
    require(path && out, "path/out must not be NULL");
    *out = new rgbt_manifest{rgbt::load_manifest(path)};
  });
}

const char* rgbt_manifest_dataset(const rgbt_manifest* manifest) {
  return manifest ? manifest->manifest.dataset.c_str() : nullptr;
}

size_t rgbt_manifest_sequence_count(const rgbt_manifest* manifest) {
  return manifest ? manifest->manifest.sequences.size() : 0;
}

rgbt_status rgbt_manifest_sequence_info(const rgbt_manifest* manifest, size_t index,
                                        rgbt_sequence_info* out) {
  return guarded([&] {
    require(out != nullptr, "out must not be NULL");
    const auto& seq = sequence_at(manifest, index);
    out->name = seq.name.c_str();
    out->environment = rgbt::to_string(seq.environment);
    switch (seq.position_kind) {
      case rgbt::PositionKind::Geographic: out->position_kind = "geographic"; break;
      case rgbt::PositionKind::Odometric: out->position_kind = "odometric"; break;
      case rgbt::PositionKind::None: out->position_kind = "none"; break;
    }
    out->hardware_synced = seq.hardware_synced ? 1 : 0;
    out->rgb_frames = seq.rgb.size();
    out->thermal_frames = seq.thermal.size();
    out->ffc_events = seq.ffc_events.size();
    out->positions = seq.positions.size();
  });
}

rgbt_status rgbt_manifest_timestamps(const rgbt_manifest* manifest, size_t sequence,
                                     rgbt_stream stream, int64_t** timestamps,
                                     size_t* count) {
  return guarded([&] {
    require(timestamps && count, "timestamps/count must not be NULL");
    require(stream == RGBT_STREAM_RGB || stream == RGBT_STREAM_THERMAL,
            "unknown stream");
    const auto& seq = sequence_at(manifest, sequence);
    const auto& frames = stream == RGBT_STREAM_RGB ? seq.rgb : seq.thermal;
    std::vector<int64_t> ts;
    ts.reserve(frames.size());
    for (const auto& f : frames) ts.push_back(f.t_ns);
    *timestamps = dup_buffer(ts);
    *count = ts.size();
  });
}

rgbt_status rgbt_manifest_frame_path(const rgbt_manifest* manifest, size_t sequence,
                                     rgbt_stream stream, size_t frame,
                                     const char** path) {
  return guarded([&] {
    require(path != nullptr, "path must not be NULL");
    require(stream == RGBT_STREAM_RGB || stream == RGBT_STREAM_THERMAL,
            "unknown stream");
    const auto& seq = sequence_at(manifest, sequence);
    const auto& frames = stream == RGBT_STREAM_RGB ? seq.rgb : seq.thermal;
    if (frame >= frames.size())
      rgbt::fail(rgbt::ErrorCode::InvalidArgument, "frame index out of range");
    *path = frames[frame].path.c_str();
  });
}

rgbt_status rgbt_manifest_ffc_events(const rgbt_manifest* manifest, size_t sequence,
                                     rgbt_ffc_event** events, size_t* count) {
  return guarded([&] {
    require(events && count, "events/count must not be NULL");
    const auto& seq = sequence_at(manifest, sequence);
    std::vector<rgbt_ffc_event> evs;
    evs.reserve(seq.ffc_events.size());
    for (const auto& e : seq.ffc_events) evs.push_back({e.start_ns, e.end_ns});
    *events = dup_buffer(evs);
    *count = evs.size();
  });
}

void rgbt_manifest_free(rgbt_manifest* manifest) { delete manifest; }

rgbt_status rgbt_pair_by_timestamp(const int64_t* rgb_ts, size_t rgb_count,
                                   const int64_t* thermal_ts, size_t thermal_count,
                                   int64_t tolerance_ns, rgbt_frame_pair** pairs,
                                   size_t* pair_count) {
  return guarded([&] {
    require(pairs && pair_count, "pairs/pair_count must not be NULL");
    require(rgb_ts || rgb_count == 0, "rgb_ts must not be NULL");
    require(thermal_ts || thermal_count == 0, "thermal_ts must not be NULL");
    std::vector<std::int64_t> a(rgb_ts, rgb_ts + rgb_count);
    std::vector<std::int64_t> b(thermal_ts, thermal_ts + thermal_count);
    auto result = rgbt::pair_by_timestamp(a, b, tolerance_ns);
    std::vector<rgbt_frame_pair> out;
    out.reserve(result.size());
    for (const auto& p : result)
      out.push_back({p.rgb_index, p.thermal_index, p.abs_dt_ns});
    *pairs = dup_buffer(out);
    *pair_count = out.size();
  });
}

rgbt_status rgbt_subsample_1hz(const int64_t* timestamps, size_t count,
                               size_t** indices, size_t* index_count) {
  return guarded([&] {
    require(indices && index_count, "indices/index_count must not be NULL");
    require(timestamps || count == 0, "timestamps must not be NULL");
    std::vector<std::int64_t> ts(timestamps, timestamps + count);
    auto kept = rgbt::subsample_1hz(ts);
    *indices = dup_buffer(kept);
    *index_count = kept.size();
  });
}

void rgbt_stats_config_default(rgbt_stats_config* config) {
  if (!config) return;
  rgbt::StatsConfig defaults;
  config->pair_tol_synced_ns = defaults.pair_tol_synced_ns;
  config->pair_tol_unsynced_ns = defaults.pair_tol_unsynced_ns;
  config->ffc_guard_ns = defaults.ffc_guard_ns;
}

rgbt_status rgbt_dataset_stats_json(const rgbt_manifest* manifest,
                                    const rgbt_stats_config* config, char** json) {
  return guarded([&] {
    require(manifest && json, "manifest/json must not be NULL");
    rgbt::StatsConfig cfg;
    if (config) {
      cfg.pair_tol_synced_ns = config->pair_tol_synced_ns;
      cfg.pair_tol_unsynced_ns = config->pair_tol_unsynced_ns;
      cfg.ffc_guard_ns = config->ffc_guard_ns;
    }
    auto stats = rgbt::dataset_stats(manifest->manifest, cfg);
    nlohmann::json doc;
    doc["dataset"] = manifest->manifest.dataset;
    doc["total"] = stats.total;
    nlohmann::json envs = nlohmann::json::object();
    for (const auto& [env, n] : stats.per_environment) {
      envs[env]["pairs_1hz"] = n;
      envs[env]["fraction"] =
          stats.total ? static_cast<double>(n) / static_cast<double>(stats.total) : 0.0;
    }
    doc["per_environment"] = envs;
    nlohmann::json seqs = nlohmann::json::array();
    for (const auto& s : stats.per_sequence)
      seqs.push_back({{"name", s.name},
                      {"environment", rgbt::to_string(s.environment)},
                      {"pairs_1hz", s.pairs_1hz}});
    doc["per_sequence"] = seqs;
    doc["config"] = {{"pair_tol_synced_ns", cfg.pair_tol_synced_ns},
                     {"pair_tol_unsynced_ns", cfg.pair_tol_unsynced_ns},
                     {"ffc_guard_ns", cfg.ffc_guard_ns}};
    *json = dup_string(doc.dump());
  });
}

rgbt_status rgbt_position_at(const rgbt_manifest* manifest, size_t sequence,
                             int64_t t_ns, double position[3], int32_t* found) {
  return guarded([&] {
    require(position && found, "position/found must not be NULL");
    const auto& seq = sequence_at(manifest, sequence);
    auto p = rgbt::position_at(seq, t_ns);
    *found = p.has_value() ? 1 : 0;
    if (p) {
      position[0] = p->x;
      position[1] = p->y;
      position[2] = p->z;
    }
  });
}

/* --- embeddings / crossmodal ------------------------------------------- */

rgbt_status rgbt_embedding_set_create(size_t count, size_t dim, const double* data,
                                      const char* const* ids,
                                      const double* positions_xyz,
                                      rgbt_modality modality,
                                      rgbt_embedding_set** out) {
  return guarded([&] {
    require(data && ids && out, "data/ids/out must not be NULL");
    rgbt::EmbeddingSet set;
    set.count = count;
    set.dim = dim;
    set.data.assign(data, data + count * dim);
    set.ids.reserve(count);
    for (size_t i = 0; i < count; ++i) {
      require(ids[i] != nullptr, "ids entries must not be NULL");
      set.ids.emplace_back(ids[i]);
    }
    if (positions_xyz) {
      set.positions.resize(count);
      for (size_t i = 0; i < count; ++i)
        set.positions[i] = {positions_xyz[3 * i], positions_xyz[3 * i + 1],
                            positions_xyz[3 * i + 2]};
    }
    set.modality = modality == RGBT_MODALITY_THERMAL ? rgbt::Modality::Thermal
                                                     : rgbt::Modality::Rgb;
    set.validate();
    *out = new rgbt_embedding_set{std::move(set)};
  });
}

rgbt_status rgbt_embedding_set_load(const char* path, rgbt_embedding_set** out) {
  return guarded([&] {
    require(path && out, "path/out must not be NULL");
    *out = new rgbt_embedding_set{rgbt::load_embedding_set(path)};
  });
}

rgbt_status rgbt_embedding_set_save(const rgbt_embedding_set* set, const char* path) {
  return guarded([&] {
    require(set && path, "set/path must not be NULL");
    rgbt::save_embedding_set(set->set, path);
  });
}

rgbt_status rgbt_embedding_set_info(const rgbt_embedding_set* set, size_t* count,
                                    size_t* dim, int32_t* modality,
                                    int32_t* has_positions) {
  return guarded([&] {
    require(set != nullptr, "set must not be NULL");
    if (count) *count = set->set.count;
    if (dim) *dim = set->set.dim;
    if (modality) *modality = static_cast<int32_t>(set->set.modality);
    if (has_positions) *has_positions = set->set.has_positions() ? 1 : 0;
  });
}

const double* rgbt_embedding_set_data(const rgbt_embedding_set* set) {
  return set ? set->set.data.data() : nullptr;
}

const char* rgbt_embedding_set_id(const rgbt_embedding_set* set, size_t row) {
  if (!set || row >= set->set.ids.size()) return nullptr;
  return set->set.ids[row].c_str();
}

void rgbt_embedding_set_free(rgbt_embedding_set* set) { delete set; }

rgbt_status rgbt_l2_normalize(double* data, size_t count, size_t dim,
                              size_t* zero_rows) {
  return guarded([&] {
    require(data || count == 0, "data must not be NULL");
    std::vector<double> rows(data, data + count * dim);
    size_t zeros = rgbt::l2_normalize_rows(rows, count, dim);
    if (!rows.empty())
      std::memcpy(data, rows.data(), rows.size() * sizeof(double));
    if (zero_rows) *zero_rows = zeros;
  });
}

rgbt_status rgbt_infonce_loss(const double* student, const double* teacher,
                              size_t batch, size_t dim, double tau, double* loss,
                              double* grad_student) {
  return guarded([&] {
    require(student && teacher && loss, "student/teacher/loss must not be NULL");
    std::vector<double> s(student, student + batch * dim);
    std::vector<double> t(teacher, teacher + batch * dim);
    auto result = rgbt::infonce_loss(s, t, batch, dim, tau, grad_student != nullptr);
    *loss = result.loss;
    if (grad_student)
      std::memcpy(grad_student, result.grad_student.data(),
                  result.grad_student.size() * sizeof(double));
  });
}

rgbt_status rgbt_triplet_margin_loss(const double* anchor, const double* positive,
                                     const double* negative, size_t dim, double margin,
                                     rgbt_metric metric, double* loss,
                                     double* grad_anchor, double* grad_positive,
                                     double* grad_negative) {
  return guarded([&] {
    require(anchor && positive && negative && loss,
            "anchor/positive/negative/loss must not be NULL");
    std::vector<double> a(anchor, anchor + dim);
    std::vector<double> p(positive, positive + dim);
    std::vector<double> n(negative, negative + dim);
    const bool want_grad = grad_anchor || grad_positive || grad_negative;
    auto result =
        rgbt::triplet_margin_loss(a, p, n, margin, to_metric(metric), want_grad);
    *loss = result.loss;
    if (grad_anchor)
      std::memcpy(grad_anchor, result.grad_anchor.data(), dim * sizeof(double));
    if (grad_positive)
      std::memcpy(grad_positive, result.grad_positive.data(), dim * sizeof(double));
    if (grad_negative)
      std::memcpy(grad_negative, result.grad_negative.data(), dim * sizeof(double));
  });
}

void rgbt_mining_config_default(rgbt_mining_config* config) {
  if (!config) return;
  rgbt::MiningConfig defaults;
  config->radius = defaults.radius;
  config->k_hard = defaults.k_hard;
  config->seed = defaults.seed;
  config->frame_radius = defaults.frame_radius ? 1 : 0;
  config->hard_metric = RGBT_METRIC_EUCLIDEAN;
}

rgbt_status rgbt_mine_triplets(const rgbt_embedding_set* rgb,
                               const rgbt_embedding_set* thermal,
                               const rgbt_mining_config* config,
                               rgbt_triplet** triplets, size_t* triplet_count,
                               size_t* skipped_anchors, int32_t* used_frame_radius) {
  return guarded([&] {
    require(rgb && thermal && config && triplets && triplet_count,
            "rgb/thermal/config/triplets/triplet_count must not be NULL");
    rgbt::MiningConfig cfg;
    cfg.radius = config->radius;
    cfg.k_hard = config->k_hard;
    cfg.seed = config->seed;
    cfg.frame_radius = config->frame_radius != 0;
    cfg.hard_metric = to_metric(config->hard_metric);
    auto result = rgbt::mine_triplets(rgb->set, thermal->set, cfg);
    std::vector<rgbt_triplet> out;
    out.reserve(result.triplets.size());
    for (const auto& t : result.triplets)
      out.push_back({t.anchor_index, t.positive_index, t.negative_index});
    *triplets = dup_buffer(out);
    *triplet_count = out.size();
    if (skipped_anchors) *skipped_anchors = result.skipped_anchors;
    if (used_frame_radius) *used_frame_radius = result.used_frame_radius ? 1 : 0;
  });
}

void rgbt_distill_config_default(rgbt_distill_config* config) {
  if (!config) return;
  rgbt::ToyDistillConfig defaults;
  config->latent_dim = defaults.latent_dim;
  config->feature_dim = defaults.feature_dim;
  config->train_pairs = defaults.train_pairs;
  config->val_pairs = defaults.val_pairs;
  config->noise = defaults.noise;
  config->learning_rate = defaults.learning_rate;
  config->steps = defaults.steps;
  config->batch_size = defaults.batch_size;
  config->tau = defaults.tau;
  config->seed = defaults.seed;
  config->eval_every = defaults.eval_every;
}

rgbt_status rgbt_toy_distill(const rgbt_distill_config* config,
                             rgbt_distill_result** out) {
  return guarded([&] {
    require(config && out, "config/out must not be NULL");
    rgbt::ToyDistillConfig cfg;
    cfg.latent_dim = config->latent_dim;
    cfg.feature_dim = config->feature_dim;
    cfg.train_pairs = config->train_pairs;
    cfg.val_pairs = config->val_pairs;
    cfg.noise = config->noise;
    cfg.learning_rate = config->learning_rate;
    cfg.steps = config->steps;
    cfg.batch_size = config->batch_size;
    cfg.tau = config->tau;
    cfg.seed = config->seed;
    cfg.eval_every = config->eval_every;
    auto* handle = new rgbt_distill_result{rgbt::toy_distill(cfg), {}};
    handle->history.reserve(handle->result.history.size());
    for (const auto& h : handle->result.history)
      handle->history.push_back({static_cast<uint64_t>(h.step), h.loss, h.recall_at_1});
    *out = handle;
  });
}

rgbt_status rgbt_distill_result_history(const rgbt_distill_result* result,
                                        const rgbt_distill_history_entry** entries,
                                        size_t* count) {
  return guarded([&] {
    require(result && entries && count, "result/entries/count must not be NULL");
    *entries = result->history.data();
    *count = result->history.size();
  });
}

rgbt_status rgbt_distill_result_recall(const rgbt_distill_result* result,
                                       double* initial, double* final_recall) {
  return guarded([&] {
    require(result != nullptr, "result must not be NULL");
    if (initial) *initial = result->result.initial_recall_at_1;
    if (final_recall) *final_recall = result->result.final_recall_at_1;
  });
}

void rgbt_distill_result_free(rgbt_distill_result* result) { delete result; }

/* --- evaluation --------------------------------------------------------- */

rgbt_status rgbt_eval_vpr_json(const char* const* sequence_names,
                               const char* const* query_paths,
                               const char* const* db_paths, size_t sequence_count,
                               double radius, int32_t frame_radius, const size_t* ks,
                               size_t k_count, rgbt_metric metric, char** json) {
  return guarded([&] {
    require(sequence_names && query_paths && db_paths && ks && json,
            "names/paths/ks/json must not be NULL");
    std::vector<std::string> names;
    std::vector<rgbt::EmbeddingSet> queries, dbs;
    for (size_t i = 0; i < sequence_count; ++i) {
      names.emplace_back(sequence_names[i]);
      queries.push_back(rgbt::load_embedding_set(query_paths[i]));
      dbs.push_back(rgbt::load_embedding_set(db_paths[i]));
    }
    std::vector<size_t> k_list(ks, ks + k_count);
    auto report = rgbt::evaluate_vpr(names, queries, dbs, radius, frame_radius != 0,
                                     k_list, to_metric(metric));
    nlohmann::json doc;
    doc["radius"] = radius;
    doc["frame_radius"] = frame_radius != 0;
    doc["metric"] = metric_name(metric);
    nlohmann::json seqs = nlohmann::json::array();
    for (const auto& seq : report.per_sequence) {
      nlohmann::json recalls = nlohmann::json::object();
      for (const auto& [k, r] : seq.recall_at) recalls[std::to_string(k)] = r;
      seqs.push_back({{"name", seq.name},
                      {"queries", seq.queries},
                      {"evaluable", seq.evaluable},
                      {"dropped", seq.dropped},
                      {"k_clamped", seq.k_clamped},
                      {"recall", recalls}});
    }
    doc["per_seq"] = seqs;
    nlohmann::json wm = nlohmann::json::object();
    for (const auto& [k, r] : report.weighted_mean) wm[std::to_string(k)] = r;
    doc["weighted_mean"] = wm;
    doc["dropped_queries"] = report.dropped_queries;
    *json = dup_string(doc.dump());
  });
}

rgbt_status rgbt_seg_eval_new(int32_t classes, int32_t ignore_label,
                              rgbt_seg_eval** out) {
  return guarded([&] {
    require(out != nullptr, "out must not be NULL");
    *out = new rgbt_seg_eval{rgbt::SegAccumulator(classes, ignore_label)};
  });
}

rgbt_status rgbt_seg_eval_add(rgbt_seg_eval* eval,
                              const rgbt_image_u8* predicted_labels,
                              const rgbt_image_u8* ground_truth_labels) {
  return guarded([&] {
    require(eval && predicted_labels && ground_truth_labels,
            "eval/predicted/ground_truth must not be NULL");
    eval->accumulator.add(predicted_labels->image, ground_truth_labels->image);
  });
}

rgbt_status rgbt_seg_eval_result(const rgbt_seg_eval* eval, double* per_class_iou,
                                 int32_t* present, double* miou) {
  return guarded([&] {
    require(eval != nullptr, "eval must not be NULL");
    auto result = eval->accumulator.result();
    if (per_class_iou)
      std::memcpy(per_class_iou, result.per_class_iou.data(),
                  result.per_class_iou.size() * sizeof(double));
    if (present)
      for (size_t c = 0; c < result.present.size(); ++c)
        present[c] = result.present[c] ? 1 : 0;
    if (miou) *miou = result.miou;
  });
}

void rgbt_seg_eval_free(rgbt_seg_eval* eval) { delete eval; }

rgbt_status rgbt_dice_loss(const double* probabilities, const double* gt_onehot,
                           size_t cells, size_t classes, double epsilon, double* loss,
                           double* grad) {
  return guarded([&] {
    require(probabilities && gt_onehot && loss,
            "probabilities/gt_onehot/loss must not be NULL");
    std::vector<double> p(probabilities, probabilities + cells * classes);
    std::vector<double> g(gt_onehot, gt_onehot + cells * classes);
    auto result = rgbt::dice_loss(p, g, cells, classes, epsilon, grad != nullptr);
    *loss = result.loss;
    if (grad)
      std::memcpy(grad, result.grad.data(), result.grad.size() * sizeof(double));
  });
}

rgbt_status rgbt_depth_eval_new(rgbt_depth_eval** out) {
  return guarded([&] {
    require(out != nullptr, "out must not be NULL");
    *out = new rgbt_depth_eval{};
  });
}

rgbt_status rgbt_depth_eval_add(rgbt_depth_eval* eval, const rgbt_image_f32* predicted,
                                const rgbt_image_f32* ground_truth,
                                const rgbt_image_f32* mask) {
  return guarded([&] {
    require(eval && predicted && ground_truth,
            "eval/predicted/ground_truth must not be NULL");
    eval->accumulator.add(predicted->image, ground_truth->image,
                          mask ? &mask->image : nullptr);
  });
}

rgbt_status rgbt_depth_eval_result(const rgbt_depth_eval* eval,
                                   rgbt_depth_metrics* out) {
  return guarded([&] {
    require(eval && out, "eval/out must not be NULL");
    auto m = eval->accumulator.result();
    out->abs_rel = m.abs_rel;
    out->sq_rel = m.sq_rel;
    out->rmse = m.rmse;
    out->rmse_log = m.rmse_log;
    out->valid_pixels = m.valid_pixels;
    out->clamped_predictions = m.clamped_predictions;
  });
}

void rgbt_depth_eval_free(rgbt_depth_eval* eval) { delete eval; }

rgbt_status rgbt_scaling_report_json(const char* runs_json, char** json) {
  return guarded([&] {
    require(runs_json && json, "runs_json/json must not be NULL");
    nlohmann::json in;
    try {
      in = nlohmann::json::parse(runs_json);
    } catch (const nlohmann::json::exception& e) {
      rgbt::fail(rgbt::ErrorCode::Parse, std::string("runs JSON: ") + e.what());
    }
    std::vector<rgbt::ScalingRun> runs;
    try {
      const auto& arr = in.is_array() ? in : in.at("runs");
      for (const auto& j : arr)
        runs.push_back({j.at("combo").get<std::string>(),
                        j.at("task").get<std::string>(), j.at("value").get<double>()});
    } catch (const nlohmann::json::exception& e) {
      rgbt::fail(rgbt::ErrorCode::Parse, std::string("runs JSON: ") + e.what());
    }
    auto report = rgbt::scaling_report(runs);
    nlohmann::json doc;
    nlohmann::json tasks = nlohmann::json::array();
    for (const auto& [task, rows] : report) {
      nlohmann::json jrows = nlohmann::json::array();
      for (const auto& row : rows) {
        nlohmann::json jrow = {{"combo", row.combo}, {"value", row.value}};
        if (row.delta) jrow["delta"] = *row.delta;
        jrows.push_back(jrow);
      }
      tasks.push_back({{"task", task}, {"rows", jrows}});
    }
    doc["tasks"] = tasks;
    *json = dup_string(doc.dump());
  });
}

} /* extern "C" */
