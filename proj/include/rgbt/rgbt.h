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
#ifndef RGBT_H
#define RGBT_H

/*
 * C API of the rgbt toolkit: registration, curation, and evaluation of
 * RGB-thermal capture data.
 *
 * Conventions:
 *  - Every fallible function returns rgbt_status; RGBT_OK is 0.
 *  - On failure, rgbt_last_error_message() describes the problem
 *    (thread-local, valid until the next failing call on that thread).
 *  - Objects returned through rgbt_*'** out' parameters are owned by the
 *    caller and released with the matching *_free function.
 *  - Plain buffers (arrays, strings) allocated by the library are released
 *    with rgbt_buffer_free / rgbt_string_free.
 *  - Pixel centers sit at integer coordinates; u right, v down, +z forward.
 *  - Timestamps are int64 nanoseconds.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define RGBT_API __declspec(dllexport)
#elif defined(__GNUC__)
#define RGBT_API __attribute__((visibility("default")))
#else
#define RGBT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rgbt_status {
  RGBT_OK = 0,
  RGBT_ERROR_INVALID_ARGUMENT = 1,
  RGBT_ERROR_IO = 2,
  RGBT_ERROR_PARSE = 3,
  RGBT_ERROR_DOMAIN = 4,
  RGBT_ERROR_UNSUPPORTED = 5,
  RGBT_ERROR_NUMERIC = 6,
  RGBT_ERROR_UNKNOWN = 7
} rgbt_status;

/* Toolkit version string, e.g. "0.1.0". */
RGBT_API const char* rgbt_version(void);
/* Schema versions baked into this build (manifest, embedding container,
 * CLI summary). */
RGBT_API void rgbt_schema_versions(int32_t* manifest, int32_t* embedding,
                                   int32_t* summary);
RGBT_API const char* rgbt_last_error_message(void);

RGBT_API void rgbt_buffer_free(void* buffer);
RGBT_API void rgbt_string_free(char* string);

/* ------------------------------------------------------------------ */
/* Rasters                                                             */
/* ------------------------------------------------------------------ */

typedef struct rgbt_image_u8 rgbt_image_u8;   /* 8-bit, 1 or 3 channels */
typedef struct rgbt_image_u16 rgbt_image_u16; /* 16-bit, 1 channel */
typedef struct rgbt_image_f32 rgbt_image_f32; /* float, 1 channel */

RGBT_API rgbt_status rgbt_image_u8_create(int32_t width, int32_t height,
                                          int32_t channels, const uint8_t* data,
                                          rgbt_image_u8** out);
/* Loads PGM (P5) or PPM (P6), maxval 255. */
RGBT_API rgbt_status rgbt_image_u8_load(const char* path, rgbt_image_u8** out);
RGBT_API rgbt_status rgbt_image_u8_save(const rgbt_image_u8* image, const char* path);
RGBT_API rgbt_status rgbt_image_u8_info(const rgbt_image_u8* image, int32_t* width,
                                        int32_t* height, int32_t* channels);
RGBT_API const uint8_t* rgbt_image_u8_data(const rgbt_image_u8* image);
RGBT_API void rgbt_image_u8_free(rgbt_image_u8* image);

RGBT_API rgbt_status rgbt_image_u16_create(int32_t width, int32_t height,
                                           const uint16_t* data, rgbt_image_u16** out);
/* 16-bit PGM, maxval 65535, big-endian samples. */
RGBT_API rgbt_status rgbt_image_u16_load(const char* path, rgbt_image_u16** out);
RGBT_API rgbt_status rgbt_image_u16_save(const rgbt_image_u16* image, const char* path);
RGBT_API rgbt_status rgbt_image_u16_info(const rgbt_image_u16* image, int32_t* width,
                                         int32_t* height);
RGBT_API const uint16_t* rgbt_image_u16_data(const rgbt_image_u16* image);
RGBT_API void rgbt_image_u16_free(rgbt_image_u16* image);

RGBT_API rgbt_status rgbt_image_f32_create(int32_t width, int32_t height,
                                           const float* data, rgbt_image_f32** out);
/* Loads PFM ("Pf", scale -1.0) or raw RGTD by magic. */
RGBT_API rgbt_status rgbt_image_f32_load(const char* path, rgbt_image_f32** out);
RGBT_API rgbt_status rgbt_image_f32_save_rgtd(const rgbt_image_f32* image,
                                              const char* path);
RGBT_API rgbt_status rgbt_image_f32_save_pfm(const rgbt_image_f32* image,
                                             const char* path);
RGBT_API rgbt_status rgbt_image_f32_info(const rgbt_image_f32* image, int32_t* width,
                                         int32_t* height);
RGBT_API const float* rgbt_image_f32_data(const rgbt_image_f32* image);
RGBT_API void rgbt_image_f32_free(rgbt_image_f32* image);

/* ------------------------------------------------------------------ */
/* Thermal 8-bit pipeline                                              */
/* ------------------------------------------------------------------ */

typedef struct rgbt_thermal_config {
  double lo_percentile; /* 0/100 = plain per-frame min-max */
  double hi_percentile;
  int32_t tiles_x;
  int32_t tiles_y;
  double clip_limit;
  int32_t bilateral_radius;
  double sigma_color;
  double sigma_space;
} rgbt_thermal_config;

RGBT_API void rgbt_thermal_config_default(rgbt_thermal_config* config);

/* round(255*(x-min)/(max-min)); zero-span frames come back all zero with
 * *degenerate set. */
RGBT_API rgbt_status rgbt_minmax_normalize(const rgbt_image_u16* frame,
                                           rgbt_image_u8** out, int32_t* degenerate);
RGBT_API rgbt_status rgbt_clahe(const rgbt_image_u8* frame, int32_t tiles_x,
                                int32_t tiles_y, double clip_limit,
                                rgbt_image_u8** out);
RGBT_API rgbt_status rgbt_bilateral_filter(const rgbt_image_u8* frame, int32_t radius,
                                           double sigma_color, double sigma_space,
                                           rgbt_image_u8** out);
/* min-max normalization, CLAHE, bilateral filter, in that order. */
RGBT_API rgbt_status rgbt_thermal_to_8bit(const rgbt_image_u16* frame,
                                          const rgbt_thermal_config* config,
                                          rgbt_image_u8** out, int32_t* degenerate);

typedef struct rgbt_ffc_event {
  int64_t start_ns;
  int64_t end_ns;
} rgbt_ffc_event;

/* Drops timestamps within [start-guard, end+guard] of any event. *kept is
 * released with rgbt_buffer_free. */
RGBT_API rgbt_status rgbt_filter_ffc(const int64_t* timestamps, size_t count,
                                     const rgbt_ffc_event* events, size_t event_count,
                                     int64_t guard_ns, int64_t** kept,
                                     size_t* kept_count);

/* ------------------------------------------------------------------ */
/* Geometry and calibration                                            */
/* ------------------------------------------------------------------ */

typedef struct rgbt_camera {
  double fx, fy, cx, cy;
  int32_t width, height;
  int32_t num_distortion; /* 0 = pinhole, 4 = equidistant fisheye */
  double k[4];
} rgbt_camera;

typedef struct rgbt_calibration rgbt_calibration;

RGBT_API rgbt_status rgbt_calibration_load(const char* path, rgbt_calibration** out);
RGBT_API rgbt_status rgbt_calibration_get_camera(const rgbt_calibration* calibration,
                                                 const char* name, rgbt_camera* out);
RGBT_API rgbt_status rgbt_calibration_get_transform(const rgbt_calibration* calibration,
                                                    const char* name,
                                                    double rotation[9],
                                                    double translation[3]);
RGBT_API void rgbt_calibration_free(rgbt_calibration* calibration);

RGBT_API rgbt_status rgbt_backproject(const rgbt_camera* camera, double u, double v,
                                      double depth, double point[3]);
RGBT_API rgbt_status rgbt_project(const rgbt_camera* camera, const double point[3],
                                  double* u, double* v, double* depth);
RGBT_API rgbt_status rgbt_transform_point(const double rotation[9],
                                          const double translation[3],
                                          const double point[3], double out[3]);

typedef struct rgbt_rectification_map rgbt_rectification_map;

/* Destination->source map; a fisheye source uses the forward equidistant
 * theta polynomial, a pinhole source plain reprojection. */
RGBT_API rgbt_status rgbt_rectification_map_build(const rgbt_camera* source,
                                                  const rgbt_camera* destination,
                                                  rgbt_rectification_map** out);
RGBT_API void rgbt_rectification_map_free(rgbt_rectification_map* map);

/* Bilinear remap; the mask is 255 where the map entry was valid. */
RGBT_API rgbt_status rgbt_remap_u8(const rgbt_image_u8* image,
                                   const rgbt_rectification_map* map,
                                   rgbt_image_u8** out, rgbt_image_u8** mask);
RGBT_API rgbt_status rgbt_remap_u16(const rgbt_image_u16* image,
                                    const rgbt_rectification_map* map,
                                    rgbt_image_u16** out, rgbt_image_u8** mask);

/* ------------------------------------------------------------------ */
/* RGB-thermal registration                                            */
/* ------------------------------------------------------------------ */

/* Warps RGB into the thermal grid through depth: backproject, rigid
 * transform, project, then z-buffered bilinear splatting. mask holds the
 * accepted weight sum and is exactly 0 where nothing contributed; such
 * pixels stay black. */
RGBT_API rgbt_status rgbt_register_pair(const rgbt_camera* rgb_camera,
                                        const double rotation_rgb_to_thermal[9],
                                        const double translation_rgb_to_thermal[3],
                                        const rgbt_camera* thermal_camera,
                                        const rgbt_image_u8* rgb,
                                        const rgbt_image_f32* depth,
                                        const rgbt_image_u8* thermal8,
                                        double depth_tolerance,
                                        rgbt_image_u8** warped_rgb,
                                        rgbt_image_f32** mask);

/* out = round((1-alpha)*a + alpha*b); grayscale broadcasts against color. */
RGBT_API rgbt_status rgbt_alpha_blend(const rgbt_image_u8* a, const rgbt_image_u8* b,
                                      double alpha, rgbt_image_u8** out);

/* ------------------------------------------------------------------ */
/* Dataset manifest                                                    */
/* ------------------------------------------------------------------ */

typedef struct rgbt_manifest rgbt_manifest;

typedef enum rgbt_stream { RGBT_STREAM_RGB = 0, RGBT_STREAM_THERMAL = 1 } rgbt_stream;

typedef struct rgbt_sequence_info {
  const char* name;        /* borrowed from the manifest */
  const char* environment; /* indoor|offroad|aerial|urban-drive|urban-park */
  const char* position_kind;
  int32_t hardware_synced;
  size_t rgb_frames;
  size_t thermal_frames;
  size_t ffc_events;
  size_t positions;
} rgbt_sequence_info;

/* Loading performs full schema validation. */
RGBT_API rgbt_status rgbt_manifest_load(const char* path, rgbt_manifest** out);
RGBT_API const char* rgbt_manifest_dataset(const rgbt_manifest* manifest);
RGBT_API size_t rgbt_manifest_sequence_count(const rgbt_manifest* manifest);
RGBT_API rgbt_status rgbt_manifest_sequence_info(const rgbt_manifest* manifest,
                                                 size_t index,
                                                 rgbt_sequence_info* out);
RGBT_API rgbt_status rgbt_manifest_timestamps(const rgbt_manifest* manifest,
                                              size_t sequence, rgbt_stream stream,
                                              int64_t** timestamps, size_t* count);
RGBT_API rgbt_status rgbt_manifest_frame_path(const rgbt_manifest* manifest,
                                              size_t sequence, rgbt_stream stream,
                                              size_t frame, const char** path);
RGBT_API rgbt_status rgbt_manifest_ffc_events(const rgbt_manifest* manifest,
                                              size_t sequence, rgbt_ffc_event** events,
                                              size_t* count);
RGBT_API void rgbt_manifest_free(rgbt_manifest* manifest);

typedef struct rgbt_frame_pair {
  size_t rgb_index;
  size_t thermal_index;
  int64_t abs_dt_ns;
} rgbt_frame_pair;

/* Greedy nearest-neighbor pairing of two sorted timestamp streams. */
RGBT_API rgbt_status rgbt_pair_by_timestamp(const int64_t* rgb_ts, size_t rgb_count,
                                            const int64_t* thermal_ts,
                                            size_t thermal_count, int64_t tolerance_ns,
                                            rgbt_frame_pair** pairs, size_t* pair_count);

/* Nearest frame to each 1-second grid point anchored at the first stamp. */
RGBT_API rgbt_status rgbt_subsample_1hz(const int64_t* timestamps, size_t count,
                                        size_t** indices, size_t* index_count);

typedef struct rgbt_stats_config {
  int64_t pair_tol_synced_ns;
  int64_t pair_tol_unsynced_ns;
  int64_t ffc_guard_ns;
} rgbt_stats_config;

RGBT_API void rgbt_stats_config_default(rgbt_stats_config* config);

/* Per-environment 1 Hz pair counts as a JSON document. */
RGBT_API rgbt_status rgbt_dataset_stats_json(const rgbt_manifest* manifest,
                                             const rgbt_stats_config* config,
                                             char** json);

/* Interpolated position at t; *found is 0 when the track is absent or t is
 * more than 500 ms outside it. */
RGBT_API rgbt_status rgbt_position_at(const rgbt_manifest* manifest, size_t sequence,
                                      int64_t t_ns, double position[3], int32_t* found);

/* ------------------------------------------------------------------ */
/* Embeddings and cross-modal training math                            */
/* ------------------------------------------------------------------ */

typedef struct rgbt_embedding_set rgbt_embedding_set;

typedef enum rgbt_modality { RGBT_MODALITY_RGB = 0, RGBT_MODALITY_THERMAL = 1 } rgbt_modality;
typedef enum rgbt_metric { RGBT_METRIC_EUCLIDEAN = 0, RGBT_METRIC_COSINE = 1 } rgbt_metric;

RGBT_API rgbt_status rgbt_embedding_set_create(size_t count, size_t dim,
                                               const double* data,
                                               const char* const* ids,
                                               const double* positions_xyz,
                                               rgbt_modality modality,
                                               rgbt_embedding_set** out);
RGBT_API rgbt_status rgbt_embedding_set_load(const char* path, rgbt_embedding_set** out);
RGBT_API rgbt_status rgbt_embedding_set_save(const rgbt_embedding_set* set,
                                             const char* path);
RGBT_API rgbt_status rgbt_embedding_set_info(const rgbt_embedding_set* set,
                                             size_t* count, size_t* dim,
                                             int32_t* modality, int32_t* has_positions);
RGBT_API const double* rgbt_embedding_set_data(const rgbt_embedding_set* set);
RGBT_API const char* rgbt_embedding_set_id(const rgbt_embedding_set* set, size_t row);
RGBT_API void rgbt_embedding_set_free(rgbt_embedding_set* set);

/* Scales nonzero rows to unit norm in place; zero rows are counted. */
RGBT_API rgbt_status rgbt_l2_normalize(double* data, size_t count, size_t dim,
                                       size_t* zero_rows);

/* Symmetric in-batch InfoNCE; rows are assumed L2-normalized. The teacher is
 * frozen: only the student gradient is available. grad_student may be NULL
 * (batch*dim doubles otherwise). */
RGBT_API rgbt_status rgbt_infonce_loss(const double* student, const double* teacher,
                                       size_t batch, size_t dim, double tau,
                                       double* loss, double* grad_student);

/* loss = max(0, d(a,p) - d(a,n) + margin); gradient buffers (dim doubles
 * each) may be NULL. */
RGBT_API rgbt_status rgbt_triplet_margin_loss(const double* anchor,
                                              const double* positive,
                                              const double* negative, size_t dim,
                                              double margin, rgbt_metric metric,
                                              double* loss, double* grad_anchor,
                                              double* grad_positive,
                                              double* grad_negative);

typedef struct rgbt_mining_config {
  double radius;
  size_t k_hard;
  uint64_t seed;
  int32_t frame_radius; /* force frame-index radius even with positions */
  rgbt_metric hard_metric;
} rgbt_mining_config;

RGBT_API void rgbt_mining_config_default(rgbt_mining_config* config);

typedef struct rgbt_triplet {
  size_t anchor_index;   /* thermal row */
  size_t positive_index; /* rgb row */
  size_t negative_index; /* rgb row */
} rgbt_triplet;

RGBT_API rgbt_status rgbt_mine_triplets(const rgbt_embedding_set* rgb,
                                        const rgbt_embedding_set* thermal,
                                        const rgbt_mining_config* config,
                                        rgbt_triplet** triplets, size_t* triplet_count,
                                        size_t* skipped_anchors,
                                        int32_t* used_frame_radius);

typedef struct rgbt_distill_config {
  size_t latent_dim;
  size_t feature_dim;
  size_t train_pairs;
  size_t val_pairs;
  double noise;
  double learning_rate;
  size_t steps;
  size_t batch_size;
  double tau;
  uint64_t seed;
  size_t eval_every;
} rgbt_distill_config;

RGBT_API void rgbt_distill_config_default(rgbt_distill_config* config);

typedef struct rgbt_distill_history_entry {
  uint64_t step;
  double loss;
  double recall_at_1; /* -1 when not evaluated at this step */
} rgbt_distill_history_entry;

typedef struct rgbt_distill_result rgbt_distill_result;

/* Linear-encoder distillation demo; bit-reproducible for a fixed seed. */
RGBT_API rgbt_status rgbt_toy_distill(const rgbt_distill_config* config,
                                      rgbt_distill_result** out);
RGBT_API rgbt_status rgbt_distill_result_history(const rgbt_distill_result* result,
                                                 const rgbt_distill_history_entry** entries,
                                                 size_t* count);
RGBT_API rgbt_status rgbt_distill_result_recall(const rgbt_distill_result* result,
                                                double* initial, double* final_recall);
RGBT_API void rgbt_distill_result_free(rgbt_distill_result* result);

/* ------------------------------------------------------------------ */
/* Evaluation protocols                                                */
/* ------------------------------------------------------------------ */

/* Cross-modal place recognition over aligned per-sequence query/database
 * embedding files. The paired database row (same id) leaves the candidate
 * set; positives use a closed ball of the given radius (geographic meters,
 * or index units with frame_radius). Emits a JSON report. */
RGBT_API rgbt_status rgbt_eval_vpr_json(const char* const* sequence_names,
                                        const char* const* query_paths,
                                        const char* const* db_paths,
                                        size_t sequence_count, double radius,
                                        int32_t frame_radius, const size_t* ks,
                                        size_t k_count, rgbt_metric metric,
                                        char** json);

typedef struct rgbt_seg_eval rgbt_seg_eval;

RGBT_API rgbt_status rgbt_seg_eval_new(int32_t classes, int32_t ignore_label,
                                       rgbt_seg_eval** out);
RGBT_API rgbt_status rgbt_seg_eval_add(rgbt_seg_eval* eval,
                                       const rgbt_image_u8* predicted_labels,
                                       const rgbt_image_u8* ground_truth_labels);
/* per_class_iou holds NaN for classes absent from both streams. */
RGBT_API rgbt_status rgbt_seg_eval_result(const rgbt_seg_eval* eval,
                                          double* per_class_iou, int32_t* present,
                                          double* miou);
RGBT_API void rgbt_seg_eval_free(rgbt_seg_eval* eval);

/* Dice loss over soft per-cell class probabilities; grad may be NULL. */
RGBT_API rgbt_status rgbt_dice_loss(const double* probabilities,
                                    const double* gt_onehot, size_t cells,
                                    size_t classes, double epsilon, double* loss,
                                    double* grad);

typedef struct rgbt_depth_eval rgbt_depth_eval;

typedef struct rgbt_depth_metrics {
  double abs_rel;
  double sq_rel;
  double rmse;
  double rmse_log;
  size_t valid_pixels;
  size_t clamped_predictions;
} rgbt_depth_metrics;

RGBT_API rgbt_status rgbt_depth_eval_new(rgbt_depth_eval** out);
/* mask may be NULL; pixels with non-finite or non-positive ground truth are
 * always skipped. */
RGBT_API rgbt_status rgbt_depth_eval_add(rgbt_depth_eval* eval,
                                         const rgbt_image_f32* predicted,
                                         const rgbt_image_f32* ground_truth,
                                         const rgbt_image_f32* mask);
RGBT_API rgbt_status rgbt_depth_eval_result(const rgbt_depth_eval* eval,
                                            rgbt_depth_metrics* out);
RGBT_API void rgbt_depth_eval_free(rgbt_depth_eval* eval);

/* Orders scaling-study runs (JSON array of {combo, task, value}) by combo
 * size and dataset order B,V,F,S,T, with per-task deltas. */
RGBT_API rgbt_status rgbt_scaling_report_json(const char* runs_json, char** json);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* RGBT_H */
