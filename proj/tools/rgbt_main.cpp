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

/*
 * rgbt: one binary over the whole pipeline. Every subcommand prints a single
 * JSON summary line to stdout and writes artifacts only under --out-dir;
 * identical inputs and seeds produce byte-identical artifact trees.
 */

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cli_util.hpp"
#include "rgbt/rgbt.h"

namespace {

using cli::check;
using cli::RuntimeError;
using cli::Summary;
using cli::ValidationError;
using nlohmann::json;

template <typename T>
using Handle = std::unique_ptr<T, void (*)(T*)>;

Handle<rgbt_image_u8> load_u8(const std::string& path) {
  rgbt_image_u8* img = nullptr;
  check(rgbt_image_u8_load(path.c_str(), &img), "loading " + path);
  return {img, rgbt_image_u8_free};
}

Handle<rgbt_image_u16> load_u16(const std::string& path) {
  rgbt_image_u16* img = nullptr;
  check(rgbt_image_u16_load(path.c_str(), &img), "loading " + path);
  return {img, rgbt_image_u16_free};
}

Handle<rgbt_image_f32> load_f32(const std::string& path) {
  rgbt_image_f32* img = nullptr;
  check(rgbt_image_f32_load(path.c_str(), &img), "loading " + path);
  return {img, rgbt_image_f32_free};
}

Handle<rgbt_manifest> load_manifest(const std::string& path) {
  cli::require_input(path);
  rgbt_manifest* m = nullptr;
  check(rgbt_manifest_load(path.c_str(), &m), "loading manifest " + path);
  return {m, rgbt_manifest_free};
}

Handle<rgbt_embedding_set> load_embeddings(const std::string& path) {
  cli::require_input(path);
  rgbt_embedding_set* set = nullptr;
  check(rgbt_embedding_set_load(path.c_str(), &set), "loading embeddings " + path);
  return {set, rgbt_embedding_set_free};
}

std::string stem_of(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

// Aligned-column text table.
std::string format_table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> widths;
  for (const auto& row : rows) {
    if (widths.size() < row.size()) widths.resize(row.size(), 0);
    for (std::size_t c = 0; c < row.size(); ++c)
      widths[c] = std::max(widths[c], row[c].size());
  }
  std::string out;
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      out += row[c];
      if (c + 1 < row.size())
        out += std::string(widths[c] - row[c].size() + 2, ' ');
    }
    out += "\n";
  }
  return out;
}

/* ----- validate -------------------------------------------------------- */

struct ValidateOpts {
  std::string manifest;
};

void run_validate(const ValidateOpts& opt) {
  Summary summary("validate");
  auto manifest = load_manifest(opt.manifest);
  json seqs = json::array();
  std::size_t rgb_total = 0, thermal_total = 0;
  const std::size_t n = rgbt_manifest_sequence_count(manifest.get());
  for (std::size_t i = 0; i < n; ++i) {
    rgbt_sequence_info info{};
    check(rgbt_manifest_sequence_info(manifest.get(), i, &info), "sequence info");
    seqs.push_back({{"name", info.name},
                    {"environment", info.environment},
                    {"rgb_frames", info.rgb_frames},
                    {"thermal_frames", info.thermal_frames},
                    {"ffc_events", info.ffc_events},
                    {"positions", info.positions},
                    {"position_kind", info.position_kind},
                    {"hardware_synced", info.hardware_synced != 0}});
    rgb_total += info.rgb_frames;
    thermal_total += info.thermal_frames;
  }
  summary.extra()["dataset"] = rgbt_manifest_dataset(manifest.get());
  summary.extra()["sequences"] = seqs;
  summary.extra()["rgb_frames"] = rgb_total;
  summary.extra()["thermal_frames"] = thermal_total;
  summary.set_config({{"manifest", opt.manifest}});
  summary.print();
}

/* ----- thermal8 -------------------------------------------------------- */

struct Thermal8Opts {
  std::string input;
  std::string out_dir;
  rgbt_thermal_config config{};
  int jobs = 0;
};

void run_thermal8(const Thermal8Opts& opt) {
  Summary summary("thermal8");
  auto files = cli::collect_inputs(opt.input, {".pgm"});
  cli::ensure_out_dir(opt.out_dir);
  std::vector<std::string> outputs(files.size());
  std::vector<int> degenerate(files.size(), 0);
  cli::parallel_for(files.size(), opt.jobs, [&](std::size_t i) {
    auto frame = load_u16(files[i]);
    rgbt_image_u8* out8 = nullptr;
    int32_t flag = 0;
    check(rgbt_thermal_to_8bit(frame.get(), &opt.config, &out8, &flag),
          "processing " + files[i]);
    Handle<rgbt_image_u8> out(out8, rgbt_image_u8_free);
    const std::string out_path = join_path(opt.out_dir, stem_of(files[i]) + ".pgm");
    check(rgbt_image_u8_save(out.get(), out_path.c_str()), "writing " + out_path);
    outputs[i] = out_path;
    degenerate[i] = flag;
  });
  std::size_t degenerate_count = 0;
  for (std::size_t i = 0; i < files.size(); ++i) {
    summary.add_output(outputs[i]);
    if (degenerate[i]) {
      ++degenerate_count;
      summary.add_warning("degenerate zero-span frame: " + files[i]);
    }
  }
  summary.extra()["frames"] = files.size();
  summary.extra()["degenerate"] = degenerate_count;
  summary.set_config({{"input", opt.input},
                      {"out_dir", opt.out_dir},
                      {"lo_percentile", opt.config.lo_percentile},
                      {"hi_percentile", opt.config.hi_percentile},
                      {"tiles_x", opt.config.tiles_x},
                      {"tiles_y", opt.config.tiles_y},
                      {"clip_limit", opt.config.clip_limit},
                      {"bilateral_radius", opt.config.bilateral_radius},
                      {"sigma_color", opt.config.sigma_color},
                      {"sigma_space", opt.config.sigma_space},
                      {"jobs", opt.jobs}});
  summary.print();
}

/* ----- rectify --------------------------------------------------------- */

struct RectifyOpts {
  std::string calib;
  std::string src_camera = "thermal";
  std::string dst_camera = "thermal_rect";
  std::string input;
  std::string out_dir;
  int jobs = 0;
};

void run_rectify(const RectifyOpts& opt) {
  Summary summary("rectify");
  cli::require_input(opt.calib);
  rgbt_calibration* calib_raw = nullptr;
  check(rgbt_calibration_load(opt.calib.c_str(), &calib_raw), "loading " + opt.calib);
  Handle<rgbt_calibration> calib(calib_raw, rgbt_calibration_free);
  rgbt_camera src{}, dst{};
  check(rgbt_calibration_get_camera(calib.get(), opt.src_camera.c_str(), &src),
        "camera " + opt.src_camera);
  check(rgbt_calibration_get_camera(calib.get(), opt.dst_camera.c_str(), &dst),
        "camera " + opt.dst_camera);
  rgbt_rectification_map* map_raw = nullptr;
  check(rgbt_rectification_map_build(&src, &dst, &map_raw), "building map");
  Handle<rgbt_rectification_map> map(map_raw, rgbt_rectification_map_free);

  auto files = cli::collect_inputs(opt.input, {".pgm"});
  cli::ensure_out_dir(opt.out_dir);
  std::vector<std::array<std::string, 2>> outputs(files.size());
  cli::parallel_for(files.size(), opt.jobs, [&](std::size_t i) {
    const std::string out_path = join_path(opt.out_dir, stem_of(files[i]) + ".pgm");
    const std::string mask_path =
        join_path(opt.out_dir, stem_of(files[i]) + "_mask.pgm");
    rgbt_image_u8* mask_raw = nullptr;
    // 16-bit frames keep their depth through rectification.
    rgbt_image_u16* probe = nullptr;
    if (rgbt_image_u16_load(files[i].c_str(), &probe) == RGBT_OK) {
      Handle<rgbt_image_u16> frame(probe, rgbt_image_u16_free);
      rgbt_image_u16* out_raw = nullptr;
      check(rgbt_remap_u16(frame.get(), map.get(), &out_raw, &mask_raw),
            "remapping " + files[i]);
      Handle<rgbt_image_u16> out(out_raw, rgbt_image_u16_free);
      Handle<rgbt_image_u8> mask(mask_raw, rgbt_image_u8_free);
      check(rgbt_image_u16_save(out.get(), out_path.c_str()), "writing " + out_path);
      check(rgbt_image_u8_save(mask.get(), mask_path.c_str()), "writing " + mask_path);
    } else {
      auto frame = load_u8(files[i]);
      rgbt_image_u8* out_raw = nullptr;
      check(rgbt_remap_u8(frame.get(), map.get(), &out_raw, &mask_raw),
            "remapping " + files[i]);
      Handle<rgbt_image_u8> out(out_raw, rgbt_image_u8_free);
      Handle<rgbt_image_u8> mask(mask_raw, rgbt_image_u8_free);
      check(rgbt_image_u8_save(out.get(), out_path.c_str()), "writing " + out_path);
      check(rgbt_image_u8_save(mask.get(), mask_path.c_str()), "writing " + mask_path);
    }
    outputs[i] = {out_path, mask_path};
  });
  for (const auto& pair : outputs) {
    summary.add_output(pair[0]);
    summary.add_output(pair[1]);
  }
  summary.extra()["frames"] = files.size();
  summary.set_config({{"calib", opt.calib},
                      {"src_camera", opt.src_camera},
                      {"dst_camera", opt.dst_camera},
                      {"input", opt.input},
                      {"out_dir", opt.out_dir},
                      {"jobs", opt.jobs}});
  summary.print();
}

/* ----- register -------------------------------------------------------- */

struct RegisterOpts {
  std::string calib;
  std::string rgb;
  std::string depth;
  std::string thermal;
  std::string out_dir;
  std::string rgb_camera = "rgb";
  std::string thermal_camera = "thermal";
  std::string transform = "rgb_to_thermal";
  std::string alphas = "0,0.5,1";
  double depth_tol = 0.01;
};

void run_register(const RegisterOpts& opt) {
  Summary summary("register");
  for (const auto& p : {opt.calib, opt.rgb, opt.depth, opt.thermal})
    cli::require_input(p);
  std::vector<double> alphas;
  for (const auto& a : cli::split_csv(opt.alphas))
    alphas.push_back(cli::parse_double(a, "--alpha entry"));

  rgbt_calibration* calib_raw = nullptr;
  check(rgbt_calibration_load(opt.calib.c_str(), &calib_raw), "loading " + opt.calib);
  Handle<rgbt_calibration> calib(calib_raw, rgbt_calibration_free);
  rgbt_camera cam_rgb{}, cam_thermal{};
  check(rgbt_calibration_get_camera(calib.get(), opt.rgb_camera.c_str(), &cam_rgb),
        "camera " + opt.rgb_camera);
  check(rgbt_calibration_get_camera(calib.get(), opt.thermal_camera.c_str(),
                                    &cam_thermal),
        "camera " + opt.thermal_camera);
  double rotation[9], translation[3];
  check(rgbt_calibration_get_transform(calib.get(), opt.transform.c_str(), rotation,
                                       translation),
        "transform " + opt.transform);

  auto rgb = load_u8(opt.rgb);
  auto depth = load_f32(opt.depth);
  auto thermal = load_u8(opt.thermal);

  rgbt_image_u8* warped_raw = nullptr;
  rgbt_image_f32* mask_raw = nullptr;
  check(rgbt_register_pair(&cam_rgb, rotation, translation, &cam_thermal, rgb.get(),
                           depth.get(), thermal.get(), opt.depth_tol, &warped_raw,
                           &mask_raw),
        "registering");
  Handle<rgbt_image_u8> warped(warped_raw, rgbt_image_u8_free);
  Handle<rgbt_image_f32> mask(mask_raw, rgbt_image_f32_free);

  cli::ensure_out_dir(opt.out_dir);
  int32_t channels = 0, mw = 0, mh = 0;
  check(rgbt_image_u8_info(warped.get(), nullptr, nullptr, &channels), "warped info");
  const std::string warped_path =
      join_path(opt.out_dir, channels == 3 ? "warped_rgb.ppm" : "warped_rgb.pgm");
  check(rgbt_image_u8_save(warped.get(), warped_path.c_str()), "writing " + warped_path);
  summary.add_output(warped_path);
  const std::string mask_path = join_path(opt.out_dir, "mask.rgtd");
  check(rgbt_image_f32_save_rgtd(mask.get(), mask_path.c_str()),
        "writing " + mask_path);
  summary.add_output(mask_path);

  for (double alpha : alphas) {
    rgbt_image_u8* blend_raw = nullptr;
    check(rgbt_alpha_blend(thermal.get(), warped.get(), alpha, &blend_raw),
          "blending");
    Handle<rgbt_image_u8> blend(blend_raw, rgbt_image_u8_free);
    char name[48];
    std::snprintf(name, sizeof(name), "overlay_a%.2f.%s", alpha,
                  channels == 3 ? "ppm" : "pgm");
    const std::string blend_path = join_path(opt.out_dir, name);
    check(rgbt_image_u8_save(blend.get(), blend_path.c_str()),
          "writing " + blend_path);
    summary.add_output(blend_path);
  }

  check(rgbt_image_f32_info(mask.get(), &mw, &mh), "mask info");
  const float* mask_data = rgbt_image_f32_data(mask.get());
  const std::size_t pixels = static_cast<std::size_t>(mw) * mh;
  std::size_t covered = 0;
  for (std::size_t i = 0; i < pixels; ++i)
    if (mask_data[i] > 0.0f) ++covered;
  summary.extra()["coverage"] =
      pixels ? static_cast<double>(covered) / static_cast<double>(pixels) : 0.0;
  summary.set_config({{"calib", opt.calib},
                      {"rgb", opt.rgb},
                      {"depth", opt.depth},
                      {"thermal", opt.thermal},
                      {"out_dir", opt.out_dir},
                      {"rgb_camera", opt.rgb_camera},
                      {"thermal_camera", opt.thermal_camera},
                      {"transform", opt.transform},
                      {"alpha", opt.alphas},
                      {"depth_tol", opt.depth_tol}});
  summary.print();
}

/* ----- pair / subsample ------------------------------------------------- */

struct PairOpts {
  std::string manifest;
  std::string sequence;  // empty = all
  std::string out_dir;
  double tol_ms = -1.0;  // negative = per-sequence default from sync flag
};

void run_pair(const PairOpts& opt) {
  Summary summary("pair");
  auto manifest = load_manifest(opt.manifest);
  cli::ensure_out_dir(opt.out_dir);
  json counts = json::object();
  const std::size_t n = rgbt_manifest_sequence_count(manifest.get());
  bool matched = false;
  for (std::size_t i = 0; i < n; ++i) {
    rgbt_sequence_info info{};
    check(rgbt_manifest_sequence_info(manifest.get(), i, &info), "sequence info");
    if (!opt.sequence.empty() && opt.sequence != info.name) continue;
    matched = true;

    int64_t* rgb_ts = nullptr;
    int64_t* thr_ts = nullptr;
    size_t rgb_n = 0, thr_n = 0;
    check(rgbt_manifest_timestamps(manifest.get(), i, RGBT_STREAM_RGB, &rgb_ts, &rgb_n),
          "rgb timestamps");
    std::unique_ptr<int64_t, void (*)(void*)> rgb_guard(rgb_ts, rgbt_buffer_free);
    check(rgbt_manifest_timestamps(manifest.get(), i, RGBT_STREAM_THERMAL, &thr_ts,
                                   &thr_n),
          "thermal timestamps");
    std::unique_ptr<int64_t, void (*)(void*)> thr_guard(thr_ts, rgbt_buffer_free);

    const int64_t tol_ns =
        opt.tol_ms >= 0
            ? static_cast<int64_t>(opt.tol_ms * 1e6)
            : (info.hardware_synced ? 10'000'000LL : 50'000'000LL);
    rgbt_frame_pair* pairs = nullptr;
    size_t pair_n = 0;
    check(rgbt_pair_by_timestamp(rgb_ts, rgb_n, thr_ts, thr_n, tol_ns, &pairs, &pair_n),
          std::string("pairing ") + info.name);
    std::unique_ptr<rgbt_frame_pair, void (*)(void*)> pair_guard(pairs,
                                                                 rgbt_buffer_free);

    json rows = json::array();
    for (size_t p = 0; p < pair_n; ++p) {
      const char *rgb_path = nullptr, *thr_path = nullptr;
      check(rgbt_manifest_frame_path(manifest.get(), i, RGBT_STREAM_RGB,
                                     pairs[p].rgb_index, &rgb_path),
            "rgb path");
      check(rgbt_manifest_frame_path(manifest.get(), i, RGBT_STREAM_THERMAL,
                                     pairs[p].thermal_index, &thr_path),
            "thermal path");
      rows.push_back({{"rgb_index", pairs[p].rgb_index},
                      {"thermal_index", pairs[p].thermal_index},
                      {"rgb_path", rgb_path},
                      {"thermal_path", thr_path},
                      {"abs_dt_ns", pairs[p].abs_dt_ns}});
    }
    json doc = {{"sequence", info.name}, {"tol_ns", tol_ns}, {"pairs", rows}};
    const std::string out_path =
        join_path(opt.out_dir, std::string(info.name) + "_pairs.json");
    cli::write_json_file(out_path, doc);
    summary.add_output(out_path);
    counts[info.name] = pair_n;
  }
  if (!opt.sequence.empty() && !matched)
    throw ValidationError("no such sequence: " + opt.sequence);
  summary.extra()["pairs"] = counts;
  summary.set_config({{"manifest", opt.manifest},
                      {"sequence", opt.sequence},
                      {"out_dir", opt.out_dir},
                      {"tol_ms", opt.tol_ms}});
  summary.print();
}

struct SubsampleOpts {
  std::string manifest;
  std::string stream = "thermal";
  std::string sequence;
  std::string out_dir;
};

void run_subsample(const SubsampleOpts& opt) {
  Summary summary("subsample");
  if (opt.stream != "thermal" && opt.stream != "rgb")
    throw ValidationError("stream must be 'rgb' or 'thermal'");
  const rgbt_stream stream =
      opt.stream == "rgb" ? RGBT_STREAM_RGB : RGBT_STREAM_THERMAL;
  auto manifest = load_manifest(opt.manifest);
  cli::ensure_out_dir(opt.out_dir);
  json counts = json::object();
  const std::size_t n = rgbt_manifest_sequence_count(manifest.get());
  bool matched = false;
  for (std::size_t i = 0; i < n; ++i) {
    rgbt_sequence_info info{};
    check(rgbt_manifest_sequence_info(manifest.get(), i, &info), "sequence info");
    if (!opt.sequence.empty() && opt.sequence != info.name) continue;
    matched = true;
    int64_t* ts = nullptr;
    size_t ts_n = 0;
    check(rgbt_manifest_timestamps(manifest.get(), i, stream, &ts, &ts_n),
          "timestamps");
    std::unique_ptr<int64_t, void (*)(void*)> ts_guard(ts, rgbt_buffer_free);
    size_t* indices = nullptr;
    size_t kept_n = 0;
    check(rgbt_subsample_1hz(ts, ts_n, &indices, &kept_n), "subsampling");
    std::unique_ptr<size_t, void (*)(void*)> idx_guard(indices, rgbt_buffer_free);
    json rows = json::array();
    for (size_t k = 0; k < kept_n; ++k) {
      const char* path = nullptr;
      check(rgbt_manifest_frame_path(manifest.get(), i, stream, indices[k], &path),
            "frame path");
      rows.push_back({{"index", indices[k]}, {"path", path}, {"t_ns", ts[indices[k]]}});
    }
    json doc = {{"sequence", info.name}, {"stream", opt.stream}, {"frames", rows}};
    const std::string out_path = join_path(
        opt.out_dir, std::string(info.name) + "_" + opt.stream + "_1hz.json");
    cli::write_json_file(out_path, doc);
    summary.add_output(out_path);
    counts[info.name] = kept_n;
  }
  if (!opt.sequence.empty() && !matched)
    throw ValidationError("no such sequence: " + opt.sequence);
  summary.extra()["kept"] = counts;
  summary.set_config({{"manifest", opt.manifest},
                      {"stream", opt.stream},
                      {"sequence", opt.sequence},
                      {"out_dir", opt.out_dir}});
  summary.print();
}

/* ----- stats ------------------------------------------------------------ */

struct StatsOpts {
  std::string manifest;
  std::string out_dir;
  bool by_env = false;
  double tol_synced_ms = 10.0;
  double tol_unsynced_ms = 50.0;
  double guard_ms = 100.0;
};

void run_stats(const StatsOpts& opt) {
  Summary summary("stats");
  auto manifest = load_manifest(opt.manifest);
  rgbt_stats_config cfg{};
  cfg.pair_tol_synced_ns = static_cast<int64_t>(opt.tol_synced_ms * 1e6);
  cfg.pair_tol_unsynced_ns = static_cast<int64_t>(opt.tol_unsynced_ms * 1e6);
  cfg.ffc_guard_ns = static_cast<int64_t>(opt.guard_ms * 1e6);
  char* raw = nullptr;
  check(rgbt_dataset_stats_json(manifest.get(), &cfg, &raw), "computing stats");
  std::unique_ptr<char, void (*)(char*)> guard(raw, rgbt_string_free);
  json stats = json::parse(raw);

  cli::ensure_out_dir(opt.out_dir);
  const std::string json_path = join_path(opt.out_dir, "stats.json");
  cli::write_json_file(json_path, stats);
  summary.add_output(json_path);

  std::vector<std::vector<std::string>> rows;
  if (opt.by_env) {
    rows.push_back({"environment", "pairs@1hz", "fraction"});
    for (const auto& [env, entry] : stats.at("per_environment").items())
      rows.push_back({env, std::to_string(entry.at("pairs_1hz").get<std::size_t>()),
                      cli::format_double(entry.at("fraction").get<double>())});
  } else {
    rows.push_back({"sequence", "environment", "pairs@1hz"});
    for (const auto& seq : stats.at("per_sequence"))
      rows.push_back({seq.at("name").get<std::string>(),
                      seq.at("environment").get<std::string>(),
                      std::to_string(seq.at("pairs_1hz").get<std::size_t>())});
  }
  rows.push_back({"total", "", std::to_string(stats.at("total").get<std::size_t>())});
  const std::string table_path = join_path(opt.out_dir, "stats.txt");
  cli::write_text_file(table_path, format_table(rows));
  summary.add_output(table_path);

  summary.extra()["total"] = stats.at("total");
  summary.extra()["per_environment"] = stats.at("per_environment");
  summary.set_config({{"manifest", opt.manifest},
                      {"out_dir", opt.out_dir},
                      {"by_env", opt.by_env},
                      {"tol_synced_ms", opt.tol_synced_ms},
                      {"tol_unsynced_ms", opt.tol_unsynced_ms},
                      {"guard_ms", opt.guard_ms}});
  summary.print();
}

/* ----- mine-triplets ------------------------------------------------------ */

struct MineOpts {
  std::string rgb;
  std::string thermal;
  std::string out_dir;
  double radius = 0.0;
  std::size_t k_hard = 10;
  std::uint64_t seed = 0;
  bool frame_radius = false;
  std::string metric = "euclidean";
};

void run_mine(const MineOpts& opt) {
  Summary summary("mine-triplets");
  if (opt.metric != "euclidean" && opt.metric != "cosine")
    throw ValidationError("--metric must be 'euclidean' or 'cosine'");
  auto rgb = load_embeddings(opt.rgb);
  auto thermal = load_embeddings(opt.thermal);
  rgbt_mining_config cfg{};
  cfg.radius = opt.radius;
  cfg.k_hard = opt.k_hard;
  cfg.seed = opt.seed;
  cfg.frame_radius = opt.frame_radius ? 1 : 0;
  cfg.hard_metric =
      opt.metric == "cosine" ? RGBT_METRIC_COSINE : RGBT_METRIC_EUCLIDEAN;
  rgbt_triplet* triplets = nullptr;
  size_t count = 0, skipped = 0;
  int32_t used_frame_radius = 0;
  check(rgbt_mine_triplets(rgb.get(), thermal.get(), &cfg, &triplets, &count, &skipped,
                           &used_frame_radius),
        "mining");
  std::unique_ptr<rgbt_triplet, void (*)(void*)> guard(triplets, rgbt_buffer_free);

  json rows = json::array();
  for (size_t i = 0; i < count; ++i) {
    rows.push_back({{"anchor", triplets[i].anchor_index},
                    {"positive", triplets[i].positive_index},
                    {"negative", triplets[i].negative_index},
                    {"anchor_id", rgbt_embedding_set_id(thermal.get(),
                                                        triplets[i].anchor_index)},
                    {"positive_id",
                     rgbt_embedding_set_id(rgb.get(), triplets[i].positive_index)},
                    {"negative_id",
                     rgbt_embedding_set_id(rgb.get(), triplets[i].negative_index)}});
  }
  json doc = {{"triplets", rows},
              {"skipped_anchors", skipped},
              {"used_frame_radius", used_frame_radius != 0}};
  cli::ensure_out_dir(opt.out_dir);
  const std::string out_path = join_path(opt.out_dir, "triplets.json");
  cli::write_json_file(out_path, doc);
  summary.add_output(out_path);
  summary.extra()["triplets"] = count;
  summary.extra()["skipped_anchors"] = skipped;
  summary.extra()["used_frame_radius"] = used_frame_radius != 0;
  summary.set_config({{"rgb", opt.rgb},
                      {"thermal", opt.thermal},
                      {"out_dir", opt.out_dir},
                      {"radius", opt.radius},
                      {"k_hard", opt.k_hard},
                      {"seed", opt.seed},
                      {"frame_radius", opt.frame_radius},
                      {"metric", opt.metric}});
  summary.print();
}

/* ----- distill-toy --------------------------------------------------------- */

struct DistillOpts {
  std::string out_dir;
  rgbt_distill_config config{};
};

void run_distill(const DistillOpts& opt) {
  Summary summary("distill-toy");
  rgbt_distill_result* result_raw = nullptr;
  check(rgbt_toy_distill(&opt.config, &result_raw), "distilling");
  Handle<rgbt_distill_result> result(result_raw, rgbt_distill_result_free);

  const rgbt_distill_history_entry* entries = nullptr;
  size_t count = 0;
  check(rgbt_distill_result_history(result.get(), &entries, &count), "history");
  std::string csv = "step,loss,recall_at_1\n";
  for (size_t i = 0; i < count; ++i) {
    csv += std::to_string(entries[i].step);
    csv += ",";
    csv += cli::format_double(entries[i].loss);
    csv += ",";
    if (entries[i].recall_at_1 >= 0.0) csv += cli::format_double(entries[i].recall_at_1);
    csv += "\n";
  }
  cli::ensure_out_dir(opt.out_dir);
  const std::string csv_path = join_path(opt.out_dir, "history.csv");
  cli::write_text_file(csv_path, csv);
  summary.add_output(csv_path);

  double initial = 0.0, final_recall = 0.0;
  check(rgbt_distill_result_recall(result.get(), &initial, &final_recall), "recall");
  summary.extra()["initial_recall_at_1"] = initial;
  summary.extra()["final_recall_at_1"] = final_recall;
  summary.set_config({{"out_dir", opt.out_dir},
                      {"latent_dim", opt.config.latent_dim},
                      {"feature_dim", opt.config.feature_dim},
                      {"train_pairs", opt.config.train_pairs},
                      {"val_pairs", opt.config.val_pairs},
                      {"noise", opt.config.noise},
                      {"lr", opt.config.learning_rate},
                      {"steps", opt.config.steps},
                      {"batch", opt.config.batch_size},
                      {"tau", opt.config.tau},
                      {"seed", opt.config.seed},
                      {"eval_every", opt.config.eval_every}});
  summary.print();
}

/* ----- eval-vpr --------------------------------------------------------- */

struct EvalVprOpts {
  std::string queries;
  std::string db;
  std::string out_dir;
  double radius = 0.0;
  std::string ks = "1";
  bool frame_radius = false;
  std::string metric = "cosine";
};

void run_eval_vpr(const EvalVprOpts& opt) {
  Summary summary("eval-vpr");
  const auto query_paths = cli::split_csv(opt.queries);
  const auto db_paths = cli::split_csv(opt.db);
  if (query_paths.empty() || query_paths.size() != db_paths.size())
    throw ValidationError("--queries and --db need the same number of files");
  for (const auto& p : query_paths) cli::require_input(p);
  for (const auto& p : db_paths) cli::require_input(p);

  std::vector<std::string> names;
  std::vector<const char*> name_ptrs, query_ptrs, db_ptrs;
  for (std::size_t i = 0; i < query_paths.size(); ++i) {
    names.push_back(stem_of(query_paths[i]));
    query_ptrs.push_back(query_paths[i].c_str());
    db_ptrs.push_back(db_paths[i].c_str());
  }
  for (const auto& n : names) name_ptrs.push_back(n.c_str());

  std::vector<size_t> ks;
  for (const auto& k : cli::split_csv(opt.ks))
    ks.push_back(cli::parse_size(k, "--k entry"));
  if (opt.metric != "euclidean" && opt.metric != "cosine")
    throw ValidationError("--metric must be 'euclidean' or 'cosine'");
  const rgbt_metric metric =
      opt.metric == "euclidean" ? RGBT_METRIC_EUCLIDEAN : RGBT_METRIC_COSINE;

  char* raw = nullptr;
  check(rgbt_eval_vpr_json(name_ptrs.data(), query_ptrs.data(), db_ptrs.data(),
                           name_ptrs.size(), opt.radius, opt.frame_radius ? 1 : 0,
                           ks.data(), ks.size(), metric, &raw),
        "evaluating");
  std::unique_ptr<char, void (*)(char*)> guard(raw, rgbt_string_free);
  json report = json::parse(raw);

  cli::ensure_out_dir(opt.out_dir);
  const std::string out_path = join_path(opt.out_dir, "vpr_report.json");
  cli::write_json_file(out_path, report);
  summary.add_output(out_path);
  summary.extra()["weighted_mean"] = report.at("weighted_mean");
  summary.extra()["dropped_queries"] = report.at("dropped_queries");
  for (const auto& seq : report.at("per_seq"))
    if (seq.at("k_clamped").get<bool>())
      summary.add_warning("K clamped to database size in sequence " +
                          seq.at("name").get<std::string>());
  summary.set_config({{"queries", opt.queries},
                      {"db", opt.db},
                      {"out_dir", opt.out_dir},
                      {"radius", opt.radius},
                      {"k", opt.ks},
                      {"frame_radius", opt.frame_radius},
                      {"metric", opt.metric}});
  summary.print();
}

/* ----- eval-seg --------------------------------------------------------- */

struct EvalSegOpts {
  std::string pred_dir;
  std::string gt_dir;
  std::string out_dir;
  std::string class_names;  // optional JSON array of names
  int classes = 9;
  int ignore_label = -1;
};

void run_eval_seg(const EvalSegOpts& opt) {
  Summary summary("eval-seg");
  auto gt_files = cli::collect_inputs(opt.gt_dir, {".pgm"});
  cli::require_input(opt.pred_dir);
  std::vector<std::string> names;
  if (!opt.class_names.empty()) {
    cli::require_input(opt.class_names);
    std::ifstream in(opt.class_names);
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.is_array())
      throw ValidationError("class names file must be a JSON array");
    for (const auto& n : doc) names.push_back(n.get<std::string>());
  }

  rgbt_seg_eval* eval_raw = nullptr;
  check(rgbt_seg_eval_new(opt.classes, opt.ignore_label, &eval_raw), "seg eval");
  Handle<rgbt_seg_eval> eval(eval_raw, rgbt_seg_eval_free);
  for (const auto& gt_path : gt_files) {
    const std::string pred_path =
        join_path(opt.pred_dir, std::filesystem::path(gt_path).filename().string());
    cli::require_input(pred_path);
    auto pred = load_u8(pred_path);
    auto gt = load_u8(gt_path);
    check(rgbt_seg_eval_add(eval.get(), pred.get(), gt.get()),
          "accumulating " + gt_path);
  }
  std::vector<double> per_class(static_cast<std::size_t>(opt.classes));
  std::vector<int32_t> present(static_cast<std::size_t>(opt.classes));
  double miou = 0.0;
  check(rgbt_seg_eval_result(eval.get(), per_class.data(), present.data(), &miou),
        "seg result");

  json classes = json::array();
  for (int c = 0; c < opt.classes; ++c) {
    json entry = {{"class", c}, {"present", present[c] != 0}};
    if (present[c]) entry["iou"] = per_class[c];
    if (c < static_cast<int>(names.size())) entry["name"] = names[c];
    classes.push_back(entry);
  }
  json doc = {{"miou", miou}, {"classes", classes}, {"frames", gt_files.size()}};
  cli::ensure_out_dir(opt.out_dir);
  const std::string out_path = join_path(opt.out_dir, "seg_report.json");
  cli::write_json_file(out_path, doc);
  summary.add_output(out_path);
  summary.extra()["miou"] = miou;
  summary.extra()["frames"] = gt_files.size();
  summary.set_config({{"pred", opt.pred_dir},
                      {"gt", opt.gt_dir},
                      {"out_dir", opt.out_dir},
                      {"classes", opt.classes},
                      {"ignore", opt.ignore_label},
                      {"class_names", opt.class_names}});
  summary.print();
}

/* ----- eval-depth --------------------------------------------------------- */

struct EvalDepthOpts {
  std::string pred_dir;
  std::string gt_dir;
  std::string mask_dir;  // optional
  std::string out_dir;
};

void run_eval_depth(const EvalDepthOpts& opt) {
  Summary summary("eval-depth");
  auto gt_files = cli::collect_inputs(opt.gt_dir, {".rgtd", ".pfm"});
  cli::require_input(opt.pred_dir);
  if (!opt.mask_dir.empty()) cli::require_input(opt.mask_dir);

  rgbt_depth_eval* eval_raw = nullptr;
  check(rgbt_depth_eval_new(&eval_raw), "depth eval");
  Handle<rgbt_depth_eval> eval(eval_raw, rgbt_depth_eval_free);
  for (const auto& gt_path : gt_files) {
    const std::string filename = std::filesystem::path(gt_path).filename().string();
    const std::string pred_path = join_path(opt.pred_dir, filename);
    cli::require_input(pred_path);
    auto pred = load_f32(pred_path);
    auto gt = load_f32(gt_path);
    Handle<rgbt_image_f32> mask(nullptr, rgbt_image_f32_free);
    if (!opt.mask_dir.empty()) {
      const std::string mask_path = join_path(opt.mask_dir, filename);
      cli::require_input(mask_path);
      mask = load_f32(mask_path);
    }
    check(rgbt_depth_eval_add(eval.get(), pred.get(), gt.get(), mask.get()),
          "accumulating " + gt_path);
  }
  rgbt_depth_metrics metrics{};
  check(rgbt_depth_eval_result(eval.get(), &metrics), "depth result");

  json doc = {{"abs_rel", metrics.abs_rel},
              {"sq_rel", metrics.sq_rel},
              {"rmse", metrics.rmse},
              {"rmse_log", metrics.rmse_log},
              {"valid_pixels", metrics.valid_pixels},
              {"clamped_predictions", metrics.clamped_predictions},
              {"frames", gt_files.size()}};
  cli::ensure_out_dir(opt.out_dir);
  const std::string out_path = join_path(opt.out_dir, "depth_report.json");
  cli::write_json_file(out_path, doc);
  summary.add_output(out_path);
  summary.extra()["metrics"] = doc;
  summary.set_config({{"pred", opt.pred_dir},
                      {"gt", opt.gt_dir},
                      {"mask", opt.mask_dir},
                      {"out_dir", opt.out_dir}});
  summary.print();
}

/* ----- scaling-report ------------------------------------------------------ */

struct ScalingOpts {
  std::string runs;
  std::string out_dir;
};

void run_scaling(const ScalingOpts& opt) {
  Summary summary("scaling-report");
  cli::require_input(opt.runs);
  std::ifstream in(opt.runs, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  char* raw = nullptr;
  check(rgbt_scaling_report_json(ss.str().c_str(), &raw), "building report");
  std::unique_ptr<char, void (*)(char*)> guard(raw, rgbt_string_free);
  json report = json::parse(raw);

  cli::ensure_out_dir(opt.out_dir);
  const std::string json_path = join_path(opt.out_dir, "scaling_report.json");
  cli::write_json_file(json_path, report);
  summary.add_output(json_path);

  std::string table;
  for (const auto& task : report.at("tasks")) {
    table += "task: " + task.at("task").get<std::string>() + "\n";
    std::vector<std::vector<std::string>> rows;
    rows.push_back({"combo", "value", "delta"});
    for (const auto& row : task.at("rows")) {
      rows.push_back({row.at("combo").get<std::string>(),
                      cli::format_double(row.at("value").get<double>()),
                      row.contains("delta")
                          ? cli::format_double(row.at("delta").get<double>())
                          : ""});
    }
    table += format_table(rows) + "\n";
  }
  const std::string table_path = join_path(opt.out_dir, "scaling_report.txt");
  cli::write_text_file(table_path, table);
  summary.add_output(table_path);
  summary.extra()["tasks"] = report.at("tasks").size();
  summary.set_config({{"runs", opt.runs}, {"out_dir", opt.out_dir}});
  summary.print();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rgbt: RGB-thermal dataset registration, curation, and evaluation"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML config file; command-line flags override it");
  std::ostringstream version;
  int32_t manifest_schema = 0, embedding_schema = 0, summary_schema = 0;
  rgbt_schema_versions(&manifest_schema, &embedding_schema, &summary_schema);
  version << "rgbt " << rgbt_version() << " (manifest schema " << manifest_schema
          << ", RGTE v" << embedding_schema << ", summary schema " << summary_schema
          << ")";
  app.set_version_flag("--version", version.str());

  ValidateOpts validate_opts;
  auto* cmd_validate = app.add_subcommand("validate", "Validate a dataset manifest");
  cmd_validate->add_option("--manifest", validate_opts.manifest, "Manifest JSON")
      ->required();

  Thermal8Opts thermal_opts;
  rgbt_thermal_config_default(&thermal_opts.config);
  thermal_opts.jobs = cli::default_jobs();
  auto* cmd_thermal = app.add_subcommand(
      "thermal8", "Convert 16-bit thermal frames to 8-bit (min-max, CLAHE, bilateral)");
  cmd_thermal->add_option("--input", thermal_opts.input, "16-bit PGM file or directory")
      ->required();
  cmd_thermal->add_option("--out-dir", thermal_opts.out_dir, "Output directory")
      ->required();
  cmd_thermal->add_option("--lo-percentile", thermal_opts.config.lo_percentile,
                          "Clip below this percentile before scaling");
  cmd_thermal->add_option("--hi-percentile", thermal_opts.config.hi_percentile,
                          "Clip above this percentile before scaling");
  cmd_thermal->add_option("--tiles-x", thermal_opts.config.tiles_x, "CLAHE tile columns");
  cmd_thermal->add_option("--tiles-y", thermal_opts.config.tiles_y, "CLAHE tile rows");
  cmd_thermal->add_option("--clip", thermal_opts.config.clip_limit, "CLAHE clip limit");
  cmd_thermal->add_option("--radius", thermal_opts.config.bilateral_radius,
                          "Bilateral window radius");
  cmd_thermal->add_option("--sigma-color", thermal_opts.config.sigma_color,
                          "Bilateral range sigma");
  cmd_thermal->add_option("--sigma-space", thermal_opts.config.sigma_space,
                          "Bilateral spatial sigma");
  cmd_thermal->add_option("--jobs", thermal_opts.jobs, "Worker threads");
  cmd_thermal->callback([&] { run_thermal8(thermal_opts); });

  RectifyOpts rectify_opts;
  rectify_opts.jobs = cli::default_jobs();
  auto* cmd_rectify =
      app.add_subcommand("rectify", "Undistort fisheye frames into a pinhole model");
  cmd_rectify->add_option("--calib", rectify_opts.calib, "Calibration JSON")->required();
  cmd_rectify->add_option("--src-camera", rectify_opts.src_camera, "Source camera name");
  cmd_rectify->add_option("--dst-camera", rectify_opts.dst_camera,
                          "Destination (pinhole) camera name");
  cmd_rectify->add_option("--input", rectify_opts.input, "PGM file or directory")
      ->required();
  cmd_rectify->add_option("--out-dir", rectify_opts.out_dir, "Output directory")
      ->required();
  cmd_rectify->add_option("--jobs", rectify_opts.jobs, "Worker threads");
  cmd_rectify->callback([&] { run_rectify(rectify_opts); });

  RegisterOpts register_opts;
  auto* cmd_register = app.add_subcommand(
      "register", "Warp RGB into the thermal frame via depth reprojection");
  cmd_register->add_option("--calib", register_opts.calib, "Calibration JSON")
      ->required();
  cmd_register->add_option("--rgb", register_opts.rgb, "Rectified RGB (PPM/PGM)")
      ->required();
  cmd_register->add_option("--depth", register_opts.depth, "Depth raster (PFM or RGTD)")
      ->required();
  cmd_register->add_option("--thermal", register_opts.thermal, "8-bit thermal PGM")
      ->required();
  cmd_register->add_option("--out-dir", register_opts.out_dir, "Output directory")
      ->required();
  cmd_register->add_option("--alpha", register_opts.alphas,
                           "Comma-separated overlay blend factors");
  cmd_register->add_option("--depth-tol", register_opts.depth_tol,
                           "Relative z-buffer tolerance");
  cmd_register->add_option("--rgb-camera", register_opts.rgb_camera, "RGB camera name");
  cmd_register->add_option("--thermal-camera", register_opts.thermal_camera,
                           "Thermal camera name");
  cmd_register->add_option("--transform", register_opts.transform,
                           "RGB-to-thermal transform name");
  cmd_register->callback([&] { run_register(register_opts); });

  PairOpts pair_opts;
  auto* cmd_pair =
      app.add_subcommand("pair", "Pair RGB and thermal frames by timestamp");
  cmd_pair->add_option("--manifest", pair_opts.manifest, "Manifest JSON")->required();
  cmd_pair->add_option("--sequence", pair_opts.sequence, "Only this sequence");
  cmd_pair->add_option("--out-dir", pair_opts.out_dir, "Output directory")->required();
  cmd_pair->add_option("--tol-ms", pair_opts.tol_ms,
                       "Pairing tolerance in ms (default 10 synced / 50 unsynced)");
  cmd_pair->callback([&] { run_pair(pair_opts); });

  SubsampleOpts subsample_opts;
  auto* cmd_subsample =
      app.add_subcommand("subsample", "Select frames on the 1 Hz grid");
  cmd_subsample->add_option("--manifest", subsample_opts.manifest, "Manifest JSON")
      ->required();
  cmd_subsample->add_option("--stream", subsample_opts.stream, "rgb or thermal");
  cmd_subsample->add_option("--sequence", subsample_opts.sequence, "Only this sequence");
  cmd_subsample->add_option("--out-dir", subsample_opts.out_dir, "Output directory")
      ->required();
  cmd_subsample->callback([&] { run_subsample(subsample_opts); });

  StatsOpts stats_opts;
  auto* cmd_stats =
      app.add_subcommand("stats", "Per-environment 1 Hz pair counts");
  cmd_stats->add_option("--manifest", stats_opts.manifest, "Manifest JSON")->required();
  cmd_stats->add_option("--out-dir", stats_opts.out_dir, "Output directory")->required();
  cmd_stats->add_flag("--by-env", stats_opts.by_env,
                      "Tabulate per environment instead of per sequence");
  cmd_stats->add_option("--tol-synced-ms", stats_opts.tol_synced_ms,
                        "Pair tolerance for hardware-synced sequences");
  cmd_stats->add_option("--tol-unsynced-ms", stats_opts.tol_unsynced_ms,
                        "Pair tolerance for unsynced sequences");
  cmd_stats->add_option("--guard-ms", stats_opts.guard_ms, "FFC guard window");
  cmd_stats->callback([&] { run_stats(stats_opts); });

  MineOpts mine_opts;
  auto* cmd_mine = app.add_subcommand(
      "mine-triplets", "Radius-based triplet mining with hard negatives");
  cmd_mine->add_option("--rgb", mine_opts.rgb, "RGB embedding set (RGTE)")->required();
  cmd_mine->add_option("--thermal", mine_opts.thermal, "Thermal embedding set (RGTE)")
      ->required();
  cmd_mine->add_option("--out-dir", mine_opts.out_dir, "Output directory")->required();
  cmd_mine->add_option("--radius", mine_opts.radius, "Positive radius")->required();
  cmd_mine->add_option("--k-hard", mine_opts.k_hard, "Hard-negative pool size");
  cmd_mine->add_option("--seed", mine_opts.seed, "RNG seed")->required();
  cmd_mine->add_flag("--frame-radius", mine_opts.frame_radius,
                     "Force frame-index radius");
  cmd_mine->add_option("--metric", mine_opts.metric,
                       "Hard-negative metric: euclidean or cosine");
  cmd_mine->callback([&] { run_mine(mine_opts); });

  DistillOpts distill_opts;
  rgbt_distill_config_default(&distill_opts.config);
  auto* cmd_distill = app.add_subcommand(
      "distill-toy", "Linear-encoder contrastive distillation demo");
  cmd_distill->add_option("--out-dir", distill_opts.out_dir, "Output directory")
      ->required();
  cmd_distill->add_option("--seed", distill_opts.config.seed, "RNG seed")->required();
  cmd_distill->add_option("--steps", distill_opts.config.steps, "Training steps");
  cmd_distill->add_option("--lr", distill_opts.config.learning_rate, "Learning rate");
  cmd_distill->add_option("--tau", distill_opts.config.tau, "InfoNCE temperature");
  cmd_distill->add_option("--latent-dim", distill_opts.config.latent_dim, "Latent dim");
  cmd_distill->add_option("--feature-dim", distill_opts.config.feature_dim,
                          "Feature dim");
  cmd_distill->add_option("--train-pairs", distill_opts.config.train_pairs,
                          "Training pairs");
  cmd_distill->add_option("--val-pairs", distill_opts.config.val_pairs,
                          "Held-out pairs");
  cmd_distill->add_option("--noise", distill_opts.config.noise, "Observation noise");
  cmd_distill->add_option("--batch", distill_opts.config.batch_size, "Batch size");
  cmd_distill->add_option("--eval-every", distill_opts.config.eval_every,
                          "Recall evaluation period (steps)");
  cmd_distill->callback([&] { run_distill(distill_opts); });

  EvalVprOpts vpr_opts;
  auto* cmd_vpr = app.add_subcommand(
      "eval-vpr", "Cross-modal place recognition recall@K");
  cmd_vpr->add_option("--queries", vpr_opts.queries,
                      "Comma-separated per-sequence query RGTE files")
      ->required();
  cmd_vpr->add_option("--db", vpr_opts.db,
                      "Comma-separated per-sequence database RGTE files")
      ->required();
  cmd_vpr->add_option("--out-dir", vpr_opts.out_dir, "Output directory")->required();
  cmd_vpr->add_option("--radius", vpr_opts.radius, "Positive radius")->required();
  cmd_vpr->add_option("--k", vpr_opts.ks, "Comma-separated K values");
  cmd_vpr->add_flag("--frame-radius", vpr_opts.frame_radius,
                    "Interpret the radius in frame indices");
  cmd_vpr->add_option("--metric", vpr_opts.metric, "euclidean or cosine");
  cmd_vpr->callback([&] { run_eval_vpr(vpr_opts); });

  EvalSegOpts seg_opts;
  auto* cmd_seg = app.add_subcommand("eval-seg", "Segmentation mIoU over label maps");
  cmd_seg->add_option("--pred", seg_opts.pred_dir, "Predicted label PGM directory")
      ->required();
  cmd_seg->add_option("--gt", seg_opts.gt_dir, "Ground-truth label PGM directory")
      ->required();
  cmd_seg->add_option("--out-dir", seg_opts.out_dir, "Output directory")->required();
  cmd_seg->add_option("--classes", seg_opts.classes, "Class count");
  cmd_seg->add_option("--ignore", seg_opts.ignore_label, "Ignore label (-1 = none)");
  cmd_seg->add_option("--class-names", seg_opts.class_names,
                      "JSON array of class names");
  cmd_seg->callback([&] { run_eval_seg(seg_opts); });

  EvalDepthOpts depth_opts;
  auto* cmd_depth =
      app.add_subcommand("eval-depth", "Monocular depth error metrics");
  cmd_depth->add_option("--pred", depth_opts.pred_dir, "Predicted depth directory")
      ->required();
  cmd_depth->add_option("--gt", depth_opts.gt_dir, "Ground-truth depth directory")
      ->required();
  cmd_depth->add_option("--mask", depth_opts.mask_dir, "Validity mask directory");
  cmd_depth->add_option("--out-dir", depth_opts.out_dir, "Output directory")
      ->required();
  cmd_depth->callback([&] { run_eval_depth(depth_opts); });

  ScalingOpts scaling_opts;
  auto* cmd_scaling = app.add_subcommand(
      "scaling-report", "Order scaling-study runs with per-task deltas");
  cmd_scaling->add_option("--runs", scaling_opts.runs, "Runs JSON file")->required();
  cmd_scaling->add_option("--out-dir", scaling_opts.out_dir, "Output directory")
      ->required();
  cmd_scaling->callback([&] { run_scaling(scaling_opts); });

  cmd_validate->callback([&] { run_validate(validate_opts); });

  // Let app-level flags (--config, --version) appear after the subcommand.
  for (auto* sub : app.get_subcommands([](const CLI::App*) { return true; }))
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 64;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const RuntimeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
