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
#ifndef RGBT_CORE_DATASET_HPP
#define RGBT_CORE_DATASET_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core/common.hpp"
#include "core/thermal.hpp"

namespace rgbt {

enum class Environment { Indoor, Offroad, Aerial, UrbanDrive, UrbanPark };

const char* to_string(Environment env);
Environment environment_from_string(const std::string& s);

enum class PositionKind { Geographic, Odometric, None };

struct FrameRef {
  std::string path;
  std::int64_t t_ns = 0;
};

struct PositionSample {
  std::int64_t t_ns = 0;
  double x = 0, y = 0, z = 0;
};

struct SequenceRecord {
  std::string name;
  Environment environment = Environment::Indoor;
  bool hardware_synced = true;
  std::vector<FrameRef> rgb;
  std::vector<FrameRef> thermal;
  std::vector<FfcEvent> ffc_events;
  std::vector<PositionSample> positions;
  PositionKind position_kind = PositionKind::None;
};

struct DatasetManifest {
  std::string dataset;
  std::vector<SequenceRecord> sequences;
};

// Parses and fully validates a versioned manifest ("schema": 1). Frame paths
// are kept as written (relative to the manifest's directory by convention).
DatasetManifest load_manifest(const std::string& path);
DatasetManifest parse_manifest(const std::string& json_text);

struct FramePair {
  std::size_t rgb_index = 0;
  std::size_t thermal_index = 0;
  std::int64_t abs_dt_ns = 0;
};

// Greedy nearest-neighbor matching on sorted streams: candidate pairs within
// tolerance are consumed in order of (|dt|, min ts, max ts), each frame used
// at most once. Output is sorted by RGB timestamp. Candidate generation is
// linear in the number of frames within tolerance of each other, so keep the
// tolerance near the frame period.
std::vector<FramePair> pair_by_timestamp(const std::vector<std::int64_t>& rgb_ts,
                                         const std::vector<std::int64_t>& thermal_ts,
                                         std::int64_t tol_ns);

// Keeps the frame nearest to each 1-second grid point anchored at the first
// timestamp; one frame per slot, strictly increasing output.
std::vector<std::size_t> subsample_1hz(const std::vector<std::int64_t>& timestamps);

struct StatsConfig {
  std::int64_t pair_tol_synced_ns = 10'000'000;    // 10 ms
  std::int64_t pair_tol_unsynced_ns = 50'000'000;  // 50 ms
  std::int64_t ffc_guard_ns = 100'000'000;         // 100 ms
};

struct SequenceStats {
  std::string name;
  Environment environment = Environment::Indoor;
  std::size_t pairs_1hz = 0;
};

struct DatasetStats {
  std::vector<SequenceStats> per_sequence;
  std::map<std::string, std::size_t> per_environment;
  std::size_t total = 0;
};

// Pair count per sequence at 1 Hz: thermal frames are subsampled to the
// 1-second grid, FFC-contaminated frames dropped, then paired against the
// full RGB stream.
DatasetStats dataset_stats(const DatasetManifest& manifest, const StatsConfig& cfg);

// Piecewise-linear interpolation of the position track. Times within 500 ms
// outside the track clamp to the nearest endpoint; beyond that -> nullopt.
std::optional<PositionSample> position_at(const SequenceRecord& seq, std::int64_t t_ns);

}  // namespace rgbt

#endif
