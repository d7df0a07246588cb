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
#include "core/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace rgbt {

const char* to_string(Environment env) {
  switch (env) {
    case Environment::Indoor: return "indoor";
    case Environment::Offroad: return "offroad";
    case Environment::Aerial: return "aerial";
    case Environment::UrbanDrive: return "urban-drive";
    case Environment::UrbanPark: return "urban-park";
  }
  return "indoor";
}

Environment environment_from_string(const std::string& s) {
  if (s == "indoor") return Environment::Indoor;
  if (s == "offroad") return Environment::Offroad;
  if (s == "aerial") return Environment::Aerial;
  if (s == "urban-drive") return Environment::UrbanDrive;
  if (s == "urban-park") return Environment::UrbanPark;
  fail(ErrorCode::InvalidArgument, "unknown environment tag: " + s);
}

namespace {

std::vector<FrameRef> parse_frames(const nlohmann::json& arr, const std::string& where) {
  std::vector<FrameRef> frames;
  frames.reserve(arr.size());
  std::int64_t prev = std::numeric_limits<std::int64_t>::min();
  for (const auto& j : arr) {
    FrameRef f;
    f.path = j.at("path").get<std::string>();
    f.t_ns = j.at("t_ns").get<std::int64_t>();
    if (f.t_ns <= prev)
      fail(ErrorCode::InvalidArgument, where + ": timestamps must be strictly increasing");
    prev = f.t_ns;
    frames.push_back(std::move(f));
  }
  return frames;
}

}  // namespace

DatasetManifest parse_manifest(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Parse, std::string("manifest JSON: ") + e.what());
  }
  DatasetManifest manifest;
  try {
    const int schema = doc.at("schema").get<int>();
    if (schema != kManifestSchemaVersion)
      fail(ErrorCode::InvalidArgument,
           "unsupported manifest schema " + std::to_string(schema));
    manifest.dataset = doc.at("dataset").get<std::string>();
    std::set<std::string> names;
    for (const auto& js : doc.at("sequences")) {
      SequenceRecord seq;
      seq.name = js.at("name").get<std::string>();
      if (!names.insert(seq.name).second)
        fail(ErrorCode::InvalidArgument, "duplicate sequence name: " + seq.name);
      seq.environment = environment_from_string(js.at("environment").get<std::string>());
      seq.hardware_synced = js.value("hardware_synced", true);
      seq.rgb = parse_frames(js.at("rgb"), seq.name + "/rgb");
      seq.thermal = parse_frames(js.at("thermal"), seq.name + "/thermal");
      if (js.contains("ffc_events")) {
        for (const auto& je : js.at("ffc_events")) {
          FfcEvent e{je.at("start_ns").get<std::int64_t>(),
                     je.at("end_ns").get<std::int64_t>()};
          if (e.start_ns >= e.end_ns)
            fail(ErrorCode::InvalidArgument, seq.name + ": FFC event start must precede end");
          if (!seq.ffc_events.empty() && e.start_ns <= seq.ffc_events.back().end_ns)
            fail(ErrorCode::InvalidArgument,
                 seq.name + ": FFC events must be sorted and non-overlapping");
          seq.ffc_events.push_back(e);
        }
      }
      const std::string kind = js.value("position_kind", std::string("none"));
      if (kind == "geographic")
        seq.position_kind = PositionKind::Geographic;
      else if (kind == "odometric")
        seq.position_kind = PositionKind::Odometric;
      else if (kind == "none")
        seq.position_kind = PositionKind::None;
      else
        fail(ErrorCode::InvalidArgument, seq.name + ": unknown position_kind " + kind);
      if (js.contains("positions")) {
        std::int64_t prev = std::numeric_limits<std::int64_t>::min();
        for (const auto& jp : js.at("positions")) {
          PositionSample p{jp.at("t_ns").get<std::int64_t>(), jp.at("x").get<double>(),
                           jp.at("y").get<double>(), jp.at("z").get<double>()};
          if (p.t_ns <= prev)
            fail(ErrorCode::InvalidArgument, seq.name + ": positions must be time-sorted");
          prev = p.t_ns;
          seq.positions.push_back(p);
        }
      }
      if (seq.position_kind != PositionKind::None && seq.positions.empty())
        fail(ErrorCode::InvalidArgument, seq.name + ": position_kind set but no positions");
      if (seq.position_kind == PositionKind::None && !seq.positions.empty())
        fail(ErrorCode::InvalidArgument,
             seq.name + ": positions present but position_kind is none");
      manifest.sequences.push_back(std::move(seq));
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Parse, std::string("manifest JSON: ") + e.what());
  }
  return manifest;
}

DatasetManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open manifest: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_manifest(ss.str());
}

std::vector<FramePair> pair_by_timestamp(const std::vector<std::int64_t>& rgb_ts,
                                         const std::vector<std::int64_t>& thermal_ts,
                                         std::int64_t tol_ns) {
  if (tol_ns < 0) fail(ErrorCode::InvalidArgument, "pairing tolerance must be >= 0");
  if (!std::is_sorted(rgb_ts.begin(), rgb_ts.end()) ||
      !std::is_sorted(thermal_ts.begin(), thermal_ts.end()))
    fail(ErrorCode::InvalidArgument, "pair_by_timestamp requires sorted streams");

  struct Candidate {
    std::int64_t dt;
    std::int64_t lo, hi;  // symmetric tie key
    std::size_t r, t;
  };
  std::vector<Candidate> candidates;
  for (std::size_t r = 0; r < rgb_ts.size(); ++r) {
    auto lo = std::lower_bound(thermal_ts.begin(), thermal_ts.end(), rgb_ts[r] - tol_ns);
    auto hi = std::upper_bound(thermal_ts.begin(), thermal_ts.end(), rgb_ts[r] + tol_ns);
    for (auto it = lo; it != hi; ++it) {
      std::size_t t = static_cast<std::size_t>(it - thermal_ts.begin());
      std::int64_t dt = std::abs(rgb_ts[r] - thermal_ts[t]);
      candidates.push_back({dt, std::min(rgb_ts[r], thermal_ts[t]),
                            std::max(rgb_ts[r], thermal_ts[t]), r, t});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.dt != b.dt) return a.dt < b.dt;
    if (a.lo != b.lo) return a.lo < b.lo;
    return a.hi < b.hi;
  });

  std::vector<bool> rgb_used(rgb_ts.size(), false), thr_used(thermal_ts.size(), false);
  std::vector<FramePair> pairs;
  for (const auto& c : candidates) {
    if (rgb_used[c.r] || thr_used[c.t]) continue;
    rgb_used[c.r] = true;
    thr_used[c.t] = true;
    pairs.push_back({c.r, c.t, c.dt});
  }
  std::sort(pairs.begin(), pairs.end(),
            [&](const FramePair& a, const FramePair& b) { return a.rgb_index < b.rgb_index; });
  return pairs;
}

std::vector<std::size_t> subsample_1hz(const std::vector<std::int64_t>& timestamps) {
  if (!std::is_sorted(timestamps.begin(), timestamps.end()))
    fail(ErrorCode::InvalidArgument, "subsample_1hz requires sorted timestamps");
  std::vector<std::size_t> kept;
  if (timestamps.empty()) return kept;
  constexpr std::int64_t kSecond = 1'000'000'000;
  const std::int64_t t0 = timestamps.front();
  const std::int64_t span = timestamps.back() - t0;
  const std::int64_t slots = span / kSecond + 1;
  for (std::int64_t k = 0; k < slots; ++k) {
    const std::int64_t grid = t0 + k * kSecond;
    auto it = std::lower_bound(timestamps.begin(), timestamps.end(), grid);
    std::size_t best;
    if (it == timestamps.begin()) {
      best = 0;
    } else if (it == timestamps.end()) {
      best = timestamps.size() - 1;
    } else {
      std::size_t hi = static_cast<std::size_t>(it - timestamps.begin());
      // Ties pick the earlier frame.
      best = (timestamps[hi] - grid < grid - timestamps[hi - 1]) ? hi : hi - 1;
    }
    if (kept.empty() || best > kept.back()) kept.push_back(best);
  }
  return kept;
}

DatasetStats dataset_stats(const DatasetManifest& manifest, const StatsConfig& cfg) {
  DatasetStats stats;
  for (const auto& seq : manifest.sequences) {
    std::vector<std::int64_t> thermal_ts;
    thermal_ts.reserve(seq.thermal.size());
    for (const auto& f : seq.thermal) thermal_ts.push_back(f.t_ns);
    std::vector<std::int64_t> rgb_ts;
    rgb_ts.reserve(seq.rgb.size());
    for (const auto& f : seq.rgb) rgb_ts.push_back(f.t_ns);

    std::vector<std::int64_t> sub;
    for (std::size_t idx : subsample_1hz(thermal_ts)) sub.push_back(thermal_ts[idx]);
    std::vector<std::int64_t> kept = filter_ffc(sub, seq.ffc_events, cfg.ffc_guard_ns);
    const std::int64_t tol =
        seq.hardware_synced ? cfg.pair_tol_synced_ns : cfg.pair_tol_unsynced_ns;
    const std::size_t n = pair_by_timestamp(rgb_ts, kept, tol).size();

    stats.per_sequence.push_back({seq.name, seq.environment, n});
    stats.per_environment[to_string(seq.environment)] += n;
    stats.total += n;
  }
  return stats;
}

std::optional<PositionSample> position_at(const SequenceRecord& seq, std::int64_t t_ns) {
  const auto& pos = seq.positions;
  if (pos.empty()) return std::nullopt;
  constexpr std::int64_t kSlack = 500'000'000;  // 500 ms
  if (t_ns < pos.front().t_ns) {
    if (pos.front().t_ns - t_ns > kSlack) return std::nullopt;
    return PositionSample{t_ns, pos.front().x, pos.front().y, pos.front().z};
  }
  if (t_ns > pos.back().t_ns) {
    if (t_ns - pos.back().t_ns > kSlack) return std::nullopt;
    return PositionSample{t_ns, pos.back().x, pos.back().y, pos.back().z};
  }
  auto it = std::lower_bound(pos.begin(), pos.end(), t_ns,
                             [](const PositionSample& p, std::int64_t t) { return p.t_ns < t; });
  if (it->t_ns == t_ns) return *it;
  const PositionSample& b = *it;
  const PositionSample& a = *(it - 1);
  const double f = static_cast<double>(t_ns - a.t_ns) / static_cast<double>(b.t_ns - a.t_ns);
  return PositionSample{t_ns, a.x + f * (b.x - a.x), a.y + f * (b.y - a.y),
                        a.z + f * (b.z - a.z)};
}

}  // namespace rgbt
