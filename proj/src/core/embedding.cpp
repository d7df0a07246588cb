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
#include "core/embedding.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <unordered_set>

namespace rgbt {

void EmbeddingSet::validate() const {
  if (dim == 0) fail(ErrorCode::InvalidArgument, "embedding dim must be >= 1");
  if (data.size() != count * dim)
    fail(ErrorCode::InvalidArgument, "embedding data size mismatch");
  if (ids.size() != count)
    fail(ErrorCode::InvalidArgument, "embedding id count mismatch");
  if (!positions.empty() && positions.size() != count)
    fail(ErrorCode::InvalidArgument, "embedding position count mismatch");
  for (double v : data)
    if (!std::isfinite(v)) fail(ErrorCode::InvalidArgument, "non-finite embedding entry");
  std::unordered_set<std::string> seen;
  for (const auto& id : ids)
    if (!seen.insert(id).second)
      fail(ErrorCode::InvalidArgument, "duplicate embedding id: " + id);
}

EmbeddingSet load_embedding_set(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open embedding file: " + path);
  char magic[4];
  in.read(magic, 4);
  if (in.gcount() != 4 || std::memcmp(magic, "RGTE", 4) != 0)
    fail(ErrorCode::Parse, "expected RGTE magic in " + path);
  std::uint32_t version, count, dim;
  std::uint8_t modality, has_pos;
  in.read(reinterpret_cast<char*>(&version), 4);
  in.read(reinterpret_cast<char*>(&count), 4);
  in.read(reinterpret_cast<char*>(&dim), 4);
  in.read(reinterpret_cast<char*>(&modality), 1);
  in.read(reinterpret_cast<char*>(&has_pos), 1);
  if (!in) fail(ErrorCode::Parse, "truncated RGTE header in " + path);
  if (version != static_cast<std::uint32_t>(kEmbeddingFileVersion))
    fail(ErrorCode::Parse, "unsupported RGTE version in " + path);
  if (modality > 1 || has_pos > 1) fail(ErrorCode::Parse, "bad RGTE flags in " + path);

  EmbeddingSet set;
  set.count = count;
  set.dim = dim;
  set.modality = static_cast<Modality>(modality);
  std::vector<float> rows(static_cast<std::size_t>(count) * dim);
  in.read(reinterpret_cast<char*>(rows.data()),
          static_cast<std::streamsize>(rows.size()) * 4);
  if (static_cast<std::size_t>(in.gcount()) != rows.size() * 4)
    fail(ErrorCode::Parse, "truncated RGTE rows in " + path);
  set.data.assign(rows.begin(), rows.end());
  if (has_pos) {
    std::vector<float> pos(static_cast<std::size_t>(count) * 3);
    in.read(reinterpret_cast<char*>(pos.data()),
            static_cast<std::streamsize>(pos.size()) * 4);
    if (static_cast<std::size_t>(in.gcount()) != pos.size() * 4)
      fail(ErrorCode::Parse, "truncated RGTE positions in " + path);
    set.positions.resize(count);
    for (std::size_t i = 0; i < count; ++i)
      set.positions[i] = {pos[3 * i], pos[3 * i + 1], pos[3 * i + 2]};
  }
  set.ids.reserve(count);
  std::string line;
  for (std::uint32_t i = 0; i < count; ++i) {
    if (!std::getline(in, line)) fail(ErrorCode::Parse, "truncated RGTE ids in " + path);
    set.ids.push_back(line);
  }
  set.validate();
  return set;
}

void save_embedding_set(const EmbeddingSet& set, const std::string& path) {
  set.validate();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::Io, "cannot open for writing: " + path);
  out.write("RGTE", 4);
  std::uint32_t version = kEmbeddingFileVersion;
  std::uint32_t count = static_cast<std::uint32_t>(set.count);
  std::uint32_t dim = static_cast<std::uint32_t>(set.dim);
  std::uint8_t modality = static_cast<std::uint8_t>(set.modality);
  std::uint8_t has_pos = set.has_positions() ? 1 : 0;
  out.write(reinterpret_cast<const char*>(&version), 4);
  out.write(reinterpret_cast<const char*>(&count), 4);
  out.write(reinterpret_cast<const char*>(&dim), 4);
  out.write(reinterpret_cast<const char*>(&modality), 1);
  out.write(reinterpret_cast<const char*>(&has_pos), 1);
  std::vector<float> rows(set.data.begin(), set.data.end());
  out.write(reinterpret_cast<const char*>(rows.data()),
            static_cast<std::streamsize>(rows.size()) * 4);
  if (has_pos) {
    std::vector<float> pos;
    pos.reserve(set.count * 3);
    for (const auto& p : set.positions)
      for (double v : p) pos.push_back(static_cast<float>(v));
    out.write(reinterpret_cast<const char*>(pos.data()),
              static_cast<std::streamsize>(pos.size()) * 4);
  }
  for (const auto& id : set.ids) out << id << "\n";
  if (!out) fail(ErrorCode::Io, "short write: " + path);
}

std::size_t l2_normalize_rows(std::vector<double>& data, std::size_t count,
                              std::size_t dim) {
  if (data.size() != count * dim)
    fail(ErrorCode::InvalidArgument, "l2_normalize size mismatch");
  std::size_t zero_rows = 0;
  for (std::size_t i = 0; i < count; ++i) {
    double* row = data.data() + i * dim;
    double sq = 0.0;
    for (std::size_t j = 0; j < dim; ++j) sq += row[j] * row[j];
    if (sq == 0.0) {
      ++zero_rows;
      continue;
    }
    const double inv = 1.0 / std::sqrt(sq);
    for (std::size_t j = 0; j < dim; ++j) row[j] *= inv;
  }
  return zero_rows;
}

std::size_t l2_normalize(EmbeddingSet& set) {
  return l2_normalize_rows(set.data, set.count, set.dim);
}

}  // namespace rgbt
