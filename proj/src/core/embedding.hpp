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
#ifndef RGBT_CORE_EMBEDDING_HPP
#define RGBT_CORE_EMBEDDING_HPP

#include <array>
#include <string>
#include <vector>

#include "core/common.hpp"

namespace rgbt {

enum class Modality : std::uint8_t { Rgb = 0, Thermal = 1 };

// N x D descriptor matrix with per-row identifiers and optional positions.
// Positions are (x,y,z) meters; in frame-radius mode callers store the frame
// index in x.
struct EmbeddingSet {
  std::size_t count = 0;
  std::size_t dim = 0;
  std::vector<double> data;  // row-major
  std::vector<std::string> ids;
  std::vector<std::array<double, 3>> positions;  // empty or size count
  Modality modality = Modality::Rgb;

  double* row(std::size_t i) { return data.data() + i * dim; }
  const double* row(std::size_t i) const { return data.data() + i * dim; }
  bool has_positions() const { return !positions.empty(); }

  // No non-finite entries, unique ids, consistent sizes.
  void validate() const;
};

// RGTE container: header {magic "RGTE", version u32, count u32, dim u32,
// modality u8, has_pos u8}, then f32 little-endian rows, then optional f32
// positions, then newline-delimited UTF-8 ids.
EmbeddingSet load_embedding_set(const std::string& path);
void save_embedding_set(const EmbeddingSet& set, const std::string& path);

// Scales each nonzero row to unit norm; zero rows stay zero and are reported.
std::size_t l2_normalize_rows(std::vector<double>& data, std::size_t count,
                              std::size_t dim);
std::size_t l2_normalize(EmbeddingSet& set);

}  // namespace rgbt

#endif
