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
#ifndef RGBT_CORE_EVALUATE_HPP
#define RGBT_CORE_EVALUATE_HPP

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "core/embedding.hpp"
#include "core/image.hpp"

namespace rgbt {

enum class DistanceMetric { Euclidean, Cosine };

struct RetrievalResult {
  // Per query: database row indices ranked best-first, length <= K.
  std::vector<std::vector<std::size_t>> ranked;
  bool k_clamped = false;
};

// Exact top-K retrieval; ties break toward the lower database index. An
// optional per-query excluded database row is removed from the candidate
// set entirely (use SIZE_MAX for "none").
RetrievalResult knn_retrieve(const EmbeddingSet& queries, const EmbeddingSet& db,
                             std::size_t k, DistanceMetric metric,
                             const std::vector<std::size_t>* excluded = nullptr);

// Positive sets by closed ball (<= radius). Geographic positions use 3D
// Euclidean meters; frame mode compares |index delta| where the index is
// positions[i][0] (or the row index when positions are absent). The query's
// paired database row (matching id) is excluded.
struct PositiveSets {
  std::vector<std::set<std::size_t>> per_query;
  std::vector<std::size_t> paired_db_index;  // SIZE_MAX when the query has no pair
  std::size_t empty_positive_queries = 0;
};

PositiveSets positives_from_radius(const EmbeddingSet& queries, const EmbeddingSet& db,
                                   double radius, bool frame_radius);

// Fraction of queries whose top-K hits intersect their positive set; queries
// with empty positive sets leave the denominator. Zero evaluable queries is
// an error.
double recall_at_k(const RetrievalResult& res,
                   const std::vector<std::set<std::size_t>>& positives, std::size_t k);

double weighted_mean_recall(const std::vector<std::pair<double, std::size_t>>& per_seq);

// Full cross-modal VPR protocol over per-sequence query/database sets.
struct VprSequenceReport {
  std::string name;
  std::size_t queries = 0;
  std::size_t evaluable = 0;
  std::size_t dropped = 0;  // empty positive set after paired-frame exclusion
  bool k_clamped = false;   // requested K exceeded the database size
  std::vector<std::pair<std::size_t, double>> recall_at;  // (K, recall)
};

struct VprReport {
  std::vector<VprSequenceReport> per_sequence;
  std::vector<std::pair<std::size_t, double>> weighted_mean;  // (K, recall)
  std::size_t dropped_queries = 0;
};

VprReport evaluate_vpr(const std::vector<std::string>& names,
                       const std::vector<EmbeddingSet>& queries,
                       const std::vector<EmbeddingSet>& dbs, double radius,
                       bool frame_radius, const std::vector<std::size_t>& ks,
                       DistanceMetric metric = DistanceMetric::Cosine);

// --- Segmentation ---------------------------------------------------------

struct MiouResult {
  std::vector<double> per_class_iou;  // NaN for classes absent from pred and gt
  std::vector<bool> present;
  double miou = 0.0;
};

inline constexpr int kNoIgnoreLabel = -1;

MiouResult miou(const ImageU8& pred_labels, const ImageU8& gt_labels, int classes,
                int ignore_label = kNoIgnoreLabel);

// Streaming confusion accumulator for directory-level evaluation.
class SegAccumulator {
 public:
  SegAccumulator(int classes, int ignore_label = kNoIgnoreLabel);
  void add(const ImageU8& pred_labels, const ImageU8& gt_labels);
  MiouResult result() const;

 private:
  int classes_;
  int ignore_label_;
  std::vector<std::int64_t> tp_, fp_, fn_;
};

// Soft-prediction Dice loss over classes present in the ground truth, with
// the analytic gradient with respect to the probabilities.
struct DiceResult {
  double loss = 0.0;
  std::vector<double> grad;  // same layout as probs (cells x classes)
};

DiceResult dice_loss(const std::vector<double>& probs,
                     const std::vector<double>& gt_onehot, std::size_t cells,
                     std::size_t classes, double epsilon, bool want_grad = true);

// --- Depth ------------------------------------------------------------------

struct DepthMetrics {
  double abs_rel = 0.0;
  double sq_rel = 0.0;
  double rmse = 0.0;
  double rmse_log = 0.0;
  std::size_t valid_pixels = 0;
  std::size_t clamped_predictions = 0;  // raised to the 1e-3 m floor before log
};

class DepthAccumulator {
 public:
  // Mask may be null: every finite gt > 0 pixel is evaluated.
  void add(const ImageF32& pred, const ImageF32& gt, const ImageF32* mask);
  DepthMetrics result() const;

 private:
  double sum_abs_rel_ = 0, sum_sq_rel_ = 0, sum_sq_ = 0, sum_sq_log_ = 0;
  std::size_t n_ = 0, clamped_ = 0;
};

DepthMetrics depth_metrics(const ImageF32& pred, const ImageF32& gt,
                           const ImageF32* mask = nullptr);

// --- Scaling study report ---------------------------------------------------

struct ScalingRun {
  std::string combo;  // e.g. "B+V+F"
  std::string task;
  double value = 0.0;
};

struct ScalingRow {
  std::string combo;
  double value = 0.0;
  std::optional<double> delta;  // vs previous combo for the same task
};

// Rows per task ordered by combo size then dataset order B, V, F, S, T.
std::vector<std::pair<std::string, std::vector<ScalingRow>>> scaling_report(
    const std::vector<ScalingRun>& runs);

}  // namespace rgbt

#endif
