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
#include "core/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

namespace rgbt {
namespace {

double row_distance(const double* a, const double* b, std::size_t dim,
                    DistanceMetric metric) {
  if (metric == DistanceMetric::Euclidean) {
    double sq = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      const double d = a[j] - b[j];
      sq += d * d;
    }
    return std::sqrt(sq);
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t j = 0; j < dim; ++j) {
    dot += a[j] * b[j];
    na += a[j] * a[j];
    nb += b[j] * b[j];
  }
  const double denom = std::sqrt(na) * std::sqrt(nb);
  if (denom == 0.0) return 1.0;  // zero vector: treat as orthogonal
  return 1.0 - dot / denom;
}

}  // namespace

RetrievalResult knn_retrieve(const EmbeddingSet& queries, const EmbeddingSet& db,
                             std::size_t k, DistanceMetric metric,
                             const std::vector<std::size_t>* excluded) {
  if (queries.dim != db.dim)
    fail(ErrorCode::InvalidArgument, "query/database dimension mismatch");
  if (k < 1) fail(ErrorCode::InvalidArgument, "K must be >= 1");
  if (excluded && excluded->size() != queries.count)
    fail(ErrorCode::InvalidArgument, "excluded list must have one entry per query");

  RetrievalResult res;
  if (k > db.count) {
    k = db.count;
    res.k_clamped = true;
  }
  res.ranked.resize(queries.count);
  std::vector<std::pair<double, std::size_t>> scored;
  for (std::size_t q = 0; q < queries.count; ++q) {
    const std::size_t skip = excluded ? (*excluded)[q] : SIZE_MAX;
    scored.clear();
    scored.reserve(db.count);
    for (std::size_t i = 0; i < db.count; ++i) {
      if (i == skip) continue;
      scored.emplace_back(row_distance(queries.row(q), db.row(i), db.dim, metric), i);
    }
    const std::size_t take = std::min(k, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + take, scored.end());
    res.ranked[q].reserve(take);
    for (std::size_t i = 0; i < take; ++i) res.ranked[q].push_back(scored[i].second);
  }
  return res;
}

PositiveSets positives_from_radius(const EmbeddingSet& queries, const EmbeddingSet& db,
                                   double radius, bool frame_radius) {
  if (!(radius > 0)) fail(ErrorCode::InvalidArgument, "positive radius must be > 0");
  if (!frame_radius && (!queries.has_positions() || !db.has_positions()))
    fail(ErrorCode::InvalidArgument,
         "geographic radius requires positions on both query and database sets");

  std::unordered_map<std::string, std::size_t> db_by_id;
  for (std::size_t i = 0; i < db.count; ++i) db_by_id.emplace(db.ids[i], i);

  PositiveSets out;
  out.per_query.resize(queries.count);
  out.paired_db_index.assign(queries.count, SIZE_MAX);
  for (std::size_t q = 0; q < queries.count; ++q) {
    auto it = db_by_id.find(queries.ids[q]);
    if (it != db_by_id.end()) out.paired_db_index[q] = it->second;
    auto& pos = out.per_query[q];
    for (std::size_t i = 0; i < db.count; ++i) {
      double dist;
      if (frame_radius) {
        const double qi = queries.has_positions() ? queries.positions[q][0]
                                                  : static_cast<double>(q);
        const double di = db.has_positions() ? db.positions[i][0] : static_cast<double>(i);
        dist = std::abs(qi - di);
      } else {
        const auto& a = queries.positions[q];
        const auto& b = db.positions[i];
        const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
        dist = std::sqrt(dx * dx + dy * dy + dz * dz);
      }
      if (dist <= radius && i != out.paired_db_index[q]) pos.insert(i);
    }
    if (pos.empty()) ++out.empty_positive_queries;
  }
  return out;
}

double recall_at_k(const RetrievalResult& res,
                   const std::vector<std::set<std::size_t>>& positives, std::size_t k) {
  if (k < 1) fail(ErrorCode::InvalidArgument, "K must be >= 1");
  if (res.ranked.size() != positives.size())
    fail(ErrorCode::InvalidArgument, "result/positive count mismatch");
  std::size_t evaluable = 0, hits = 0;
  for (std::size_t q = 0; q < res.ranked.size(); ++q) {
    if (positives[q].empty()) continue;
    ++evaluable;
    const std::size_t take = std::min(k, res.ranked[q].size());
    for (std::size_t i = 0; i < take; ++i) {
      if (positives[q].count(res.ranked[q][i])) {
        ++hits;
        break;
      }
    }
  }
  if (evaluable == 0)
    fail(ErrorCode::Numeric, "recall undefined: no query has a non-empty positive set");
  return static_cast<double>(hits) / static_cast<double>(evaluable);
}

double weighted_mean_recall(const std::vector<std::pair<double, std::size_t>>& per_seq) {
  if (per_seq.empty()) fail(ErrorCode::InvalidArgument, "no sequences to average");
  double num = 0.0;
  std::size_t den = 0;
  for (const auto& [recall, n] : per_seq) {
    if (n < 1) fail(ErrorCode::InvalidArgument, "sequence with zero queries");
    num += recall * static_cast<double>(n);
    den += n;
  }
  return num / static_cast<double>(den);
}

VprReport evaluate_vpr(const std::vector<std::string>& names,
                       const std::vector<EmbeddingSet>& queries,
                       const std::vector<EmbeddingSet>& dbs, double radius,
                       bool frame_radius, const std::vector<std::size_t>& ks,
                       DistanceMetric metric) {
  if (queries.size() != dbs.size() || queries.size() != names.size())
    fail(ErrorCode::InvalidArgument, "per-sequence query/database lists must align");
  if (queries.empty()) fail(ErrorCode::InvalidArgument, "no sequences to evaluate");
  if (ks.empty()) fail(ErrorCode::InvalidArgument, "need at least one K");
  const std::size_t max_k = *std::max_element(ks.begin(), ks.end());

  VprReport report;
  for (std::size_t s = 0; s < queries.size(); ++s) {
    try {
      const auto positives =
          positives_from_radius(queries[s], dbs[s], radius, frame_radius);
      // The paired RGB frame leaves the candidate set, not just the positives.
      const auto res =
          knn_retrieve(queries[s], dbs[s], max_k, metric, &positives.paired_db_index);
      VprSequenceReport seq;
      seq.name = names[s];
      seq.queries = queries[s].count;
      seq.dropped = positives.empty_positive_queries;
      seq.evaluable = seq.queries - seq.dropped;
      seq.k_clamped = res.k_clamped;
      for (std::size_t k : ks)
        seq.recall_at.emplace_back(k, recall_at_k(res, positives.per_query, k));
      report.dropped_queries += seq.dropped;
      report.per_sequence.push_back(std::move(seq));
    } catch (const Error& e) {
      fail(e.code(), "sequence '" + names[s] + "': " + e.what());
    }
  }
  for (std::size_t ki = 0; ki < ks.size(); ++ki) {
    std::vector<std::pair<double, std::size_t>> per_seq;
    for (const auto& seq : report.per_sequence)
      if (seq.evaluable > 0) per_seq.emplace_back(seq.recall_at[ki].second, seq.evaluable);
    report.weighted_mean.emplace_back(ks[ki], weighted_mean_recall(per_seq));
  }
  return report;
}

SegAccumulator::SegAccumulator(int classes, int ignore_label)
    : classes_(classes), ignore_label_(ignore_label),
      tp_(classes, 0), fp_(classes, 0), fn_(classes, 0) {
  if (classes < 1) fail(ErrorCode::InvalidArgument, "need at least one class");
}

void SegAccumulator::add(const ImageU8& pred_labels, const ImageU8& gt_labels) {
  if (!pred_labels.same_size(gt_labels) || pred_labels.channels != 1 ||
      gt_labels.channels != 1)
    fail(ErrorCode::InvalidArgument, "label map shape mismatch");
  for (std::size_t i = 0; i < pred_labels.data.size(); ++i) {
    const int p = pred_labels.data[i];
    const int g = gt_labels.data[i];
    if (g == ignore_label_) continue;
    if (p >= classes_ || g >= classes_)
      fail(ErrorCode::InvalidArgument, "label exceeds class count");
    if (p == g) {
      tp_[p]++;
    } else {
      fp_[p]++;
      fn_[g]++;
    }
  }
}

MiouResult SegAccumulator::result() const {
  MiouResult r;
  r.per_class_iou.assign(classes_, std::nan(""));
  r.present.assign(classes_, false);
  double sum = 0.0;
  std::size_t counted = 0;
  for (int c = 0; c < classes_; ++c) {
    const std::int64_t denom = tp_[c] + fp_[c] + fn_[c];
    if (denom == 0) continue;  // absent from both pred and gt
    r.present[c] = true;
    r.per_class_iou[c] = static_cast<double>(tp_[c]) / static_cast<double>(denom);
    sum += r.per_class_iou[c];
    ++counted;
  }
  r.miou = counted ? sum / static_cast<double>(counted) : 0.0;
  return r;
}

MiouResult miou(const ImageU8& pred_labels, const ImageU8& gt_labels, int classes,
                int ignore_label) {
  SegAccumulator acc(classes, ignore_label);
  acc.add(pred_labels, gt_labels);
  return acc.result();
}

DiceResult dice_loss(const std::vector<double>& probs,
                     const std::vector<double>& gt_onehot, std::size_t cells,
                     std::size_t classes, double epsilon, bool want_grad) {
  if (probs.size() != cells * classes || gt_onehot.size() != cells * classes)
    fail(ErrorCode::InvalidArgument, "dice_loss shape mismatch");
  if (!(epsilon > 0)) fail(ErrorCode::InvalidArgument, "smoothing must be positive");

  std::vector<double> inter(classes, 0.0), psum(classes, 0.0), gsum(classes, 0.0);
  for (std::size_t i = 0; i < cells; ++i) {
    for (std::size_t c = 0; c < classes; ++c) {
      const double p = probs[i * classes + c];
      const double g = gt_onehot[i * classes + c];
      inter[c] += p * g;
      psum[c] += p;
      gsum[c] += g;
    }
  }
  std::vector<std::size_t> active;
  for (std::size_t c = 0; c < classes; ++c)
    if (gsum[c] > 0.0) active.push_back(c);
  if (active.empty())
    fail(ErrorCode::InvalidArgument, "ground truth contains no class");

  DiceResult out;
  double dice_sum = 0.0;
  for (std::size_t c : active)
    dice_sum += (2.0 * inter[c] + epsilon) / (psum[c] + gsum[c] + epsilon);
  out.loss = 1.0 - dice_sum / static_cast<double>(active.size());

  if (want_grad) {
    out.grad.assign(cells * classes, 0.0);
    const double scale = -1.0 / static_cast<double>(active.size());
    for (std::size_t c : active) {
      const double denom = psum[c] + gsum[c] + epsilon;
      const double num = 2.0 * inter[c] + epsilon;
      for (std::size_t i = 0; i < cells; ++i) {
        const double g = gt_onehot[i * classes + c];
        out.grad[i * classes + c] = scale * (2.0 * g * denom - num) / (denom * denom);
      }
    }
  }
  return out;
}

void DepthAccumulator::add(const ImageF32& pred, const ImageF32& gt,
                           const ImageF32* mask) {
  if (!pred.same_size(gt)) fail(ErrorCode::InvalidArgument, "depth raster size mismatch");
  if (mask && !mask->same_size(gt))
    fail(ErrorCode::InvalidArgument, "depth mask size mismatch");
  constexpr double kMinDepth = 1e-3;
  for (std::size_t i = 0; i < gt.data.size(); ++i) {
    const double g = gt.data[i];
    if (!(std::isfinite(g) && g > 0)) continue;
    if (mask && !(mask->data[i] > 0)) continue;
    double p = pred.data[i];
    if (!std::isfinite(p)) fail(ErrorCode::InvalidArgument, "non-finite depth prediction");
    const double err = p - g;
    sum_abs_rel_ += std::abs(err) / g;
    sum_sq_rel_ += err * err / g;
    sum_sq_ += err * err;
    if (p < kMinDepth) {
      p = kMinDepth;
      ++clamped_;
    }
    const double le = std::log(p) - std::log(g);
    sum_sq_log_ += le * le;
    ++n_;
  }
}

DepthMetrics DepthAccumulator::result() const {
  if (n_ == 0) fail(ErrorCode::Numeric, "no valid depth pixels to evaluate");
  DepthMetrics m;
  const double n = static_cast<double>(n_);
  m.abs_rel = sum_abs_rel_ / n;
  m.sq_rel = sum_sq_rel_ / n;
  m.rmse = std::sqrt(sum_sq_ / n);
  m.rmse_log = std::sqrt(sum_sq_log_ / n);
  m.valid_pixels = n_;
  m.clamped_predictions = clamped_;
  return m;
}

DepthMetrics depth_metrics(const ImageF32& pred, const ImageF32& gt,
                           const ImageF32* mask) {
  DepthAccumulator acc;
  acc.add(pred, gt, mask);
  return acc.result();
}

namespace {

// Combos order by size, then componentwise dataset order B < V < F < S < T.
std::vector<int> combo_key(const std::string& combo) {
  static const std::string alphabet = "BVFST";
  std::vector<int> key;
  std::string part;
  for (std::size_t i = 0; i <= combo.size(); ++i) {
    if (i == combo.size() || combo[i] == '+') {
      if (part.size() != 1)
        fail(ErrorCode::InvalidArgument, "bad combo label: " + combo);
      const auto pos = alphabet.find(part[0]);
      if (pos == std::string::npos)
        fail(ErrorCode::InvalidArgument, "combo letter outside B/V/F/S/T: " + combo);
      key.push_back(static_cast<int>(pos));
      part.clear();
    } else {
      part.push_back(combo[i]);
    }
  }
  if (key.empty()) fail(ErrorCode::InvalidArgument, "empty combo label");
  std::sort(key.begin(), key.end());
  if (std::adjacent_find(key.begin(), key.end()) != key.end())
    fail(ErrorCode::InvalidArgument, "combo repeats a dataset: " + combo);
  return key;
}

}  // namespace

std::vector<std::pair<std::string, std::vector<ScalingRow>>> scaling_report(
    const std::vector<ScalingRun>& runs) {
  std::map<std::string, std::vector<std::pair<std::vector<int>, const ScalingRun*>>> by_task;
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& run : runs) {
    if (!seen.emplace(run.combo, run.task).second)
      fail(ErrorCode::InvalidArgument,
           "duplicate (combo, task) entry: " + run.combo + "/" + run.task);
    by_task[run.task].emplace_back(combo_key(run.combo), &run);
  }
  std::vector<std::pair<std::string, std::vector<ScalingRow>>> out;
  for (auto& [task, rows] : by_task) {
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
      if (a.first.size() != b.first.size()) return a.first.size() < b.first.size();
      return a.first < b.first;
    });
    std::vector<ScalingRow> ordered;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      ScalingRow row;
      row.combo = rows[i].second->combo;
      row.value = rows[i].second->value;
      if (i > 0) row.delta = row.value - rows[i - 1].second->value;
      ordered.push_back(std::move(row));
    }
    out.emplace_back(task, std::move(ordered));
  }
  return out;
}

}  // namespace rgbt
