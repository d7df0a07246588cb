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
#ifndef RGBT_CORE_CROSSMODAL_HPP
#define RGBT_CORE_CROSSMODAL_HPP

#include <cstdint>
#include <vector>

#include "core/embedding.hpp"
#include "core/evaluate.hpp"

namespace rgbt {

// Symmetric in-batch InfoNCE between student and teacher rows. The teacher
// is frozen: only the student gradient exists in the API.
struct InfoNceResult {
  double loss = 0.0;
  std::vector<double> grad_student;  // B x D, same layout as the input
};

// Rows are expected L2-normalized by the caller; tau scales the similarity
// logits. Needs at least two rows for in-batch negatives.
InfoNceResult infonce_loss(const std::vector<double>& student,
                           const std::vector<double>& teacher, std::size_t batch,
                           std::size_t dim, double tau, bool want_grad = true);

struct TripletResult {
  double loss = 0.0;
  std::vector<double> grad_anchor, grad_positive, grad_negative;
};

// loss = max(0, d(a,p) - d(a,n) + margin); zero subgradient in the inactive
// region and exactly at the hinge.
TripletResult triplet_margin_loss(const std::vector<double>& anchor,
                                  const std::vector<double>& positive,
                                  const std::vector<double>& negative, double margin,
                                  DistanceMetric distance, bool want_grad = true);

struct Triplet {
  std::size_t anchor_index = 0;
  std::size_t positive_index = 0;
  std::size_t negative_index = 0;
  Modality anchor_modality = Modality::Thermal;
};

struct MiningConfig {
  double radius = 0.0;
  std::size_t k_hard = 10;
  std::uint64_t seed = 0;
  bool frame_radius = false;  // forced; otherwise auto from positions
  DistanceMetric hard_metric = DistanceMetric::Euclidean;
};

struct MiningResult {
  std::vector<Triplet> triplets;
  std::size_t skipped_anchors = 0;  // no positive or no negative available
  bool used_frame_radius = false;
};

// Intra-dataset triplets with thermal anchors against the RGB set: positives
// within the radius (closed ball, paired frame excluded), negatives outside,
// hard negatives = the k_hard nearest negatives in embedding space. Each
// anchor draws from its own seeded substream, so results do not depend on
// anchor evaluation order.
MiningResult mine_triplets(const EmbeddingSet& rgb, const EmbeddingSet& thermal,
                           const MiningConfig& cfg);

// --- Toy distillation --------------------------------------------------------
// Desk-scale stand-in for the frozen-teacher training loop: a linear student
// over synthetic paired features, trained with InfoNCE and hand-derived
// gradients.

struct ToyDistillConfig {
  std::size_t latent_dim = 8;
  std::size_t feature_dim = 32;
  std::size_t train_pairs = 512;
  std::size_t val_pairs = 256;
  double noise = 0.01;
  double learning_rate = 0.5;
  std::size_t steps = 2000;
  std::size_t batch_size = 128;
  double tau = 0.07;
  std::uint64_t seed = 0;
  std::size_t eval_every = 100;
};

struct ToyDistillHistoryEntry {
  std::size_t step = 0;
  double loss = 0.0;
  double recall_at_1 = -1.0;  // -1 when not evaluated at this step
};

struct ToyDistillResult {
  std::vector<double> student_weights;  // feature_dim x feature_dim
  std::vector<ToyDistillHistoryEntry> history;
  double initial_recall_at_1 = 0.0;
  double final_recall_at_1 = 0.0;
};

ToyDistillResult toy_distill(const ToyDistillConfig& cfg);

}  // namespace rgbt

#endif
