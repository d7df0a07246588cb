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
#include "core/crossmodal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <unordered_map>

namespace rgbt {

InfoNceResult infonce_loss(const std::vector<double>& student,
                           const std::vector<double>& teacher, std::size_t batch,
                           std::size_t dim, double tau, bool want_grad) {
  if (batch < 2)
    fail(ErrorCode::InvalidArgument, "InfoNCE needs at least 2 rows for negatives");
  if (!(tau > 0)) fail(ErrorCode::InvalidArgument, "temperature must be positive");
  if (student.size() != batch * dim || teacher.size() != batch * dim)
    fail(ErrorCode::InvalidArgument, "InfoNCE batch shape mismatch");

  const std::size_t B = batch;
  std::vector<double> S(B * B);
  for (std::size_t i = 0; i < B; ++i)
    for (std::size_t j = 0; j < B; ++j) {
      double dot = 0.0;
      for (std::size_t d = 0; d < dim; ++d)
        dot += student[i * dim + d] * teacher[j * dim + d];
      S[i * B + j] = dot / tau;
    }

  // Row softmax P (students against the teacher bank) and column softmax Q
  // (teachers against the student bank), both with max-shift stabilization.
  std::vector<double> P(B * B), Q(B * B);
  double loss = 0.0;
  for (std::size_t i = 0; i < B; ++i) {
    double mx = S[i * B];
    for (std::size_t j = 1; j < B; ++j) mx = std::max(mx, S[i * B + j]);
    double sum = 0.0;
    for (std::size_t j = 0; j < B; ++j) {
      P[i * B + j] = std::exp(S[i * B + j] - mx);
      sum += P[i * B + j];
    }
    for (std::size_t j = 0; j < B; ++j) P[i * B + j] /= sum;
    loss += std::log(sum) + mx - S[i * B + i];
  }
  for (std::size_t j = 0; j < B; ++j) {
    double mx = S[j];
    for (std::size_t i = 1; i < B; ++i) mx = std::max(mx, S[i * B + j]);
    double sum = 0.0;
    for (std::size_t i = 0; i < B; ++i) {
      Q[i * B + j] = std::exp(S[i * B + j] - mx);
      sum += Q[i * B + j];
    }
    for (std::size_t i = 0; i < B; ++i) Q[i * B + j] /= sum;
    loss += std::log(sum) + mx - S[j * B + j];
  }

  InfoNceResult result;
  result.loss = loss / (2.0 * static_cast<double>(B));
  if (want_grad) {
    result.grad_student.assign(B * dim, 0.0);
    const double scale = 1.0 / (2.0 * static_cast<double>(B) * tau);
    for (std::size_t i = 0; i < B; ++i) {
      for (std::size_t j = 0; j < B; ++j) {
        double g = P[i * B + j] + Q[i * B + j];
        if (i == j) g -= 2.0;
        const double c = scale * g;
        for (std::size_t d = 0; d < dim; ++d)
          result.grad_student[i * dim + d] += c * teacher[j * dim + d];
      }
    }
  }
  return result;
}

namespace {

double vec_distance(const std::vector<double>& a, const std::vector<double>& b,
                    DistanceMetric metric) {
  double sq = 0.0, dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sq += d * d;
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (metric == DistanceMetric::Euclidean) return std::sqrt(sq);
  const double denom = std::sqrt(na) * std::sqrt(nb);
  return denom == 0.0 ? 1.0 : 1.0 - dot / denom;
}

// d/dx of the chosen distance d(x, y), with the zero subgradient at
// coincident points.
std::vector<double> distance_grad_first(const std::vector<double>& x,
                                        const std::vector<double>& y,
                                        DistanceMetric metric) {
  const std::size_t n = x.size();
  std::vector<double> g(n, 0.0);
  if (metric == DistanceMetric::Euclidean) {
    double d = vec_distance(x, y, metric);
    if (d == 0.0) return g;
    for (std::size_t i = 0; i < n; ++i) g[i] = (x[i] - y[i]) / d;
    return g;
  }
  double dot = 0.0, nx = 0.0, ny = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    dot += x[i] * y[i];
    nx += x[i] * x[i];
    ny += y[i] * y[i];
  }
  const double lx = std::sqrt(nx), ly = std::sqrt(ny);
  if (lx == 0.0 || ly == 0.0) return g;
  for (std::size_t i = 0; i < n; ++i)
    g[i] = -(y[i] / (lx * ly) - dot * x[i] / (nx * lx * ly));
  return g;
}

}  // namespace

TripletResult triplet_margin_loss(const std::vector<double>& anchor,
                                  const std::vector<double>& positive,
                                  const std::vector<double>& negative, double margin,
                                  DistanceMetric distance, bool want_grad) {
  if (anchor.size() != positive.size() || anchor.size() != negative.size())
    fail(ErrorCode::InvalidArgument, "triplet dimension mismatch");
  if (margin < 0) fail(ErrorCode::InvalidArgument, "margin must be non-negative");
  for (double v : anchor)
    if (!std::isfinite(v)) fail(ErrorCode::InvalidArgument, "non-finite triplet input");

  const double d_ap = vec_distance(anchor, positive, distance);
  const double d_an = vec_distance(anchor, negative, distance);
  const double hinge = d_ap - d_an + margin;

  TripletResult out;
  const std::size_t n = anchor.size();
  if (hinge <= 0.0) {  // inactive (the hinge point keeps the zero subgradient)
    out.loss = 0.0;
    if (want_grad) {
      out.grad_anchor.assign(n, 0.0);
      out.grad_positive.assign(n, 0.0);
      out.grad_negative.assign(n, 0.0);
    }
    return out;
  }
  out.loss = hinge;
  if (want_grad) {
    auto g_ap_a = distance_grad_first(anchor, positive, distance);
    auto g_an_a = distance_grad_first(anchor, negative, distance);
    auto g_ap_p = distance_grad_first(positive, anchor, distance);
    auto g_an_n = distance_grad_first(negative, anchor, distance);
    out.grad_anchor.resize(n);
    out.grad_positive.resize(n);
    out.grad_negative.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      out.grad_anchor[i] = g_ap_a[i] - g_an_a[i];
      out.grad_positive[i] = g_ap_p[i];
      out.grad_negative[i] = -g_an_n[i];
    }
  }
  return out;
}

namespace {

// Per-anchor substream: results must not depend on anchor evaluation order.
std::mt19937_64 anchor_rng(std::uint64_t seed, std::size_t anchor) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(anchor) + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return std::mt19937_64(z ^ (z >> 31));
}

}  // namespace

MiningResult mine_triplets(const EmbeddingSet& rgb, const EmbeddingSet& thermal,
                           const MiningConfig& cfg) {
  if (!(cfg.radius > 0)) fail(ErrorCode::InvalidArgument, "mining radius must be > 0");
  if (cfg.k_hard < 1) fail(ErrorCode::InvalidArgument, "k_hard must be >= 1");
  if (rgb.dim != thermal.dim)
    fail(ErrorCode::InvalidArgument, "rgb/thermal embedding dimension mismatch");
  rgb.validate();
  thermal.validate();

  MiningResult result;
  result.used_frame_radius =
      cfg.frame_radius || !(rgb.has_positions() && thermal.has_positions());

  std::unordered_map<std::string, std::size_t> rgb_by_id;
  for (std::size_t i = 0; i < rgb.count; ++i) rgb_by_id.emplace(rgb.ids[i], i);

  auto anchor_pos_scalar = [&](std::size_t a) {
    return thermal.has_positions() ? thermal.positions[a][0] : static_cast<double>(a);
  };
  auto db_pos_scalar = [&](std::size_t i) {
    return rgb.has_positions() ? rgb.positions[i][0] : static_cast<double>(i);
  };

  std::vector<double> anchor_row(thermal.dim), cand_row(rgb.dim);
  for (std::size_t a = 0; a < thermal.count; ++a) {
    std::size_t paired = SIZE_MAX;
    if (auto it = rgb_by_id.find(thermal.ids[a]); it != rgb_by_id.end())
      paired = it->second;
    else if (rgb.count == thermal.count)
      paired = a;  // index pairing fallback for id-disjoint sets

    std::vector<std::size_t> positives, negatives;
    for (std::size_t i = 0; i < rgb.count; ++i) {
      if (i == paired) continue;  // the anchor's own frame is neither pos nor neg
      double dist;
      if (result.used_frame_radius) {
        dist = std::abs(anchor_pos_scalar(a) - db_pos_scalar(i));
      } else {
        const auto& p = thermal.positions[a];
        const auto& q = rgb.positions[i];
        const double dx = p[0] - q[0], dy = p[1] - q[1], dz = p[2] - q[2];
        dist = std::sqrt(dx * dx + dy * dy + dz * dz);
      }
      (dist <= cfg.radius ? positives : negatives).push_back(i);
    }
    if (positives.empty() || negatives.empty()) {
      ++result.skipped_anchors;
      continue;
    }

    std::copy_n(thermal.row(a), thermal.dim, anchor_row.begin());
    std::vector<std::pair<double, std::size_t>> scored;
    scored.reserve(negatives.size());
    for (std::size_t i : negatives) {
      std::copy_n(rgb.row(i), rgb.dim, cand_row.begin());
      scored.emplace_back(vec_distance(anchor_row, cand_row, cfg.hard_metric), i);
    }
    const std::size_t take = std::min(cfg.k_hard, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + take, scored.end());

    auto rng = anchor_rng(cfg.seed, a);
    const std::size_t pos_pick = positives[rng() % positives.size()];
    const std::size_t neg_pick = scored[rng() % take].second;
    result.triplets.push_back({a, pos_pick, neg_pick, Modality::Thermal});
  }
  return result;
}

namespace {

// Self-contained Gaussian source so histories are stable for a given build.
class GaussianRng {
 public:
  explicit GaussianRng(std::uint64_t seed) : gen_(seed) {}

  double uniform() {
    return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  std::uint64_t integer() { return gen_(); }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

void matvec(const std::vector<double>& M, std::size_t rows, std::size_t cols,
            const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r) {
    double acc = 0.0;
    for (std::size_t c = 0; c < cols; ++c) acc += M[r * cols + c] * x[c];
    y[r] = acc;
  }
}

double cross_modal_recall_at_1(const std::vector<double>& student_rows,
                               const std::vector<double>& teacher_rows,
                               std::size_t count, std::size_t dim) {
  EmbeddingSet q, db;
  q.count = db.count = count;
  q.dim = db.dim = dim;
  q.data = student_rows;
  db.data = teacher_rows;
  q.modality = Modality::Thermal;
  db.modality = Modality::Rgb;
  for (std::size_t i = 0; i < count; ++i) {
    q.ids.push_back("v" + std::to_string(i));
    db.ids.push_back("v" + std::to_string(i));
  }
  const auto res = knn_retrieve(q, db, 1, DistanceMetric::Cosine);
  std::vector<std::set<std::size_t>> positives(count);
  for (std::size_t i = 0; i < count; ++i) positives[i].insert(i);
  return recall_at_k(res, positives, 1);
}

}  // namespace

ToyDistillResult toy_distill(const ToyDistillConfig& cfg) {
  if (cfg.latent_dim < 1 || cfg.feature_dim < 1)
    fail(ErrorCode::InvalidArgument, "dimensions must be >= 1");
  if (cfg.train_pairs < 2 || cfg.val_pairs < 1)
    fail(ErrorCode::InvalidArgument, "need at least 2 train and 1 val pairs");
  if (cfg.batch_size < 2 || cfg.batch_size > cfg.train_pairs)
    fail(ErrorCode::InvalidArgument, "batch size must be in [2, train_pairs]");

  const std::size_t L = cfg.latent_dim, D = cfg.feature_dim;
  GaussianRng rng(cfg.seed * 0x9e3779b97f4a7c15ULL + 1);

  // Shared latent scene vectors; teacher and thermal views are independent
  // linear projections plus isotropic noise.
  const double proj_scale = 1.0 / std::sqrt(static_cast<double>(L));
  std::vector<double> A(D * L), Bm(D * L);
  for (auto& v : A) v = rng.gaussian() * proj_scale;
  for (auto& v : Bm) v = rng.gaussian() * proj_scale;

  const std::size_t n_train = cfg.train_pairs, n_val = cfg.val_pairs;
  std::vector<double> teacher_train(n_train * D), thermal_train(n_train * D);
  std::vector<double> teacher_val(n_val * D), thermal_val(n_val * D);
  std::vector<double> z(L);
  auto synthesize = [&](std::vector<double>& teacher, std::vector<double>& thermal,
                        std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      for (auto& v : z) v = rng.gaussian();
      matvec(A, D, L, z.data(), teacher.data() + i * D);
      matvec(Bm, D, L, z.data(), thermal.data() + i * D);
      for (std::size_t d = 0; d < D; ++d) {
        teacher[i * D + d] += cfg.noise * rng.gaussian();
        thermal[i * D + d] += cfg.noise * rng.gaussian();
      }
    }
  };
  synthesize(teacher_train, thermal_train, n_train);
  synthesize(teacher_val, thermal_val, n_val);

  std::vector<double> teacher_train_n = teacher_train;
  l2_normalize_rows(teacher_train_n, n_train, D);

  std::vector<double> W(D * D);
  const double init_scale = 1.0 / std::sqrt(static_cast<double>(D));
  for (auto& v : W) v = rng.gaussian() * init_scale;

  auto val_recall = [&](const std::vector<double>& weights) {
    std::vector<double> student(n_val * D);
    for (std::size_t i = 0; i < n_val; ++i)
      matvec(weights, D, D, thermal_val.data() + i * D, student.data() + i * D);
    return cross_modal_recall_at_1(student, teacher_val, n_val, D);
  };

  ToyDistillResult result;
  result.initial_recall_at_1 = val_recall(W);

  std::vector<std::size_t> order(n_train);
  std::iota(order.begin(), order.end(), 0);
  const std::size_t Bsz = cfg.batch_size;
  std::vector<double> batch_student(Bsz * D), batch_teacher(Bsz * D);
  std::vector<double> batch_u(Bsz * D), grad_w(D * D);
  std::vector<double> u_norm(Bsz);

  for (std::size_t step = 0; step < cfg.steps; ++step) {
    // Seeded partial Fisher-Yates draw without replacement.
    for (std::size_t i = 0; i < Bsz; ++i) {
      const std::size_t j = i + rng.integer() % (n_train - i);
      std::swap(order[i], order[j]);
    }

    for (std::size_t i = 0; i < Bsz; ++i) {
      const std::size_t idx = order[i];
      matvec(W, D, D, thermal_train.data() + idx * D, batch_u.data() + i * D);
      double sq = 0.0;
      for (std::size_t d = 0; d < D; ++d) sq += batch_u[i * D + d] * batch_u[i * D + d];
      u_norm[i] = std::sqrt(sq);
      const double inv = u_norm[i] > 0 ? 1.0 / u_norm[i] : 0.0;
      for (std::size_t d = 0; d < D; ++d)
        batch_student[i * D + d] = batch_u[i * D + d] * inv;
      std::copy_n(teacher_train_n.data() + idx * D, D, batch_teacher.data() + i * D);
    }

    auto nce = infonce_loss(batch_student, batch_teacher, Bsz, D, cfg.tau);
    if (!std::isfinite(nce.loss))
      fail(ErrorCode::Numeric, "toy distillation diverged at step " + std::to_string(step));

    // Chain through the row normalization, then into W.
    std::fill(grad_w.begin(), grad_w.end(), 0.0);
    for (std::size_t i = 0; i < Bsz; ++i) {
      if (u_norm[i] == 0.0) continue;
      const double* g = nce.grad_student.data() + i * D;
      const double* s = batch_student.data() + i * D;
      double gs = 0.0;
      for (std::size_t d = 0; d < D; ++d) gs += g[d] * s[d];
      const std::size_t idx = order[i];
      const double* x = thermal_train.data() + idx * D;
      for (std::size_t r = 0; r < D; ++r) {
        const double gu = (g[r] - gs * s[r]) / u_norm[i];
        for (std::size_t c = 0; c < D; ++c) grad_w[r * D + c] += gu * x[c];
      }
    }
    for (std::size_t i = 0; i < W.size(); ++i) W[i] -= cfg.learning_rate * grad_w[i];

    ToyDistillHistoryEntry entry;
    entry.step = step + 1;
    entry.loss = nce.loss;
    if (cfg.eval_every > 0 &&
        ((step + 1) % cfg.eval_every == 0 || step + 1 == cfg.steps))
      entry.recall_at_1 = val_recall(W);
    result.history.push_back(entry);
  }

  result.student_weights = std::move(W);
  result.final_recall_at_1 =
      result.history.empty() ? result.initial_recall_at_1
                             : val_recall(result.student_weights);
  return result;
}

}  // namespace rgbt
