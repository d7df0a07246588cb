// Acceptance suite: one line per criterion, pass/fail with timing. Exits
// nonzero if any criterion fails.

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include "core/crossmodal.hpp"
#include "core/dataset.hpp"
#include "core/evaluate.hpp"
#include "core/geometry.hpp"
#include "core/registration.hpp"
#include "core/thermal.hpp"
#include "oracles.hpp"

using namespace rgbt;

namespace {

int g_failures = 0;

class Criterion {
 public:
  Criterion(int index, const std::string& name)
      : index_(index), name_(name), start_(std::chrono::steady_clock::now()) {}

  void expect(bool ok, const std::string& what) {
    if (!ok && detail_.empty()) detail_ = what;
    ok_ = ok_ && ok;
  }

  ~Criterion() {
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
            .count();
    std::ostringstream line;
    line << (ok_ ? "PASS" : "FAIL") << " criterion " << index_ << ": " << name_ << " ("
         << seconds << " s)";
    if (!ok_) {
      line << " -- " << detail_;
      ++g_failures;
    }
    std::cout << line.str() << std::endl;
  }

 private:
  int index_;
  std::string name_;
  bool ok_ = true;
  std::string detail_;
  std::chrono::steady_clock::time_point start_;
};

Mat3 rotation_zyx(double rx, double ry, double rz) {
  auto axis = [](int i, double a) {
    Mat3 R;
    const double c = std::cos(a), s = std::sin(a);
    if (i == 0) R.m = {1, 0, 0, 0, c, -s, 0, s, c};
    if (i == 1) R.m = {c, 0, s, 0, 1, 0, -s, 0, c};
    if (i == 2) R.m = {c, -s, 0, s, c, 0, 0, 0, 1};
    return R;
  };
  return axis(2, rz) * (axis(1, ry) * axis(0, rx));
}

void criterion_1_geometry_roundtrip() {
  Criterion crit(1, "geometry round-trip and isometry within 1e-9");
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> focal(80.0, 900.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> depth_d(0.05, 80.0);
  std::uniform_real_distribution<double> angle(-3.0, 3.0);
  std::uniform_real_distribution<double> trans(-5.0, 5.0);
  std::uniform_real_distribution<double> coord(-30.0, 30.0);

  for (int model = 0; model < 10; ++model) {
    CameraModel cam;
    cam.fx = focal(rng);
    cam.fy = focal(rng);
    cam.width = 320 + static_cast<int>(rng() % 1600);
    cam.height = 240 + static_cast<int>(rng() % 1200);
    cam.cx = cam.width * (0.35 + 0.3 * unit(rng));
    cam.cy = cam.height * (0.35 + 0.3 * unit(rng));
    for (int i = 0; i < 1000; ++i) {
      const Pixel p{unit(rng) * (cam.width - 1), unit(rng) * (cam.height - 1)};
      const double d = depth_d(rng);
      const auto proj = project(backproject(p, d, cam), cam);
      crit.expect(std::abs(proj.pixel.u - p.u) < 1e-9 &&
                      std::abs(proj.pixel.v - p.v) < 1e-9 &&
                      std::abs(proj.depth - d) < 1e-9,
                  "projection round-trip exceeded 1e-9");
    }
  }

  for (int i = 0; i < 10000; ++i) {
    RigidTransform T;
    T.rotation = rotation_zyx(angle(rng), angle(rng), angle(rng));
    T.translation = {trans(rng), trans(rng), trans(rng)};
    const Vec3 a{coord(rng), coord(rng), coord(rng)};
    const Vec3 b{coord(rng), coord(rng), coord(rng)};
    const double before = norm(a - b);
    const double after = norm(transform_point(T, a) - transform_point(T, b));
    crit.expect(std::abs(before - after) < 1e-9, "isometry exceeded 1e-9");
    const Vec3 back = transform_point(invert(T), transform_point(T, a));
    crit.expect(norm(back - a) < 1e-9, "invert round-trip exceeded 1e-9");
  }
}

struct TwoPlaneScene {
  ImageU8 rgb;
  ImageF32 depth;
  std::uint8_t near_value = 200, far_value = 60;
};

TwoPlaneScene make_two_plane_scene(std::mt19937_64& rng) {
  TwoPlaneScene scene{ImageU8(64, 64, 1), ImageF32(64, 64, 1)};
  const int bx = static_cast<int>(rng() % 30);
  const int by = static_cast<int>(rng() % 30);
  const int bw = 8 + static_cast<int>(rng() % 20);
  const int bh = 8 + static_cast<int>(rng() % 20);
  for (int y = 0; y < 64; ++y)
    for (int x = 0; x < 64; ++x) {
      const bool near = x >= bx && x < bx + bw && y >= by && y < by + bh;
      scene.rgb.at(x, y) = near ? scene.near_value : scene.far_value;
      scene.depth.at(x, y) = near ? 2.0f : 5.0f;
    }
  return scene;
}

void criterion_2_registration_oracle() {
  Criterion crit(2, "registration matches sorted-depth painter oracle on 20 rigs");
  std::mt19937_64 rng(22);
  CameraModel cam;
  cam.fx = cam.fy = 48;
  cam.cx = cam.cy = 31.5;
  cam.width = cam.height = 64;

  for (int rig = 0; rig < 20; ++rig) {
    auto scene = make_two_plane_scene(rng);
    RigidTransform T;
    T.rotation = rotation_zyx(0.015 * (static_cast<double>(rng() % 200) / 100.0 - 1.0),
                              0.015 * (static_cast<double>(rng() % 200) / 100.0 - 1.0),
                              0.01 * (static_cast<double>(rng() % 200) / 100.0 - 1.0));
    T.translation = {0.06 * (static_cast<double>(rng() % 200) / 100.0 - 1.0),
                     0.06 * (static_cast<double>(rng() % 200) / 100.0 - 1.0),
                     0.04 * (static_cast<double>(rng() % 200) / 100.0 - 1.0)};
    ImageU8 thermal(64, 64, 1, 20);
    auto pair = register_pair(scene.rgb, scene.depth, cam, T, cam, thermal, 0.01);

    auto samples = lift_rgb(scene.depth, cam, T, cam, scene.rgb);
    std::vector<oracle::PainterSample> ps;
    ps.reserve(samples.size());
    for (const auto& s : samples)
      ps.push_back({s.u, s.v, s.depth, {s.payload[0], 0, 0}});
    auto canvas = oracle::painter_splat(ps, 64, 64);

    for (int y = 0; y < 64; ++y)
      for (int x = 0; x < 64; ++x) {
        if (pair.mask.at(x, y) <= 0.0f) continue;
        const std::size_t p = static_cast<std::size_t>(y) * 64 + x;
        crit.expect(canvas.defined[p] == 1, "implementation filled an untouched pixel");
        const auto want = static_cast<std::uint8_t>(canvas.payload[p][0]);
        crit.expect(pair.warped_rgb.at(x, y) == want,
                    "payload mismatch against painter oracle");
        // Occlusion soundness: a pixel owned by the near plane never carries
        // far-plane payload and vice versa.
        if (canvas.depth[p] < 3.0)
          crit.expect(pair.warped_rgb.at(x, y) != scene.far_value,
                      "occluded far plane leaked through");
      }

    // Identity rig on the same scene is an exact identity warp.
    auto id_pair = register_pair(scene.rgb, scene.depth, cam,
                                 RigidTransform::identity(), cam, thermal, 0.01);
    for (int y = 0; y < 64; ++y)
      for (int x = 0; x < 64; ++x) {
        crit.expect(id_pair.mask.at(x, y) > 0.0f, "identity warp left holes");
        crit.expect(id_pair.warped_rgb.at(x, y) == scene.rgb.at(x, y),
                    "identity warp changed a payload");
      }
  }
}

void criterion_3_planar_shift() {
  Criterion crit(3, "translation-only rig shifts samples by fy*h/d within 1e-6");
  CameraModel cam;
  cam.fx = 55;
  cam.fy = 63;
  cam.cx = 31.5;
  cam.cy = 23.5;
  cam.width = 64;
  cam.height = 48;
  const double h = 0.05, d = 2.5;
  ImageU8 rgb(64, 48, 1, 100);
  ImageF32 depth(64, 48, 1, static_cast<float>(d));
  RigidTransform T;
  T.translation = {0, -h, 0};
  auto samples = lift_rgb(depth, cam, T, cam, rgb);
  crit.expect(!samples.empty(), "no samples survived");

  // Thermal below RGB moves content up: every sample keeps its u and gains
  // v = y - fy*h/d; rows shifted beyond the top splat margin are culled.
  const double magnitude = cam.fy * h / d;
  std::size_t i = 0;
  bool aligned = true;
  for (int y = 0; y < 48; ++y) {
    const double expected_v = y - magnitude;
    if (expected_v <= -1.0 || expected_v >= 48.0) continue;
    for (int x = 0; x < 64; ++x, ++i) {
      if (i >= samples.size()) {
        aligned = false;
        break;
      }
      crit.expect(std::abs(samples[i].u - x) < 1e-6, "u coordinate moved");
      crit.expect(std::abs(samples[i].v - expected_v) < 1e-6,
                  "v shift differs from fy*h/d");
      crit.expect(std::abs(std::abs(samples[i].v - y) - magnitude) < 1e-6,
                  "shift magnitude differs from fy*h/d");
    }
  }
  crit.expect(aligned && i == samples.size(), "sample count does not match the cull rule");
}

void criterion_4_thermal_bit_equality() {
  Criterion crit(4, "thermal pipeline bit-equal to straight-line references (50 frames)");
  std::mt19937_64 rng(44);
  ThermalPipelineConfig cfg;  // 8x8 tiles, clip 2.0, radius 4, sigmas 25/5
  for (int frame = 0; frame < 50; ++frame) {
    ImageU16 img(128, 128, 1);
    for (auto& v : img.data) v = static_cast<std::uint16_t>(rng());
    const auto got = thermal_to_8bit(img, cfg);
    const auto want = oracle::bilateral_ref(
        oracle::clahe_ref(oracle::minmax_ref(img.data), 128, 128, cfg.clahe.tiles_x,
                          cfg.clahe.tiles_y, cfg.clahe.clip_limit),
        128, 128, cfg.bilateral.radius, cfg.bilateral.sigma_color,
        cfg.bilateral.sigma_space);
    crit.expect(got.frame.data == want, "pipeline output diverged from references");
  }
}

void criterion_5_loss_gradients() {
  Criterion crit(5, "loss gradients match finite differences (rel err < 1e-5)");
  std::mt19937_64 rng(55);
  std::normal_distribution<double> g(0.0, 1.0);

  for (int instance = 0; instance < 100; ++instance) {
    const std::size_t B = 4 + rng() % 9, D = 4 + rng() % 21;
    std::vector<double> s(B * D), t(B * D);
    for (auto& v : s) v = g(rng);
    for (auto& v : t) v = g(rng);
    l2_normalize_rows(s, B, D);
    l2_normalize_rows(t, B, D);
    const double tau = 0.05 + 0.2 * (rng() % 100) / 100.0;
    const auto result = infonce_loss(s, t, B, D, tau);
    auto f = [&](const std::vector<double>& x) {
      return infonce_loss(x, t, B, D, tau, false).loss;
    };
    for (int probe = 0; probe < 8; ++probe) {
      const std::size_t i = rng() % (B * D);
      crit.expect(oracle::rel_err(result.grad_student[i],
                                  oracle::central_diff(f, s, i)) < 1e-5,
                  "InfoNCE gradient error above 1e-5");
    }
  }

  int active_checked = 0;
  for (int instance = 0; instance < 300 && active_checked < 100; ++instance) {
    const std::size_t D = 3 + rng() % 10;
    const auto metric =
        (instance % 2 == 0) ? DistanceMetric::Euclidean : DistanceMetric::Cosine;
    std::vector<double> a(D), p(D), n(D);
    for (auto& v : a) v = g(rng);
    for (auto& v : p) v = g(rng);
    for (auto& v : n) v = g(rng);
    const double margin = 0.2 + 0.5 * (rng() % 100) / 100.0;
    const auto result = triplet_margin_loss(a, p, n, margin, metric);
    if (result.loss < 1e-3) continue;
    ++active_checked;
    auto fa = [&](const std::vector<double>& x) {
      return triplet_margin_loss(x, p, n, margin, metric, false).loss;
    };
    auto fp = [&](const std::vector<double>& x) {
      return triplet_margin_loss(a, x, n, margin, metric, false).loss;
    };
    auto fn = [&](const std::vector<double>& x) {
      return triplet_margin_loss(a, p, x, margin, metric, false).loss;
    };
    for (std::size_t i = 0; i < D; ++i) {
      crit.expect(oracle::rel_err(result.grad_anchor[i],
                                  oracle::central_diff(fa, a, i)) < 1e-5,
                  "triplet anchor gradient error above 1e-5");
      crit.expect(oracle::rel_err(result.grad_positive[i],
                                  oracle::central_diff(fp, p, i)) < 1e-5,
                  "triplet positive gradient error above 1e-5");
      crit.expect(oracle::rel_err(result.grad_negative[i],
                                  oracle::central_diff(fn, n, i)) < 1e-5,
                  "triplet negative gradient error above 1e-5");
    }
  }
  crit.expect(active_checked == 100, "could not draw 100 active triplets");

  for (int instance = 0; instance < 100; ++instance) {
    const std::size_t cells = 3 + rng() % 10, C = 2 + rng() % 6;
    std::vector<double> probs(cells * C), gt(cells * C, 0.0);
    for (std::size_t i = 0; i < cells; ++i) {
      double sum = 0;
      for (std::size_t c = 0; c < C; ++c) {
        probs[i * C + c] = 0.02 + (rng() % 1000) / 1000.0;
        sum += probs[i * C + c];
      }
      for (std::size_t c = 0; c < C; ++c) probs[i * C + c] /= sum;
      gt[i * C + rng() % C] = 1.0;
    }
    const auto result = dice_loss(probs, gt, cells, C, 1e-6);
    auto f = [&](const std::vector<double>& x) {
      return dice_loss(x, gt, cells, C, 1e-6, false).loss;
    };
    for (int probe = 0; probe < 6; ++probe) {
      const std::size_t i = rng() % (cells * C);
      crit.expect(oracle::rel_err(result.grad[i], oracle::central_diff(f, probs, i)) <
                      1e-5,
                  "dice gradient error above 1e-5");
    }
  }
}

std::string history_bytes(const ToyDistillResult& result) {
  std::string out;
  char buf[32];
  for (const auto& h : result.history) {
    out += std::to_string(h.step);
    out += ',';
    auto [p1, e1] = std::to_chars(buf, buf + sizeof(buf), h.loss);
    out.append(buf, p1);
    out += ',';
    auto [p2, e2] = std::to_chars(buf, buf + sizeof(buf), h.recall_at_1);
    out.append(buf, p2);
    out += '\n';
  }
  return out;
}

void criterion_6_toy_distillation() {
  Criterion crit(6, "toy distillation: chance at init, >= 0.95 recall, deterministic");
  ToyDistillConfig cfg;
  cfg.latent_dim = 8;
  cfg.feature_dim = 32;
  cfg.train_pairs = 512;
  cfg.val_pairs = 256;
  cfg.noise = 0.01;
  cfg.steps = 2000;
  cfg.seed = 7;
  const auto run1 = toy_distill(cfg);
  const double p = 1.0 / 256.0;
  const double sigma = std::sqrt(p * (1 - p) / 256.0);
  crit.expect(run1.initial_recall_at_1 <= p + 3 * sigma,
              "initial recall above the chance band");
  crit.expect(run1.final_recall_at_1 >= 0.95, "final recall below 0.95");
  const auto run2 = toy_distill(cfg);
  crit.expect(history_bytes(run1) == history_bytes(run2),
              "histories differ between identical runs");
}

void criterion_7_retrieval_oracle() {
  Criterion crit(7, "retrieval/recall pipeline matches exhaustive oracle on 50 instances");
  std::mt19937_64 rng(77);
  for (int instance = 0; instance < 50; ++instance) {
    const std::size_t nd = 50 + rng() % 451;   // <= 500
    const std::size_t nq = 10 + rng() % 91;    // <= 100
    const std::size_t D = 16;
    EmbeddingSet queries, db;
    queries.count = nq;
    queries.dim = D;
    db.count = nd;
    db.dim = D;
    queries.data.resize(nq * D);
    db.data.resize(nd * D);
    std::normal_distribution<double> g(0.0, 1.0);
    for (auto& v : queries.data) v = g(rng);
    for (auto& v : db.data) v = g(rng);
    for (std::size_t i = 0; i < nq; ++i) {
      queries.ids.push_back("q" + std::to_string(i));
      queries.positions.push_back({(rng() % 400) / 10.0, (rng() % 400) / 10.0, 0});
    }
    for (std::size_t i = 0; i < nd; ++i) {
      // A third of the queries have a paired database row (same id).
      db.ids.push_back(i < nq && i % 3 == 0 ? "q" + std::to_string(i)
                                            : "d" + std::to_string(i));
      db.positions.push_back({(rng() % 400) / 10.0, (rng() % 400) / 10.0, 0});
    }
    const double radius = 4.0 + (rng() % 100) / 10.0;

    const auto positives = positives_from_radius(queries, db, radius, false);
    const auto res = knn_retrieve(queries, db, 1, DistanceMetric::Euclidean,
                                  &positives.paired_db_index);
    double got = -1.0;
    bool got_defined = true;
    try {
      got = recall_at_k(res, positives.per_query, 1);
    } catch (const Error&) {
      got_defined = false;
    }

    std::size_t hits = 0, evaluable = 0;
    for (std::size_t q = 0; q < nq; ++q) {
      std::size_t paired = SIZE_MAX;
      for (std::size_t i = 0; i < nd; ++i)
        if (db.ids[i] == queries.ids[q]) paired = i;
      std::set<std::size_t> pos;
      for (std::size_t i = 0; i < nd; ++i) {
        const double dx = queries.positions[q][0] - db.positions[i][0];
        const double dy = queries.positions[q][1] - db.positions[i][1];
        if (std::sqrt(dx * dx + dy * dy) <= radius && i != paired) pos.insert(i);
      }
      if (pos.empty()) continue;
      ++evaluable;
      std::vector<double> qrow(queries.row(q), queries.row(q) + D);
      const auto top = oracle::brute_force_topk(qrow, db.data, nd, D, 1, false, paired);
      if (!top.empty() && pos.count(top[0])) ++hits;
    }
    if (evaluable == 0) {
      crit.expect(!got_defined, "recall defined with zero evaluable queries");
      continue;
    }
    crit.expect(got_defined, "recall undefined with evaluable queries present");
    crit.expect(got == static_cast<double>(hits) / static_cast<double>(evaluable),
                "recall differs from the exhaustive oracle");
  }

  // Weighted mean against the hand formula.
  std::vector<std::pair<double, std::size_t>> per_seq;
  double num = 0;
  std::size_t den = 0;
  for (int i = 0; i < 6; ++i) {
    const double r = (rng() % 1000) / 1000.0;
    const std::size_t n = 1 + rng() % 50;
    per_seq.emplace_back(r, n);
    num += r * static_cast<double>(n);
    den += n;
  }
  crit.expect(weighted_mean_recall(per_seq) == num / static_cast<double>(den),
              "weighted mean recall differs from the hand formula");
}

void criterion_8_metric_identities() {
  Criterion crit(8, "depth and segmentation metric identities");
  ImageF32 gt(32, 32, 1);
  std::mt19937_64 rng(88);
  for (auto& v : gt.data) v = 0.5f + (rng() % 1000) / 100.0f;
  const auto perfect = depth_metrics(gt, gt);
  crit.expect(perfect.abs_rel == 0.0 && perfect.sq_rel == 0.0 && perfect.rmse == 0.0 &&
                  perfect.rmse_log == 0.0,
              "perfect prediction gave nonzero metrics");

  ImageF32 doubled = gt;
  for (auto& v : doubled.data) v *= 2.0f;
  const auto twice = depth_metrics(doubled, gt);
  crit.expect(std::abs(twice.rmse_log - std::log(2.0)) < 1e-9,
              "uniform 2x depth did not give RMSElog = ln 2");

  ImageU8 labels(32, 32, 1);
  for (auto& v : labels.data) v = static_cast<std::uint8_t>(rng() % 9);
  const auto seg = miou(labels, labels, 9);
  crit.expect(seg.miou == 1.0, "identical segmentation did not give mIoU 1");

  ImageU8 a(16, 16, 1, 1), b(16, 16, 1, 2);
  const auto disjoint = miou(a, b, 3);
  crit.expect(disjoint.miou == 0.0, "disjoint masks did not give mIoU 0");
}

void criterion_9_dataset_bookkeeping() {
  Criterion crit(9, "1 Hz pair counts match hand-computed values");
  // Sequence A: 30 Hz thermal over exactly 12 s (frames at k/30 s,
  // k = 0..360). The 1 Hz grid anchors at 0 and lands on integer seconds,
  // each backed by an exact frame: 13 slots. FFC event [3.2 s, 4.1 s] with
  // the default 100 ms guard covers [3.1, 4.2] and removes only the 4 s
  // frame: 12 thermal frames remain. RGB runs 1 ms behind; every remaining
  // frame pairs within the 10 ms synced tolerance -> 12 pairs.
  DatasetManifest manifest;
  manifest.dataset = "hand";
  {
    SequenceRecord seq;
    seq.name = "a";
    seq.environment = Environment::Indoor;
    seq.hardware_synced = true;
    for (int k = 0; k <= 360; ++k) {
      seq.thermal.push_back({"t", k * 1'000'000'000LL / 30});
      seq.rgb.push_back({"r", k * 1'000'000'000LL / 30 + 1'000'000});
    }
    seq.ffc_events.push_back({3'200'000'000LL, 4'100'000'000LL});
    manifest.sequences.push_back(seq);
  }
  // Sequence B: 30 Hz over exactly 8 s -> 9 slots; FFC [0.5 s, 0.7 s]
  // (guarded: [0.4, 0.8]) misses every integer second -> 9 pairs.
  {
    SequenceRecord seq;
    seq.name = "b";
    seq.environment = Environment::Offroad;
    seq.hardware_synced = true;
    for (int k = 0; k <= 240; ++k) {
      seq.thermal.push_back({"t", k * 1'000'000'000LL / 30});
      seq.rgb.push_back({"r", k * 1'000'000'000LL / 30 + 1'000'000});
    }
    seq.ffc_events.push_back({500'000'000LL, 700'000'000LL});
    manifest.sequences.push_back(seq);
  }

  const auto stats = dataset_stats(manifest, StatsConfig{});
  crit.expect(stats.per_sequence[0].pairs_1hz == 12, "sequence A count is not 12");
  crit.expect(stats.per_sequence[1].pairs_1hz == 9, "sequence B count is not 9");
  crit.expect(stats.per_environment.at("indoor") == 12, "indoor aggregate wrong");
  crit.expect(stats.per_environment.at("offroad") == 9, "offroad aggregate wrong");
  std::size_t sum = 0;
  for (const auto& [env, n] : stats.per_environment) sum += n;
  crit.expect(stats.total == sum && stats.total == 21,
              "total differs from per-environment sum");
}

// --- criterion 10: end-to-end CLI determinism -------------------------------

int run_cli(const std::string& args, const std::filesystem::path& stdout_to,
            const std::string& env_prefix) {
  const std::string cmd = env_prefix + std::string(RGBT_CLI_PATH) + " " + args + " > " +
                          stdout_to.string() + " 2>&1";
  return std::system(cmd.c_str());
}

bool run_pipeline(const std::filesystem::path& tree, const std::string& data,
                  const std::string& env_prefix, std::string& failed_step) {
  std::filesystem::create_directories(tree);
  const auto log = tree / "cli_stdout.log";  // outside the compared artifact dirs
  const std::vector<std::pair<std::string, std::string>> steps = {
      {"validate", "validate --manifest " + data + "/manifest.json"},
      {"thermal8", "thermal8 --input " + data + "/seq_a/thermal16 --out-dir " +
                       (tree / "thermal8").string()},
      {"rectify", "rectify --calib " + data +
                      "/calib.json --src-camera thermal_fish --dst-camera "
                      "thermal_rect --input " +
                      data + "/fisheye --out-dir " + (tree / "rectified").string()},
      {"register", "register --calib " + data + "/calib.json --rgb " + data +
                       "/seq_a/rgb/frame_000.ppm --depth " + data +
                       "/seq_a/depth/frame_000.rgtd --thermal " +
                       (tree / "thermal8" / "frame_000.pgm").string() +
                       " --out-dir " + (tree / "registered").string()},
      {"pair", "pair --manifest " + data + "/manifest.json --out-dir " +
                   (tree / "pairs").string()},
      {"subsample", "subsample --manifest " + data + "/manifest.json --out-dir " +
                        (tree / "subsampled").string()},
      {"stats", "stats --manifest " + data + "/manifest.json --by-env --out-dir " +
                    (tree / "stats").string()},
      {"mine-triplets", "mine-triplets --rgb " + data +
                            "/embed/rgb_train.rgte --thermal " + data +
                            "/embed/thermal_train.rgte --radius 15 --seed 7 "
                            "--out-dir " +
                            (tree / "triplets").string()},
      {"distill-toy",
       "distill-toy --seed 7 --steps 300 --train-pairs 128 --val-pairs 64 --batch 32 "
       "--out-dir " +
           (tree / "distill").string()},
      {"eval-vpr", "eval-vpr --queries " + data + "/embed/queries_a.rgte," + data +
                       "/embed/queries_b.rgte --db " + data + "/embed/db_a.rgte," +
                       data + "/embed/db_b.rgte --radius 15 --k 1,5 --out-dir " +
                       (tree / "vpr").string()},
      {"eval-seg", "eval-seg --pred " + data + "/seg/pred --gt " + data +
                       "/seg/gt --classes 9 --class-names " + data +
                       "/class_names.json --out-dir " + (tree / "seg").string()},
      {"eval-depth", "eval-depth --pred " + data + "/deptheval/pred --gt " + data +
                         "/deptheval/gt --mask " + data + "/deptheval/mask --out-dir " +
                         (tree / "depth").string()},
      {"scaling-report", "scaling-report --runs " + data + "/runs.json --out-dir " +
                             (tree / "scaling").string()},
  };
  for (const auto& [name, args] : steps) {
    if (run_cli(args, log, env_prefix) != 0) {
      failed_step = name;
      return false;
    }
  }
  std::filesystem::remove(log);
  return true;
}

bool trees_identical(const std::filesystem::path& a, const std::filesystem::path& b,
                     std::string& detail) {
  std::vector<std::filesystem::path> files_a, files_b;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(a))
    if (entry.is_regular_file())
      files_a.push_back(std::filesystem::relative(entry.path(), a));
  for (const auto& entry : std::filesystem::recursive_directory_iterator(b))
    if (entry.is_regular_file())
      files_b.push_back(std::filesystem::relative(entry.path(), b));
  std::sort(files_a.begin(), files_a.end());
  std::sort(files_b.begin(), files_b.end());
  if (files_a != files_b) {
    detail = "artifact file lists differ";
    return false;
  }
  for (const auto& rel : files_a) {
    std::ifstream fa(a / rel, std::ios::binary), fb(b / rel, std::ios::binary);
    std::string ca((std::istreambuf_iterator<char>(fa)), std::istreambuf_iterator<char>());
    std::string cb((std::istreambuf_iterator<char>(fb)), std::istreambuf_iterator<char>());
    if (ca != cb) {
      detail = "byte difference in " + rel.string();
      return false;
    }
  }
  return true;
}

void criterion_10_cli_determinism() {
  Criterion crit(10, "full CLI pipeline is byte-identical across reruns");
  const std::string data = RGBT_MINI_DATA_DIR;
  if (!std::filesystem::exists(data + "/manifest.json")) {
    crit.expect(false, "mini dataset missing at " + data);
    return;
  }
  const auto base = std::filesystem::temp_directory_path() /
                    ("rgbt_accept_" + std::to_string(std::random_device{}()));
  std::string failed;
  const bool ran_a = run_pipeline(base / "tree_a", data, "", failed);
  crit.expect(ran_a, "pipeline run A failed at step: " + failed);
  const bool ran_b = run_pipeline(base / "tree_b", data, "", failed);
  crit.expect(ran_b, "pipeline run B failed at step: " + failed);
  // Same artifacts again with a single-thread worker pool.
  const bool ran_c = run_pipeline(base / "tree_c", data, "RGBT_JOBS=1 ", failed);
  crit.expect(ran_c, "pipeline run C failed at step: " + failed);
  if (ran_a && ran_b && ran_c) {
    std::string detail;
    crit.expect(trees_identical(base / "tree_a", base / "tree_b", detail), detail);
    crit.expect(trees_identical(base / "tree_a", base / "tree_c", detail),
                "pool size changed artifacts: " + detail);
  }
  std::filesystem::remove_all(base);
}

}  // namespace

int main() {
  criterion_1_geometry_roundtrip();
  criterion_2_registration_oracle();
  criterion_3_planar_shift();
  criterion_4_thermal_bit_equality();
  criterion_5_loss_gradients();
  criterion_6_toy_distillation();
  criterion_7_retrieval_oracle();
  criterion_8_metric_identities();
  criterion_9_dataset_bookkeeping();
  criterion_10_cli_determinism();
  if (g_failures) {
    std::cout << g_failures << " criterion(s) failed" << std::endl;
    return 1;
  }
  std::cout << "all criteria passed" << std::endl;
  return 0;
}
