// Test-only reference implementations. Everything here is written
// straight-line and stays independent of the library code paths it checks.
#ifndef RGBT_TESTS_ORACLES_HPP
#define RGBT_TESTS_ORACLES_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

namespace oracle {

// --- scalar pinhole geometry -------------------------------------------

inline std::array<double, 3> backproject_ref(double u, double v, double depth,
                                             double fx, double fy, double cx,
                                             double cy) {
  return {(u - cx) / fx * depth, (v - cy) / fy * depth, depth};
}

inline std::array<double, 3> project_ref(const std::array<double, 3>& p, double fx,
                                         double fy, double cx, double cy) {
  return {fx * p[0] / p[2] + cx, fy * p[1] / p[2] + cy, p[2]};
}

inline std::array<double, 3> matvec_ref(const double R[9],
                                        const std::array<double, 3>& p) {
  return {R[0] * p[0] + R[1] * p[1] + R[2] * p[2],
          R[3] * p[0] + R[4] * p[1] + R[5] * p[2],
          R[6] * p[0] + R[7] * p[1] + R[8] * p[2]};
}

// Forward equidistant fisheye, one pixel at a time.
inline std::array<double, 2> fisheye_forward_ref(double x, double y, double z,
                                                 double fx, double fy, double cx,
                                                 double cy, const double k[4]) {
  const double r = std::sqrt(x * x + y * y);
  if (r <= std::numeric_limits<double>::min()) return {cx, cy};
  const double theta = std::atan2(r, z);
  const double t2 = theta * theta;
  const double t4 = t2 * t2;
  const double t6 = t4 * t2;
  const double t8 = t4 * t4;
  const double theta_d = theta * (1.0 + k[0] * t2 + k[1] * t4 + k[2] * t6 + k[3] * t8);
  return {fx * theta_d * (x / r) + cx, fy * theta_d * (y / r) + cy};
}

// --- thermal pipeline ------------------------------------------------------

inline std::vector<std::uint8_t> minmax_ref(const std::vector<std::uint16_t>& in) {
  std::uint16_t mn = in[0], mx = in[0];
  for (std::uint16_t v : in) {
    mn = std::min(mn, v);
    mx = std::max(mx, v);
  }
  std::vector<std::uint8_t> out(in.size(), 0);
  if (mx == mn) return out;
  for (std::size_t i = 0; i < in.size(); ++i)
    out[i] = static_cast<std::uint8_t>(
        std::llround(255.0 * (in[i] - static_cast<double>(mn)) /
                     (static_cast<double>(mx) - static_cast<double>(mn))));
  return out;
}

// Classic global histogram equalization: map[v] = round(255*cdf[v]/N).
inline std::vector<std::uint8_t> global_hist_eq_ref(const std::vector<std::uint8_t>& in) {
  std::array<std::int64_t, 256> hist{};
  for (std::uint8_t v : in) hist[v]++;
  std::array<double, 256> mapping{};
  double cum = 0.0;
  for (int b = 0; b < 256; ++b) {
    cum += static_cast<double>(hist[b]);
    mapping[b] = 255.0 * cum / static_cast<double>(in.size());
  }
  std::vector<std::uint8_t> out(in.size());
  for (std::size_t i = 0; i < in.size(); ++i)
    out[i] = static_cast<std::uint8_t>(std::llround(mapping[in[i]]));
  return out;
}

inline std::vector<std::uint8_t> clahe_ref(const std::vector<std::uint8_t>& in, int W,
                                           int H, int tiles_x, int tiles_y,
                                           double clip) {
  const int tx = tiles_x > W ? 1 : tiles_x;
  const int ty = tiles_y > H ? 1 : tiles_y;
  std::vector<int> bx(tx + 1), by(ty + 1);
  for (int i = 0; i <= tx; ++i) bx[i] = static_cast<int>((static_cast<long>(i) * W) / tx);
  for (int j = 0; j <= ty; ++j) by[j] = static_cast<int>((static_cast<long>(j) * H) / ty);

  std::vector<std::array<double, 256>> mapping(static_cast<std::size_t>(tx) * ty);
  for (int j = 0; j < ty; ++j) {
    for (int i = 0; i < tx; ++i) {
      std::array<std::int64_t, 256> hist{};
      for (int y = by[j]; y < by[j + 1]; ++y)
        for (int x = bx[i]; x < bx[i + 1]; ++x) hist[in[static_cast<std::size_t>(y) * W + x]]++;
      const double cnt = static_cast<double>(bx[i + 1] - bx[i]) * (by[j + 1] - by[j]);
      const double clip_at = clip * cnt / 256.0;
      std::array<double, 256> clipped{};
      double excess = 0.0;
      for (int b = 0; b < 256; ++b) {
        const double h = static_cast<double>(hist[b]);
        clipped[b] = std::min(h, clip_at);
        excess += h - clipped[b];
      }
      const double add = excess / 256.0;
      double cum = 0.0;
      for (int b = 0; b < 256; ++b) {
        cum += clipped[b] + add;
        mapping[static_cast<std::size_t>(j) * tx + i][b] =
            std::clamp(255.0 * cum / cnt, 0.0, 255.0);
      }
    }
  }

  std::vector<double> cxs(tx), cys(ty);
  for (int i = 0; i < tx; ++i) cxs[i] = bx[i] + (bx[i + 1] - bx[i] - 1) / 2.0;
  for (int j = 0; j < ty; ++j) cys[j] = by[j] + (by[j + 1] - by[j] - 1) / 2.0;

  std::vector<std::uint8_t> out(in.size());
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      int i0, i1, j0, j1;
      double fx, fy;
      if (ty == 1 || y <= cys[0]) {
        j0 = j1 = 0;
        fy = 0.0;
      } else if (y >= cys[ty - 1]) {
        j0 = j1 = ty - 1;
        fy = 0.0;
      } else {
        j0 = 0;
        while (!(cys[j0] <= y && y < cys[j0 + 1])) ++j0;
        j1 = j0 + 1;
        fy = (y - cys[j0]) / (cys[j1] - cys[j0]);
      }
      if (tx == 1 || x <= cxs[0]) {
        i0 = i1 = 0;
        fx = 0.0;
      } else if (x >= cxs[tx - 1]) {
        i0 = i1 = tx - 1;
        fx = 0.0;
      } else {
        i0 = 0;
        while (!(cxs[i0] <= x && x < cxs[i0 + 1])) ++i0;
        i1 = i0 + 1;
        fx = (x - cxs[i0]) / (cxs[i1] - cxs[i0]);
      }
      const int v = in[static_cast<std::size_t>(y) * W + x];
      const double m00 = mapping[static_cast<std::size_t>(j0) * tx + i0][v];
      const double m10 = mapping[static_cast<std::size_t>(j0) * tx + i1][v];
      const double m01 = mapping[static_cast<std::size_t>(j1) * tx + i0][v];
      const double m11 = mapping[static_cast<std::size_t>(j1) * tx + i1][v];
      const double top = (1.0 - fx) * m00 + fx * m10;
      const double bot = (1.0 - fx) * m01 + fx * m11;
      const double val = (1.0 - fy) * top + fy * bot;
      out[static_cast<std::size_t>(y) * W + x] =
          static_cast<std::uint8_t>(std::llround(val));
    }
  }
  return out;
}

inline std::vector<std::uint8_t> bilateral_ref(const std::vector<std::uint8_t>& in,
                                               int W, int H, int r, double sigma_color,
                                               double sigma_space) {
  std::vector<std::uint8_t> out(in.size());
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      const int center = in[static_cast<std::size_t>(y) * W + x];
      double num = 0.0, den = 0.0;
      for (int dy = -r; dy <= r; ++dy) {
        const int yy = std::clamp(y + dy, 0, H - 1);
        for (int dx = -r; dx <= r; ++dx) {
          const int xx = std::clamp(x + dx, 0, W - 1);
          const int v = in[static_cast<std::size_t>(yy) * W + xx];
          const int d = std::abs(v - center);
          const double w =
              std::exp(-(static_cast<double>(dx) * dx + static_cast<double>(dy) * dy) /
                       (2.0 * sigma_space * sigma_space)) *
              std::exp(-(static_cast<double>(d) * d) /
                       (2.0 * sigma_color * sigma_color));
          num += w * v;
          den += w;
        }
      }
      out[static_cast<std::size_t>(y) * W + x] =
          static_cast<std::uint8_t>(std::llround(num / den));
    }
  }
  return out;
}

// Spatial-only Gaussian blur over the same window (bilateral limit check).
inline std::vector<std::uint8_t> gaussian_blur_ref(const std::vector<std::uint8_t>& in,
                                                   int W, int H, int r,
                                                   double sigma_space) {
  std::vector<std::uint8_t> out(in.size());
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      double num = 0.0, den = 0.0;
      for (int dy = -r; dy <= r; ++dy) {
        const int yy = std::clamp(y + dy, 0, H - 1);
        for (int dx = -r; dx <= r; ++dx) {
          const int xx = std::clamp(x + dx, 0, W - 1);
          const double w =
              std::exp(-(static_cast<double>(dx) * dx + static_cast<double>(dy) * dy) /
                       (2.0 * sigma_space * sigma_space));
          num += w * in[static_cast<std::size_t>(yy) * W + xx];
          den += w;
        }
      }
      out[static_cast<std::size_t>(y) * W + x] =
          static_cast<std::uint8_t>(std::llround(num / den));
    }
  }
  return out;
}

// --- painter's-algorithm splat oracle ---------------------------------------

struct PainterSample {
  double u, v, depth;
  std::array<float, 3> payload;
};

struct PainterCanvas {
  int width = 0, height = 0;
  std::vector<std::array<float, 3>> payload;
  std::vector<std::uint8_t> defined;
  std::vector<double> depth;
};

// Draws far-to-near; the nearest sample touching a pixel owns it. "Touching"
// uses the library's negligible-weight cutoff so both sides agree on the
// footprint.
inline constexpr double kPainterMinWeight = 1e-9;

inline PainterCanvas painter_splat(std::vector<PainterSample> samples, int W, int H) {
  PainterCanvas canvas;
  canvas.width = W;
  canvas.height = H;
  canvas.payload.assign(static_cast<std::size_t>(W) * H, {0, 0, 0});
  canvas.defined.assign(static_cast<std::size_t>(W) * H, 0);
  canvas.depth.assign(static_cast<std::size_t>(W) * H, 0.0);
  std::sort(samples.begin(), samples.end(),
            [](const PainterSample& a, const PainterSample& b) { return a.depth > b.depth; });
  for (const auto& s : samples) {
    const int u0 = static_cast<int>(std::floor(s.u));
    const int v0 = static_cast<int>(std::floor(s.v));
    const double a = s.u - u0;
    const double b = s.v - v0;
    const double w[4] = {(1.0 - a) * (1.0 - b), a * (1.0 - b), (1.0 - a) * b, a * b};
    const int px[4] = {u0, u0 + 1, u0, u0 + 1};
    const int py[4] = {v0, v0, v0 + 1, v0 + 1};
    for (int i = 0; i < 4; ++i) {
      if (w[i] < kPainterMinWeight) continue;
      if (px[i] < 0 || px[i] >= W || py[i] < 0 || py[i] >= H) continue;
      const std::size_t p = static_cast<std::size_t>(py[i]) * W + px[i];
      canvas.payload[p] = s.payload;
      canvas.defined[p] = 1;
      canvas.depth[p] = s.depth;
    }
  }
  return canvas;
}

// --- retrieval --------------------------------------------------------------

inline std::vector<std::size_t> brute_force_topk(const std::vector<double>& query,
                                                 const std::vector<double>& db,
                                                 std::size_t db_count, std::size_t dim,
                                                 std::size_t k, bool cosine,
                                                 std::size_t excluded = SIZE_MAX) {
  std::vector<std::pair<double, std::size_t>> scored;
  for (std::size_t i = 0; i < db_count; ++i) {
    if (i == excluded) continue;
    double dist;
    if (cosine) {
      double dot = 0, nq = 0, nd = 0;
      for (std::size_t j = 0; j < dim; ++j) {
        dot += query[j] * db[i * dim + j];
        nq += query[j] * query[j];
        nd += db[i * dim + j] * db[i * dim + j];
      }
      const double denom = std::sqrt(nq) * std::sqrt(nd);
      dist = denom == 0.0 ? 1.0 : 1.0 - dot / denom;
    } else {
      double sq = 0;
      for (std::size_t j = 0; j < dim; ++j) {
        const double d = query[j] - db[i * dim + j];
        sq += d * d;
      }
      dist = std::sqrt(sq);
    }
    scored.emplace_back(dist, i);
  }
  std::sort(scored.begin(), scored.end());
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < std::min(k, scored.size()); ++i)
    out.push_back(scored[i].second);
  return out;
}

// --- miou via explicit confusion matrix --------------------------------------

struct MiouRef {
  std::vector<double> iou;  // NaN where absent
  double miou;
};

inline MiouRef miou_ref(const std::vector<std::uint8_t>& pred,
                        const std::vector<std::uint8_t>& gt, int classes,
                        int ignore_label) {
  std::vector<std::int64_t> confusion(static_cast<std::size_t>(classes) * classes, 0);
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (static_cast<int>(gt[i]) == ignore_label) continue;
    confusion[static_cast<std::size_t>(gt[i]) * classes + pred[i]]++;
  }
  MiouRef out;
  out.iou.assign(classes, std::nan(""));
  double sum = 0.0;
  int counted = 0;
  for (int c = 0; c < classes; ++c) {
    std::int64_t tp = confusion[static_cast<std::size_t>(c) * classes + c];
    std::int64_t row = 0, col = 0;
    for (int j = 0; j < classes; ++j) {
      row += confusion[static_cast<std::size_t>(c) * classes + j];
      col += confusion[static_cast<std::size_t>(j) * classes + c];
    }
    const std::int64_t denom = row + col - tp;
    if (denom == 0) continue;
    out.iou[c] = static_cast<double>(tp) / static_cast<double>(denom);
    sum += out.iou[c];
    ++counted;
  }
  out.miou = counted ? sum / counted : 0.0;
  return out;
}

// --- finite differences -------------------------------------------------------

// Central finite difference of a scalar function at x along coordinate i.
inline double central_diff(const std::function<double(const std::vector<double>&)>& f,
                           std::vector<double> x, std::size_t i, double h = 1e-6) {
  const double orig = x[i];
  x[i] = orig + h;
  const double hi = f(x);
  x[i] = orig - h;
  const double lo = f(x);
  return (hi - lo) / (2.0 * h);
}

inline double rel_err(double got, double want) {
  const double denom = std::max({std::abs(got), std::abs(want), 1e-12});
  return std::abs(got - want) / denom;
}

}  // namespace oracle

#endif
