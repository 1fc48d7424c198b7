/**
 * Copyright 2026 The segaug Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// Brute-force reference implementations used by the unit and acceptance
// tests. They are written per pixel from the op definitions and share no
// code with the library kernels.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <tuple>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "segaug/ops.hpp"
#include "segaug/raster.hpp"

namespace oracle {

using segaug::LabelMask;
using segaug::OpId;
using segaug::Raster;

inline int round_clamp(double v) {
  const double r = std::floor(v + 0.5);
  return static_cast<int>(std::clamp(r, 0.0, 255.0));
}

inline Raster random_raster(std::mt19937_64& gen, int w, int h, int channels) {
  std::vector<std::uint8_t> data(static_cast<std::size_t>(w * h * channels));
  // Mix full-range noise with narrow-range images so AutoContrast and
  // Equalize see both easy and degenerate histograms.
  const int mode = static_cast<int>(gen() % 3);
  const int lo = mode == 0 ? 0 : static_cast<int>(gen() % 200);
  const int span = mode == 0 ? 256 : (mode == 1 ? 1 + static_cast<int>(gen() % 8) : 1 + static_cast<int>(gen() % 56));
  for (auto& v : data) v = static_cast<std::uint8_t>(lo + static_cast<int>(gen() % static_cast<unsigned>(span)));
  return Raster(w, h, channels, std::move(data));
}

inline LabelMask random_mask(std::mt19937_64& gen, int w, int h, int k, double ignore_rate = 0.0,
                             std::uint8_t ignore = 255) {
  std::vector<std::uint8_t> labels(static_cast<std::size_t>(w * h));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (auto& l : labels) {
    l = u(gen) < ignore_rate ? ignore : static_cast<std::uint8_t>(gen() % static_cast<unsigned>(k));
  }
  return LabelMask(w, h, std::move(labels), ignore);
}

inline int gray_of(const Raster& img, int x, int y) {
  if (img.channels() == 1) return img.at(x, y, 0);
  const int r = img.at(x, y, 0);
  const int g = img.at(x, y, 1);
  const int b = img.at(x, y, 2);
  return (r * 299 + g * 587 + b * 114 + 500) / 1000;
}

// ------------------------------------------------------------ color ops

inline Raster blend_toward(const Raster& img, double factor, const std::vector<double>& degenerate) {
  Raster out(img.width(), img.height(), img.channels());
  std::size_t i = 0;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      for (int c = 0; c < img.channels(); ++c, ++i) {
        const double d = degenerate[i];
        out.at(x, y, c) = static_cast<std::uint8_t>(round_clamp(d + factor * (img.at(x, y, c) - d)));
      }
    }
  }
  return out;
}

inline Raster brightness(const Raster& img, double f) {
  return blend_toward(img, f, std::vector<double>(img.data().size(), 0.0));
}

inline Raster contrast(const Raster& img, double f) {
  long long sum = 0;
  const long long n = static_cast<long long>(img.width()) * img.height();
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) sum += gray_of(img, x, y);
  }
  const double mean = static_cast<double>((2 * sum + n) / (2 * n));
  return blend_toward(img, f, std::vector<double>(img.data().size(), mean));
}

inline Raster color(const Raster& img, double f) {
  std::vector<double> deg;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      for (int c = 0; c < img.channels(); ++c) deg.push_back(gray_of(img, x, y));
    }
  }
  return blend_toward(img, f, deg);
}

inline Raster sharpness(const Raster& img, double f) {
  static constexpr int kWeights[3][3] = {{1, 1, 1}, {1, 5, 1}, {1, 1, 1}};
  std::vector<double> deg;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      for (int c = 0; c < img.channels(); ++c) {
        const bool border = x == 0 || y == 0 || x == img.width() - 1 || y == img.height() - 1;
        if (border) {
          deg.push_back(img.at(x, y, c));
          continue;
        }
        int acc = 0;
        for (int j = 0; j < 3; ++j) {
          for (int i = 0; i < 3; ++i) acc += kWeights[j][i] * img.at(x + i - 1, y + j - 1, c);
        }
        deg.push_back(std::lround(acc / 13.0));
      }
    }
  }
  return blend_toward(img, f, deg);
}

inline Raster solarize(const Raster& img, double threshold) {
  Raster out = img;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      for (int c = 0; c < img.channels(); ++c) {
        const int v = img.at(x, y, c);
        if (v >= threshold) out.at(x, y, c) = static_cast<std::uint8_t>(255 - v);
      }
    }
  }
  return out;
}

inline Raster autocontrast(const Raster& img) {
  Raster out = img;
  for (int c = 0; c < img.channels(); ++c) {
    int lo = 256;
    int hi = -1;
    for (int y = 0; y < img.height(); ++y) {
      for (int x = 0; x < img.width(); ++x) {
        lo = std::min<int>(lo, img.at(x, y, c));
        hi = std::max<int>(hi, img.at(x, y, c));
      }
    }
    if (lo == hi) continue;
    for (int y = 0; y < img.height(); ++y) {
      for (int x = 0; x < img.width(); ++x) {
        // exact rational (v - lo) * 255 / (hi - lo), rounded half up
        const long num = (img.at(x, y, c) - lo) * 255L;
        const long den = hi - lo;
        const long q = num / den;
        const long r = num % den;
        out.at(x, y, c) = static_cast<std::uint8_t>(2 * r >= den ? q + 1 : q);
      }
    }
  }
  return out;
}

// Histogram equalization as defined by PIL.ImageOps.equalize.
inline Raster equalize(const Raster& img) {
  Raster out = img;
  for (int c = 0; c < img.channels(); ++c) {
    std::vector<long> hist(256, 0);
    for (int y = 0; y < img.height(); ++y) {
      for (int x = 0; x < img.width(); ++x) ++hist[img.at(x, y, c)];
    }
    std::vector<long> nonzero;
    for (long h : hist) {
      if (h) nonzero.push_back(h);
    }
    long total = 0;
    for (long h : nonzero) total += h;
    const long step = (total - nonzero.back()) / 255;
    if (step == 0) continue;
    std::vector<int> lut;
    long n = step / 2;
    for (int i = 0; i < 256; ++i) {
      lut.push_back(static_cast<int>(std::min<long>(n / step, 255)));
      n += hist[static_cast<std::size_t>(i)];
    }
    for (int y = 0; y < img.height(); ++y) {
      for (int x = 0; x < img.width(); ++x) {
        out.at(x, y, c) = static_cast<std::uint8_t>(lut[img.at(x, y, c)]);
      }
    }
  }
  return out;
}

inline Raster color_op(OpId op, double param, const Raster& img) {
  switch (op) {
    case OpId::Brightness: return brightness(img, param);
    case OpId::Contrast: return contrast(img, param);
    case OpId::Color: return color(img, param);
    case OpId::Sharpness: return sharpness(img, param);
    case OpId::Solarize: return solarize(img, param);
    case OpId::AutoContrast: return autocontrast(img);
    case OpId::Equalize: return equalize(img);
    default: throw std::logic_error("not a color op");
  }
}

// --------------------------------------------------------- geometric ops

// Source position of output pixel (x, y), written per op as a*x + b*y + t.
inline std::pair<double, double> source_of(OpId op, double p, int w, int h, int x, int y) {
  const double cx = (w - 1) / 2.0;
  const double cy = (h - 1) / 2.0;
  double a = 1, b = 0, t = 0, d = 0, e = 1, u = 0;
  switch (op) {
    case OpId::Rotate: {
      // Screen rotation counter-clockwise by p degrees; y axis points down,
      // so the inverse rotates clockwise in array coordinates.
      const double th = p * std::numbers::pi / 180.0;
      const double co = std::cos(th);
      const double si = std::sin(th);
      a = co, b = -si, t = cx - co * cx + si * cy;
      d = si, e = co, u = cy - si * cx - co * cy;
      break;
    }
    case OpId::ShearX: b = -p, t = p * cy; break;
    case OpId::ShearY: d = -p, u = p * cx; break;
    case OpId::TranslateX: t = -p * w; break;
    case OpId::TranslateY: u = -p * h; break;
    case OpId::HorizontalFlip: a = -1, t = w - 1.0; break;
    case OpId::Scale: a = 1.0 / p, t = cx - (1.0 / p) * cx, e = 1.0 / p, u = cy - (1.0 / p) * cy; break;
    default: throw std::logic_error("not a geometric op");
  }
  return {a * x + b * y + t, d * x + e * y + u};
}

inline int clamp_index(double v, int n) { return std::clamp(static_cast<int>(v), 0, n - 1); }

inline std::pair<Raster, LabelMask> geometric_op(OpId op, double p, const Raster& img, const LabelMask& mask) {
  const int w = img.width();
  const int h = img.height();
  Raster out(w, h, img.channels(), 0);
  LabelMask out_mask(w, h, mask.ignore_index(), mask.ignore_index());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const auto [sx, sy] = source_of(op, p, w, h, x, y);
      const double nx = std::floor(sx + 0.5);
      const double ny = std::floor(sy + 0.5);
      if (nx < 0 || ny < 0 || nx > w - 1 || ny > h - 1) continue;
      out_mask.at(x, y) = mask.at(static_cast<int>(nx), static_cast<int>(ny));
      const double fx0 = std::floor(sx);
      const double fy0 = std::floor(sy);
      const double ax = sx - fx0;
      const double ay = sy - fy0;
      const int xs[2] = {clamp_index(fx0, w), clamp_index(fx0 + 1, w)};
      const int ys[2] = {clamp_index(fy0, h), clamp_index(fy0 + 1, h)};
      for (int c = 0; c < img.channels(); ++c) {
        const double row0 = (1.0 - ax) * img.at(xs[0], ys[0], c) + ax * img.at(xs[1], ys[0], c);
        const double row1 = (1.0 - ax) * img.at(xs[0], ys[1], c) + ax * img.at(xs[1], ys[1], c);
        out.at(x, y, c) = static_cast<std::uint8_t>(round_clamp((1.0 - ay) * row0 + ay * row1));
      }
    }
  }
  return {out, out_mask};
}

// --------------------------------------------------------------- metrics

// Mean IoU from explicit pixel sets: per class, the set of (image, pixel)
// positions labelled c in ground truth and in prediction, over pixels whose
// ground truth is not ignore.
inline double miou_by_sets(std::span<const LabelMask> pred, std::span<const LabelMask> gt, int k) {
  using Pos = std::pair<std::size_t, std::size_t>;
  std::vector<std::set<Pos>> in_gt(static_cast<std::size_t>(k));
  std::vector<std::set<Pos>> in_pred(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < gt.size(); ++i) {
    const auto g = gt[i].labels();
    const auto p = pred[i].labels();
    for (std::size_t j = 0; j < g.size(); ++j) {
      if (g[j] == gt[i].ignore_index()) continue;
      in_gt[g[j]].insert({i, j});
      if (p[j] < k) in_pred[p[j]].insert({i, j});
    }
  }
  double sum = 0;
  int present = 0;
  for (int c = 0; c < k; ++c) {
    std::set<Pos> inter;
    std::set<Pos> uni;
    std::set_intersection(in_gt[c].begin(), in_gt[c].end(), in_pred[c].begin(), in_pred[c].end(),
                          std::inserter(inter, inter.begin()));
    std::set_union(in_gt[c].begin(), in_gt[c].end(), in_pred[c].begin(), in_pred[c].end(),
                   std::inserter(uni, uni.begin()));
    if (uni.empty()) continue;
    sum += static_cast<double>(inter.size()) / static_cast<double>(uni.size());
    ++present;
  }
  return sum / present;
}

// ------------------------------------------------------------ statistics

// Probability of every ordered k-draw without replacement, proportional to
// weight at each draw, by explicit enumeration.
inline std::map<std::vector<std::size_t>, double> successive_draw_distribution(std::span<const double> w,
                                                                               std::size_t k) {
  std::map<std::vector<std::size_t>, double> out;
  std::vector<std::size_t> seq;
  std::vector<bool> used(w.size(), false);
  auto rec = [&](auto&& self, double prob) -> void {
    if (seq.size() == k) {
      out[seq] = prob;
      return;
    }
    double rest = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (!used[i]) rest += w[i];
    }
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (used[i] || w[i] <= 0) continue;
      used[i] = true;
      seq.push_back(i);
      self(self, prob * w[i] / rest);
      seq.pop_back();
      used[i] = false;
    }
  };
  rec(rec, 1.0);
  return out;
}

struct ChiSquare {
  double statistic = 0;
  int dof = 0;
  double critical = 0;
  bool pass() const { return statistic <= critical; }
};

// Pearson goodness of fit. Cells with expected count below 5 are pooled
// into one cell (dropped if the pooled cell is still below 5 and empty).
inline ChiSquare chi_square(const std::vector<double>& observed, const std::vector<double>& expected,
                            double alpha = 0.001) {
  std::vector<double> obs;
  std::vector<double> exp;
  double pool_o = 0;
  double pool_e = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (expected[i] < 5) {
      pool_o += observed[i];
      pool_e += expected[i];
    } else {
      obs.push_back(observed[i]);
      exp.push_back(expected[i]);
    }
  }
  if (pool_e > 0) {
    obs.push_back(pool_o);
    exp.push_back(pool_e);
  }
  ChiSquare r;
  for (std::size_t i = 0; i < obs.size(); ++i) r.statistic += (obs[i] - exp[i]) * (obs[i] - exp[i]) / exp[i];
  r.dof = static_cast<int>(obs.size()) - 1;
  boost::math::chi_squared dist(std::max(r.dof, 1));
  r.critical = boost::math::quantile(boost::math::complement(dist, alpha));
  return r;
}

}  // namespace oracle
