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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "segaug/search.hpp"

namespace segaug {
namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Parzen density over one dimension: one kernel per observation plus a
// uniform prior component, all equally weighted.
class ParzenDensity {
 public:
  ParzenDensity(const Dimension& dim, std::vector<double> points) : dim_(dim), points_(std::move(points)) {
    const double width = dim.hi - dim.lo;
    const double n = static_cast<double>(points_.size());
    if (dim.type == DimensionType::Real) {
      bandwidth_ = std::max(width / (1.0 + n), 0.01 * width);
    } else {
      bandwidth_ = std::max(width / (1.0 + n), 1.0);
    }
    if (dim.type != DimensionType::Real) build_pmf();
  }

  double log_density(double x) const {
    if (dim_.type != DimensionType::Real) {
      return std::log(pmf_[static_cast<std::size_t>(std::lround(x - dim_.lo))]);
    }
    const double width = dim_.hi - dim_.lo;
    double total = 1.0 / width;
    for (double mu : points_) total += gaussian_pdf(x, mu) / mass(mu);
    return std::log(total / (static_cast<double>(points_.size()) + 1.0));
  }

  double sample(Rng& rng) const {
    if (dim_.type != DimensionType::Real) {
      const double u = rng.uniform01();
      double cumulative = 0.0;
      for (std::size_t i = 0; i < pmf_.size(); ++i) {
        cumulative += pmf_[i];
        if (u < cumulative) return dim_.lo + static_cast<double>(i);
      }
      return dim_.hi;
    }
    const std::size_t component = rng.below(points_.size() + 1);
    if (component == points_.size()) return rng.uniform(dim_.lo, dim_.hi);
    const double mu = points_[component];
    for (int attempt = 0; attempt < 64; ++attempt) {
      const double x = mu + bandwidth_ * rng.normal();
      if (x >= dim_.lo && x <= dim_.hi) return x;
    }
    return std::clamp(mu, dim_.lo, dim_.hi);
  }

 private:
  double gaussian_pdf(double x, double mu) const {
    const double z = (x - mu) / bandwidth_;
    return std::exp(-0.5 * z * z) / (bandwidth_ * std::sqrt(2.0 * M_PI));
  }

  double mass(double mu) const {
    return normal_cdf((dim_.hi - mu) / bandwidth_) - normal_cdf((dim_.lo - mu) / bandwidth_);
  }

  void build_pmf() {
    const auto levels = static_cast<std::size_t>(std::lround(dim_.hi - dim_.lo)) + 1;
    pmf_.assign(levels, 0.0);
    if (dim_.type == DimensionType::Categorical) {
      // Smoothed counts with one pseudo-observation spread over all levels.
      for (double x : points_) pmf_[static_cast<std::size_t>(std::lround(x - dim_.lo))] += 1.0;
      for (auto& p : pmf_) p += 1.0 / static_cast<double>(levels);
    } else {
      // Lattice-normalized Gaussian kernels plus the uniform prior.
      std::vector<double> kernel(levels);
      for (double mu : points_) {
        double z = 0.0;
        for (std::size_t i = 0; i < levels; ++i) {
          const double d = (dim_.lo + static_cast<double>(i) - mu) / bandwidth_;
          kernel[i] = std::exp(-0.5 * d * d);
          z += kernel[i];
        }
        for (std::size_t i = 0; i < levels; ++i) pmf_[i] += kernel[i] / z;
      }
      for (auto& p : pmf_) p += 1.0 / static_cast<double>(levels);
    }
    const double total = std::accumulate(pmf_.begin(), pmf_.end(), 0.0);
    for (auto& p : pmf_) p /= total;
  }

  Dimension dim_;
  std::vector<double> points_;
  double bandwidth_ = 1.0;
  std::vector<double> pmf_;
};

}  // namespace

StrategyConfig tpe_suggest(std::span<const TrialRecord> history, const SearchSpace& space, Rng& rng,
                           const TpeOptions& options, std::uint64_t seed) {
  std::vector<const TrialRecord*> ok;
  for (const auto& r : history) {
    if (r.status == TrialStatus::Ok && r.score && space.contains(r.config)) ok.push_back(&r);
  }
  if (static_cast<int>(ok.size()) < options.n_startup) return space.sample_uniform(rng, seed);
  const bool degenerate = std::all_of(ok.begin(), ok.end(), [&](const TrialRecord* r) {
    return *r->score == *ok.front()->score;
  });
  if (degenerate) return space.sample_uniform(rng, seed);

  std::stable_sort(ok.begin(), ok.end(),
                   [](const TrialRecord* a, const TrialRecord* b) { return *a->score > *b->score; });
  const auto n = ok.size();
  const auto n_good = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::ceil(options.gamma * static_cast<double>(n))), 1, n - 1);

  const auto& dims = space.dimensions();
  std::vector<ParzenDensity> good;
  std::vector<ParzenDensity> bad;
  for (std::size_t d = 0; d < dims.size(); ++d) {
    std::vector<double> good_points;
    std::vector<double> bad_points;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = space.encode(ok[i]->config)[d];
      (i < n_good ? good_points : bad_points).push_back(v);
    }
    good.emplace_back(dims[d], std::move(good_points));
    bad.emplace_back(dims[d], std::move(bad_points));
  }

  std::vector<double> best;
  double best_ratio = -INFINITY;
  for (int c = 0; c < options.n_candidates; ++c) {
    std::vector<double> candidate(dims.size());
    double ratio = 0.0;
    for (std::size_t d = 0; d < dims.size(); ++d) {
      candidate[d] = good[d].sample(rng);
      ratio += good[d].log_density(candidate[d]) - bad[d].log_density(candidate[d]);
    }
    if (ratio > best_ratio) {
      best_ratio = ratio;
      best = std::move(candidate);
    }
  }
  return space.decode(best, seed);
}

}  // namespace segaug
