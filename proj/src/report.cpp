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
#include <cstdio>
#include <limits>
#include <sstream>

#include "segaug/error.hpp"
#include "segaug/search.hpp"
#include "segaug/serialize.hpp"

namespace segaug {
namespace {

constexpr int kMaxBins = 5;

Marginal marginal_table(const Dimension& dim, const std::vector<std::pair<double, double>>& samples) {
  Marginal m;
  m.name = dim.name;
  double lo = samples.front().first;
  double hi = lo;
  for (const auto& [v, s] : samples) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  int bins;
  if (dim.type == DimensionType::Real) {
    bins = kMaxBins;
  } else {
    bins = std::min(kMaxBins, static_cast<int>(std::lround(hi - lo)) + 1);
  }
  auto bin_of = [&](double v) {
    if (dim.type == DimensionType::Real) {
      if (hi <= lo) return 0;
      return std::min(bins - 1, static_cast<int>((v - lo) / (hi - lo) * bins));
    }
    const int levels = static_cast<int>(std::lround(hi - lo)) + 1;
    return static_cast<int>(std::lround(v - lo)) * bins / levels;
  };
  m.bins.resize(static_cast<std::size_t>(bins));
  for (int b = 0; b < bins; ++b) {
    auto& bin = m.bins[static_cast<std::size_t>(b)];
    if (dim.type == DimensionType::Real) {
      bin.lo = lo + (hi - lo) * b / bins;
      bin.hi = lo + (hi - lo) * (b + 1) / bins;
    } else {
      bin.lo = std::numeric_limits<double>::infinity();
      bin.hi = -std::numeric_limits<double>::infinity();
      const int levels = static_cast<int>(std::lround(hi - lo)) + 1;
      for (int v = 0; v < levels; ++v) {
        if (v * bins / levels == b) {
          bin.lo = std::min(bin.lo, lo + v);
          bin.hi = std::max(bin.hi, lo + v);
        }
      }
    }
  }
  std::vector<std::vector<double>> scores(static_cast<std::size_t>(bins));
  for (const auto& [v, s] : samples) scores[static_cast<std::size_t>(bin_of(v))].push_back(s);
  double min_mean = INFINITY;
  double max_mean = -INFINITY;
  for (int b = 0; b < bins; ++b) {
    auto& bin = m.bins[static_cast<std::size_t>(b)];
    const auto& values = scores[static_cast<std::size_t>(b)];
    bin.count = static_cast<int>(values.size());
    if (values.empty()) continue;
    double sum = 0.0;
    for (double s : values) sum += s;
    bin.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
      double sq = 0.0;
      for (double s : values) sq += (s - bin.mean) * (s - bin.mean);
      bin.stddev = std::sqrt(sq / static_cast<double>(values.size() - 1));
    }
    min_mean = std::min(min_mean, bin.mean);
    max_mean = std::max(max_mean, bin.mean);
  }
  m.range = max_mean - min_mean;
  return m;
}

}  // namespace

SearchReport summarize_ledger(std::span<const TrialRecord> records) {
  SearchReport report;
  report.n_trials = static_cast<int>(records.size());
  std::vector<const TrialRecord*> ok;
  for (const auto& r : records) {
    if (r.status == TrialStatus::Ok && r.score) ok.push_back(&r);
  }
  report.n_ok = static_cast<int>(ok.size());
  report.n_failed = report.n_trials - report.n_ok;
  if (ok.empty()) throw LedgerError("empty report: the ledger has no ok trials");

  std::stable_sort(ok.begin(), ok.end(),
                   [](const TrialRecord* a, const TrialRecord* b) { return *a->score > *b->score; });
  report.best = *ok.front();
  const std::size_t top = std::min<std::size_t>(3, ok.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < top; ++i) {
    report.top_trial_ids.push_back(ok[i]->trial_id);
    sum += *ok[i]->score;
  }
  report.top3_mean = sum / static_cast<double>(top);

  for (const auto& space : {SearchSpace::smart(), SearchSpace::rand()}) {
    const bool all_in_kind = std::all_of(ok.begin(), ok.end(), [&](const TrialRecord* r) {
      return (space.kind() == SpaceKind::Smart) == std::holds_alternative<SmartParams>(r->config.params) &&
             (space.kind() == SpaceKind::Rand) == std::holds_alternative<RandParams>(r->config.params);
    });
    if (!all_in_kind) continue;
    const auto& dims = space.dimensions();
    for (std::size_t d = 0; d < dims.size(); ++d) {
      std::vector<std::pair<double, double>> samples;
      for (const auto* r : ok) samples.emplace_back(space.encode(r->config)[d], *r->score);
      report.marginals.push_back(marginal_table(dims[d], samples));
    }
  }
  return report;
}

nlohmann::json to_json(const SearchReport& report) {
  Json marginals = Json::array();
  for (const auto& m : report.marginals) {
    Json bins = Json::array();
    for (const auto& b : m.bins) {
      bins.push_back({{"lo", b.lo}, {"hi", b.hi}, {"count", b.count}, {"mean", b.mean}, {"std", b.stddev}});
    }
    marginals.push_back({{"name", m.name}, {"range", m.range}, {"bins", std::move(bins)}});
  }
  return {{"n_trials", report.n_trials},
          {"n_ok", report.n_ok},
          {"n_failed", report.n_failed},
          {"best", to_json(report.best)},
          {"top_trial_ids", report.top_trial_ids},
          {"top3_mean", report.top3_mean},
          {"marginals", std::move(marginals)}};
}

std::string format_report(const SearchReport& report) {
  std::ostringstream out;
  char line[160];
  out << "trials: " << report.n_trials << " (ok " << report.n_ok << ", failed " << report.n_failed << ")\n";
  std::snprintf(line, sizeof(line), "best:   trial %d  score %.6f  config ", report.best.trial_id,
                *report.best.score);
  out << line << to_json(report.best.config).dump() << '\n';
  std::snprintf(line, sizeof(line), "top-%zu mean score: %.6f\n", report.top_trial_ids.size(), report.top3_mean);
  out << line;
  for (const auto& m : report.marginals) {
    std::snprintf(line, sizeof(line), "\n%-4s (range %.6f)\n  %-17s %6s %10s %10s\n", m.name.c_str(), m.range,
                  "bin", "count", "mean", "std");
    out << line;
    for (const auto& b : m.bins) {
      char label[40];
      std::snprintf(label, sizeof(label), "[%.3g, %.3g]", b.lo, b.hi);
      if (b.count == 0) {
        std::snprintf(line, sizeof(line), "  %-17s %6d %10s %10s\n", label, b.count, "-", "-");
      } else {
        std::snprintf(line, sizeof(line), "  %-17s %6d %10.6f %10.6f\n", label, b.count, b.mean, b.stddev);
      }
      out << line;
    }
  }
  return out.str();
}

}  // namespace segaug
