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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "segaug/evaluator.hpp"
#include "segaug/rng.hpp"
#include "segaug/strategy.hpp"

namespace segaug {

enum class DimensionType { Categorical, Integer, Real };

struct Dimension {
  std::string name;
  DimensionType type;
  double lo;
  double hi;
};

enum class SpaceKind { Smart, Rand };

/// Hyperparameter domain searched over. smart: {n_c, n_g, m_c, m_g, p};
/// rand: {n, m}.
class SearchSpace {
 public:
  static SearchSpace smart();
  /// n in [n_min, n_max], m in [0, 30]; n_max may not exceed the 13-op list.
  static SearchSpace rand(int n_max = 13, int n_min = 1);

  SpaceKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept { return kind_ == SpaceKind::Smart ? "smart" : "rand"; }
  const std::vector<Dimension>& dimensions() const noexcept { return dims_; }

  bool contains(const StrategyConfig& cfg) const;
  std::vector<double> encode(const StrategyConfig& cfg) const;
  StrategyConfig decode(std::span<const double> values, std::uint64_t seed = 0) const;
  /// Independent uniform draw per dimension, in dimension order.
  StrategyConfig sample_uniform(Rng& rng, std::uint64_t seed = 0) const;

 private:
  SearchSpace(SpaceKind kind, std::vector<Dimension> dims) : kind_(kind), dims_(std::move(dims)) {}
  SpaceKind kind_;
  std::vector<Dimension> dims_;
};

enum class TrialStatus { Ok, Failed };

/// One ledger row. `score` is present iff status is Ok.
struct TrialRecord {
  int trial_id = 0;
  StrategyConfig config;
  std::uint64_t seed = 0;
  TrialStatus status = TrialStatus::Ok;
  std::optional<double> score;
  std::optional<double> wall_time;
  std::string error;

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

nlohmann::json to_json(const TrialRecord& record);
TrialRecord trial_from_json(const nlohmann::json& j);

/// Append-only trial ledger, optionally backed by a JSON Lines file that is
/// flushed after every row.
class Ledger {
 public:
  Ledger() = default;
  /// Opens (and validates) an existing ledger file or starts a new one.
  /// Throws LedgerError naming the offending line for unreadable rows.
  static Ledger open(const std::filesystem::path& path);
  static std::vector<TrialRecord> read(const std::filesystem::path& path);

  /// Throws LedgerError unless record.trial_id == size().
  void append(const TrialRecord& record);

  const std::vector<TrialRecord>& records() const noexcept { return records_; }
  std::size_t size() const noexcept { return records_.size(); }
  const std::optional<std::filesystem::path>& path() const noexcept { return path_; }

 private:
  std::vector<TrialRecord> records_;
  std::optional<std::filesystem::path> path_;
};

struct TpeOptions {
  double gamma = 0.25;
  int n_candidates = 24;
  int n_startup = 10;
};

/// Tree-structured Parzen estimator suggestion. Uniform while fewer than
/// n_startup ok trials exist or when every ok score is equal; otherwise
/// splits ok trials at the gamma quantile and returns the candidate (drawn
/// from the good-trial density) maximizing good/bad density ratio.
StrategyConfig tpe_suggest(std::span<const TrialRecord> history, const SearchSpace& space, Rng& rng,
                           const TpeOptions& options = {}, std::uint64_t seed = 0);

/// Row-major (n, then m) enumeration of a rand space.
std::vector<StrategyConfig> grid_points(const SearchSpace& space);

enum class SearchMethod { Grid, Random, Bo };
std::string_view method_name(SearchMethod method);
SearchMethod method_from_name(std::string_view name);

struct SearchOptions {
  SearchMethod method = SearchMethod::Bo;
  SearchSpace space = SearchSpace::smart();
  int budget = 50;
  std::uint64_t seed = 0;
  int jobs = 1;
  bool record_wall_time = false;
  TpeOptions tpe;
};

/// Seed handed to the evaluator for a trial.
std::uint64_t trial_seed(std::uint64_t search_seed, int trial_id);

/// Suggest, evaluate, record until `budget` rows exist. With a ledger path the
/// file is created or resumed; every row is flushed as soon as it is final.
/// Evaluator failures become Failed rows. With jobs > 1, batches of `jobs`
/// trials are suggested against the same ledger snapshot and evaluated in
/// parallel; rows are appended in trial-id order.
/// Throws ConfigError for grid on a smart space and LedgerError for an
/// unreadable or mismatched ledger.
Ledger run_search(const SearchOptions& options, const Evaluator& evaluator,
                  const std::optional<std::filesystem::path>& ledger_path = std::nullopt);

std::vector<TrialRecord> grid_search(const SearchSpace& space, const Evaluator& evaluator, int budget);
std::vector<TrialRecord> random_search(const SearchSpace& space, const Evaluator& evaluator, int budget,
                                       std::uint64_t seed);

struct MarginalBin {
  double lo = 0.0;
  double hi = 0.0;
  int count = 0;
  double mean = 0.0;
  double stddev = 0.0;
};

struct Marginal {
  std::string name;
  std::vector<MarginalBin> bins;
  /// Largest minus smallest bin mean over non-empty bins.
  double range = 0.0;
};

struct SearchReport {
  int n_trials = 0;
  int n_ok = 0;
  int n_failed = 0;
  TrialRecord best;
  std::vector<int> top_trial_ids;  // up to 3, best first
  double top3_mean = 0.0;
  std::vector<Marginal> marginals;
};

/// Best config, mean of the (up to) three best ok scores and per-dimension
/// marginal score tables (up to 5 equal-width bins over the observed range).
/// Throws LedgerError when there is no ok trial.
SearchReport summarize_ledger(std::span<const TrialRecord> records);
nlohmann::json to_json(const SearchReport& report);
std::string format_report(const SearchReport& report);

}  // namespace segaug
