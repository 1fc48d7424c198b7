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
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "segaug/ops.hpp"
#include "segaug/plan.hpp"
#include "segaug/rng.hpp"

namespace segaug {

/// Sampling weights over the 12 color and geometric ops.
class WeightTable {
 public:
  WeightTable() = default;
  /// Throws ConfigError on unknown or Identity/Default-only ops, negative or
  /// non-finite weights, or fewer than two positive weights.
  explicit WeightTable(std::map<OpId, double> weights);

  double weight(OpId op) const;
  /// Normalized probability of each op in smart_ops() order.
  std::vector<double> probabilities() const;
  const std::map<OpId, double>& entries() const noexcept { return weights_; }

  friend bool operator==(const WeightTable&, const WeightTable&) = default;

 private:
  std::map<OpId, double> weights_;
};

/// Shipped default weights (data/default_weights.json holds the same table).
WeightTable default_weight_table();
/// Equal weight for every op; the "without weighting" ablation arm.
WeightTable uniform_weight_table();
WeightTable load_weight_table(const std::filesystem::path& path);

/// Position in training; drives SmartSamplingAugment's annealed probability.
struct EpochClock {
  int epoch = 0;
  int total_epochs = 1;

  /// Throws ContractError unless 0 <= epoch < total_epochs.
  void validate() const;
};

struct Fraction {
  std::int64_t num;
  std::int64_t den;
  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
};

/// e / (E - 1): 0 at the first epoch, 1 at the last; 1 when E == 1.
Fraction annealed_probability(const EpochClock& clock);

struct DefaultParams {
  friend bool operator==(const DefaultParams&, const DefaultParams&) = default;
};
struct TrivialParams {
  friend bool operator==(const TrivialParams&, const TrivialParams&) = default;
};
struct RandParams {
  int n = 2;
  int m = 9;
  friend bool operator==(const RandParams&, const RandParams&) = default;
};
struct SmartParams {
  int n_color = 0;
  int n_geometric = 0;
  int m_color = 0;
  int m_geometric = 0;
  double p = 0.0;
  friend bool operator==(const SmartParams&, const SmartParams&) = default;
};
struct SmartSamplingParams {
  WeightTable weights = default_weight_table();
  bool anneal = true;
  friend bool operator==(const SmartSamplingParams&, const SmartSamplingParams&) = default;
};

using StrategyParams =
    std::variant<DefaultParams, TrivialParams, RandParams, SmartParams, SmartSamplingParams>;

/// A fully resolved augmentation strategy.
struct StrategyConfig {
  StrategyParams params;
  std::uint64_t seed = 0;

  std::string_view kind() const;
  /// Throws ConfigError when a hyperparameter is outside its bounds.
  void validate() const;

  friend bool operator==(const StrategyConfig&, const StrategyConfig&) = default;
};

StrategyConfig make_smart(int n_color, int n_geometric, int m_color, int m_geometric, double p,
                          std::uint64_t seed = 0);
StrategyConfig make_rand(int n, int m, std::uint64_t seed = 0);

AugPlan sample_smart_plan(const SmartParams& cfg, Rng& rng);
AugPlan sample_smartsampling_plan(const WeightTable& weights, const EpochClock& clock, Rng& rng,
                                  bool anneal = true);
/// N draws with replacement from `ops` (defaults to rand_ops()).
AugPlan sample_rand_plan(const RandParams& cfg, Rng& rng, std::span<const OpId> ops = rand_ops());
AugPlan sample_trivial_plan(Rng& rng, std::span<const OpId> ops = rand_ops());
AugPlan sample_default_plan(Rng& rng);

/// Dispatches on the strategy kind.
AugPlan sample_plan(const StrategyConfig& cfg, const EpochClock& clock, Rng& rng);

/// Draws k distinct indices with probability proportional to weight,
/// removing each drawn index before the next draw.
std::vector<std::size_t> weighted_sample_without_replacement(std::span<const double> weights,
                                                             std::size_t k, Rng& rng);

}  // namespace segaug
