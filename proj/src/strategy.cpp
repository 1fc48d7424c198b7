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

#include "segaug/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "segaug/error.hpp"
#include "segaug/serialize.hpp"

namespace segaug {
namespace {

// Uniform draw of k distinct entries, in draw order (partial Fisher-Yates).
std::vector<OpId> sample_distinct(std::span<const OpId> ops, int k, Rng& rng) {
  std::vector<OpId> pool(ops.begin(), ops.end());
  for (std::size_t i = 0; i < static_cast<std::size_t>(k); ++i) {
    const std::size_t j = i + rng.below(pool.size() - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(static_cast<std::size_t>(k));
  return pool;
}

PlanStep sampled_step(OpId op, Magnitude m, Rng& rng) {
  const int sign = op_spec(op).signed_param ? rng.sign() : 1;
  return make_step(op, m, sign);
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

WeightTable::WeightTable(std::map<OpId, double> weights) : weights_(std::move(weights)) {
  int positive = 0;
  for (const auto& [op, w] : weights_) {
    if (std::find(smart_ops().begin(), smart_ops().end(), op) == smart_ops().end()) {
      throw ConfigError("weight table entry '" + std::string(op_name(op)) +
                        "' is not a color or geometric op");
    }
    if (!std::isfinite(w) || w < 0.0) {
      throw ConfigError("weight for '" + std::string(op_name(op)) + "' must be finite and >= 0");
    }
    if (w > 0.0) ++positive;
  }
  if (positive < 2) throw ConfigError("weight table needs at least two ops with positive weight");
  for (OpId op : smart_ops()) weights_.try_emplace(op, 0.0);
}

double WeightTable::weight(OpId op) const {
  const auto it = weights_.find(op);
  return it == weights_.end() ? 0.0 : it->second;
}

std::vector<double> WeightTable::probabilities() const {
  std::vector<double> p;
  p.reserve(smart_ops().size());
  for (OpId op : smart_ops()) p.push_back(weight(op));
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  for (auto& v : p) v /= total;
  return p;
}

WeightTable default_weight_table() {
  // Ops with a positive average improvement when added to a random op subset
  // (CIFAR-10 ablation), improvement values used as unnormalized weights.
  return WeightTable({
      {OpId::Rotate, 1.3},
      {OpId::ShearX, 0.9},
      {OpId::ShearY, 0.9},
      {OpId::TranslateX, 0.4},
      {OpId::TranslateY, 0.4},
      {OpId::AutoContrast, 0.1},
      {OpId::Sharpness, 0.1},
  });
}

WeightTable uniform_weight_table() {
  std::map<OpId, double> weights;
  for (OpId op : smart_ops()) weights[op] = 1.0;
  return WeightTable(std::move(weights));
}

WeightTable load_weight_table(const std::filesystem::path& path) {
  return weight_table_from_json(read_json_file(path));
}

void EpochClock::validate() const {
  if (total_epochs <= 0) throw ContractError("total_epochs must be > 0");
  if (epoch < 0 || epoch >= total_epochs) {
    throw ContractError("epoch " + std::to_string(epoch) + " outside [0, " +
                        std::to_string(total_epochs) + ")");
  }
}

Fraction annealed_probability(const EpochClock& clock) {
  clock.validate();
  if (clock.total_epochs == 1) return {1, 1};
  return {clock.epoch, clock.total_epochs - 1};
}

std::string_view StrategyConfig::kind() const {
  return std::visit(Overloaded{
                        [](const DefaultParams&) { return std::string_view("default"); },
                        [](const TrivialParams&) { return std::string_view("trivial"); },
                        [](const RandParams&) { return std::string_view("rand"); },
                        [](const SmartParams&) { return std::string_view("smart"); },
                        [](const SmartSamplingParams&) { return std::string_view("smartsampling"); },
                    },
                    params);
}

void StrategyConfig::validate() const {
  auto check_magnitude = [](int m, const char* name) {
    if (m < 0 || m > kMaxMagnitude) {
      throw ConfigError(std::string(name) + " = " + std::to_string(m) + " outside [0, 30]");
    }
  };
  std::visit(Overloaded{
                 [](const DefaultParams&) {},
                 [](const TrivialParams&) {},
                 [&](const RandParams& r) {
                   const int list_size = static_cast<int>(rand_ops().size());
                   if (r.n < 1 || r.n > list_size) {
                     throw ConfigError("n = " + std::to_string(r.n) + " outside [1, " +
                                       std::to_string(list_size) + "]");
                   }
                   check_magnitude(r.m, "m");
                 },
                 [&](const SmartParams& s) {
                   if (s.n_color < 0 || s.n_color > static_cast<int>(color_ops().size())) {
                     throw ConfigError("n_c = " + std::to_string(s.n_color) + " outside [0, 7]");
                   }
                   if (s.n_geometric < 0 || s.n_geometric > static_cast<int>(geometric_ops().size())) {
                     throw ConfigError("n_g = " + std::to_string(s.n_geometric) + " outside [0, 5]");
                   }
                   check_magnitude(s.m_color, "m_c");
                   check_magnitude(s.m_geometric, "m_g");
                   if (!(s.p >= 0.0 && s.p <= 1.0)) throw ConfigError("p outside [0, 1]");
                 },
                 [](const SmartSamplingParams&) {},
             },
             params);
}

StrategyConfig make_smart(int n_color, int n_geometric, int m_color, int m_geometric, double p,
                          std::uint64_t seed) {
  StrategyConfig cfg{SmartParams{n_color, n_geometric, m_color, m_geometric, p}, seed};
  cfg.validate();
  return cfg;
}

StrategyConfig make_rand(int n, int m, std::uint64_t seed) {
  StrategyConfig cfg{RandParams{n, m}, seed};
  cfg.validate();
  return cfg;
}

std::vector<std::size_t> weighted_sample_without_replacement(std::span<const double> weights,
                                                             std::size_t k, Rng& rng) {
  std::vector<double> remaining(weights.begin(), weights.end());
  const auto positive = static_cast<std::size_t>(
      std::count_if(remaining.begin(), remaining.end(), [](double w) { return w > 0.0; }));
  if (positive < k) {
    throw ConfigError("cannot draw " + std::to_string(k) + " distinct ops from " +
                      std::to_string(positive) + " positive weights");
  }
  std::vector<std::size_t> drawn;
  drawn.reserve(k);
  for (std::size_t draw = 0; draw < k; ++draw) {
    const double total = std::accumulate(remaining.begin(), remaining.end(), 0.0);
    const double r = rng.uniform01() * total;
    double cumulative = 0.0;
    std::size_t chosen = remaining.size();
    for (std::size_t i = 0; i < remaining.size(); ++i) {
      if (remaining[i] <= 0.0) continue;
      chosen = i;
      cumulative += remaining[i];
      if (r < cumulative) break;
    }
    drawn.push_back(chosen);
    remaining[chosen] = 0.0;
  }
  return drawn;
}

AugPlan sample_smart_plan(const SmartParams& cfg, Rng& rng) {
  StrategyConfig{cfg, 0}.validate();
  AugPlan plan;
  if (!rng.bernoulli(cfg.p)) return plan;  // do not augment
  plan.augment = true;
  const Magnitude m_color(cfg.m_color);
  const Magnitude m_geometric(cfg.m_geometric);
  for (OpId op : sample_distinct(color_ops(), cfg.n_color, rng)) {
    plan.steps.push_back(sampled_step(op, m_color, rng));
  }
  for (OpId op : sample_distinct(geometric_ops(), cfg.n_geometric, rng)) {
    plan.steps.push_back(sampled_step(op, m_geometric, rng));
  }
  return plan;
}

AugPlan sample_smartsampling_plan(const WeightTable& weights, const EpochClock& clock, Rng& rng,
                                  bool anneal) {
  const double p = anneal ? annealed_probability(clock).value() : (clock.validate(), 1.0);
  const auto probabilities = weights.probabilities();
  const auto positive = std::count_if(probabilities.begin(), probabilities.end(),
                                      [](double w) { return w > 0.0; });
  if (positive < 2) throw ConfigError("weight table needs at least two ops with positive weight");
  AugPlan plan;
  if (!rng.bernoulli(p)) return plan;
  plan.augment = true;
  const auto picks = weighted_sample_without_replacement(probabilities, 2, rng);
  const Magnitude m(rng.integer(5, kMaxMagnitude));
  for (std::size_t index : picks) plan.steps.push_back(sampled_step(smart_ops()[index], m, rng));
  return plan;
}

AugPlan sample_rand_plan(const RandParams& cfg, Rng& rng, std::span<const OpId> ops) {
  if (ops.empty()) throw ConfigError("rand op list is empty");
  if (cfg.n < 1) throw ConfigError("n must be >= 1");
  const Magnitude m(cfg.m);
  AugPlan plan;
  plan.augment = true;
  for (int i = 0; i < cfg.n; ++i) {
    const OpId op = ops[rng.below(ops.size())];
    plan.steps.push_back(sampled_step(op, m, rng));
  }
  return plan;
}

AugPlan sample_trivial_plan(Rng& rng, std::span<const OpId> ops) {
  if (ops.empty()) throw ConfigError("trivial op list is empty");
  AugPlan plan;
  plan.augment = true;
  const OpId op = ops[rng.below(ops.size())];
  const Magnitude m(rng.integer(0, kMaxMagnitude));
  plan.steps.push_back(sampled_step(op, m, rng));
  return plan;
}

AugPlan sample_default_plan(Rng& rng) {
  AugPlan plan;
  plan.augment = true;
  if (rng.bernoulli(0.5)) plan.steps.push_back(make_param_step(OpId::HorizontalFlip, 0.0));
  const double angle = rng.uniform(-45.0, 45.0);
  plan.steps.push_back(make_param_step(OpId::Rotate, angle, angle < 0.0 ? -1 : 1));
  const double offset = rng.uniform(-0.35, 0.35);
  plan.steps.push_back(make_param_step(OpId::Scale, 1.0 + offset, offset < 0.0 ? -1 : 1));
  return plan;
}

AugPlan sample_plan(const StrategyConfig& cfg, const EpochClock& clock, Rng& rng) {
  return std::visit(Overloaded{
                        [&](const DefaultParams&) { return sample_default_plan(rng); },
                        [&](const TrivialParams&) { return sample_trivial_plan(rng); },
                        [&](const RandParams& r) {
                          StrategyConfig{r, 0}.validate();
                          return sample_rand_plan(r, rng);
                        },
                        [&](const SmartParams& s) { return sample_smart_plan(s, rng); },
                        [&](const SmartSamplingParams& s) {
                          return sample_smartsampling_plan(s.weights, clock, rng, s.anneal);
                        },
                    },
                    cfg.params);
}

}  // namespace segaug
