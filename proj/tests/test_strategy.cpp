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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "oracles.hpp"
#include "segaug/error.hpp"
#include "segaug/serialize.hpp"
#include "segaug/strategy.hpp"

using namespace segaug;

namespace {

std::set<OpId> ops_of(const AugPlan& plan) {
  std::set<OpId> out;
  for (const auto& s : plan.steps) out.insert(s.op);
  return out;
}

std::size_t index_in(std::span<const OpId> list, OpId op) {
  return static_cast<std::size_t>(std::find(list.begin(), list.end(), op) - list.begin());
}

}  // namespace

TEST_CASE("smart plan examples") {
  Rng rng(1);
  for (int i = 0; i < 500; ++i) CHECK_FALSE(sample_smart_plan({3, 2, 10, 10, 0.0}, rng).augment);
  for (int i = 0; i < 100; ++i) {
    const AugPlan plan = sample_smart_plan({0, 0, 10, 10, 1.0}, rng);
    CHECK(plan.augment);
    CHECK(plan.steps.empty());
  }
  for (int i = 0; i < 200; ++i) {
    const AugPlan plan = sample_smart_plan({7, 5, 4, 9, 1.0}, rng);
    REQUIRE(plan.steps.size() == 12);
    CHECK(ops_of(plan).size() == 12);
    for (std::size_t k = 0; k < plan.steps.size(); ++k) {
      const bool color = k < 7;
      CHECK((op_spec(plan.steps[k].op).kind == OpKind::Color) == color);
      CHECK(plan.steps[k].magnitude == (color ? 4 : 9));
    }
  }
}

TEST_CASE("smart plans never repeat an op within a group") {
  Rng rng(2);
  for (int i = 0; i < 2000; ++i) {
    const SmartParams cfg{static_cast<int>(rng.below(8)), static_cast<int>(rng.below(6)),
                          static_cast<int>(rng.below(31)), static_cast<int>(rng.below(31)), 1.0};
    const AugPlan plan = sample_smart_plan(cfg, rng);
    CHECK(plan.steps.size() == static_cast<std::size_t>(cfg.n_color + cfg.n_geometric));
    CHECK(ops_of(plan).size() == plan.steps.size());
    for (const auto& s : plan.steps) {
      if (!op_spec(s.op).signed_param) CHECK(s.sign == 1);
      CHECK(s.param == magnitude_to_param(s.op, Magnitude(*s.magnitude), s.sign).value_or(0.0));
    }
  }
}

TEST_CASE("smart config validation") {
  Rng rng(3);
  CHECK_THROWS_AS(sample_smart_plan({8, 0, 0, 0, 1.0}, rng), ConfigError);
  CHECK_THROWS_AS(sample_smart_plan({0, 6, 0, 0, 1.0}, rng), ConfigError);
  CHECK_THROWS_AS(sample_smart_plan({0, 0, 31, 0, 1.0}, rng), ConfigError);
  CHECK_THROWS_AS(sample_smart_plan({0, 0, 0, 0, 1.5}, rng), ConfigError);
  CHECK_THROWS_AS(sample_smart_plan({0, 0, 0, 0, std::nan("")}, rng), ConfigError);
  CHECK_THROWS_AS(make_rand(14, 3).validate(), ConfigError);
  CHECK_THROWS_AS(make_rand(0, 3).validate(), ConfigError);
  CHECK_NOTHROW(make_rand(13, 30).validate());
}

TEST_CASE("smart augment rate equals P within 3 sigma") {
  for (double p : {0.1, 0.5, 0.9}) {
    Rng rng(static_cast<std::uint64_t>(p * 100));
    const int n = 10000;
    int hits = 0;
    for (int i = 0; i < n; ++i) hits += sample_smart_plan({1, 1, 5, 5, p}, rng).augment;
    const double sigma = std::sqrt(n * p * (1 - p));
    CHECK(std::abs(hits - n * p) <= 3 * sigma);
  }
}

TEST_CASE("annealed probability is exactly linear") {
  for (int total : {1, 2, 3, 10, 100}) {
    for (int e = 0; e < total; ++e) {
      const Fraction f = annealed_probability({e, total});
      if (total == 1) {
        CHECK(f.num == f.den);
        continue;
      }
      // f == e / (total - 1) as rationals
      CHECK(f.num * (total - 1) == static_cast<std::int64_t>(e) * f.den);
    }
  }
  CHECK_THROWS_AS(annealed_probability({5, 5}), ContractError);
  CHECK_THROWS_AS(annealed_probability({-1, 5}), ContractError);
  CHECK_THROWS_AS(annealed_probability({0, 0}), ContractError);
}

TEST_CASE("smartsampling plan examples") {
  Rng rng(4);
  const WeightTable w = default_weight_table();
  for (int i = 0; i < 300; ++i) CHECK_FALSE(sample_smartsampling_plan(w, {0, 100}, rng).augment);
  for (int i = 0; i < 300; ++i) {
    const AugPlan plan = sample_smartsampling_plan(w, {99, 100}, rng);
    REQUIRE(plan.augment);
    REQUIRE(plan.steps.size() == 2);
    CHECK(plan.steps[0].op != plan.steps[1].op);
    CHECK(plan.steps[0].magnitude == plan.steps[1].magnitude);
    CHECK(*plan.steps[0].magnitude >= 5);
    CHECK(*plan.steps[0].magnitude <= 30);
  }
  for (int i = 0; i < 50; ++i) CHECK(sample_smartsampling_plan(w, {0, 100}, rng, false).augment);
  const WeightTable pair({{OpId::Rotate, 1.0}, {OpId::ShearX, 1.0}});
  for (int i = 0; i < 200; ++i) {
    CHECK(ops_of(sample_smartsampling_plan(pair, {0, 1}, rng)) == std::set<OpId>{OpId::Rotate, OpId::ShearX});
  }
}

TEST_CASE("smartsampling magnitude is uniform on [5, 30]") {
  Rng rng(5);
  std::vector<double> counts(26, 0.0);
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    counts[static_cast<std::size_t>(*sample_smartsampling_plan(default_weight_table(), {0, 1}, rng).steps[0].magnitude - 5)]++;
  }
  CHECK(oracle::chi_square(counts, std::vector<double>(26, n / 26.0)).pass());
}

TEST_CASE("weight table validation and defaults") {
  CHECK_THROWS_AS(WeightTable({{OpId::Rotate, 1.0}}), ConfigError);
  CHECK_THROWS_AS(WeightTable({{OpId::Rotate, 1.0}, {OpId::ShearX, -1.0}, {OpId::ShearY, 1.0}}), ConfigError);
  CHECK_THROWS_AS(WeightTable({{OpId::Rotate, 1.0}, {OpId::Identity, 1.0}}), ConfigError);
  CHECK_THROWS_AS(WeightTable({{OpId::Rotate, 1.0}, {OpId::ShearX, INFINITY}}), ConfigError);
  const WeightTable def = default_weight_table();
  double total = 0;
  for (double p : def.probabilities()) total += p;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  for (OpId op : smart_ops()) {
    if (op != OpId::Rotate) CHECK(def.weight(OpId::Rotate) > def.weight(op));
  }
  CHECK(load_weight_table(SEGAUG_DATA_DIR "/default_weights.json") == def);
  const auto u = uniform_weight_table().probabilities();
  for (double p : u) CHECK(p == doctest::Approx(1.0 / 12));
}

TEST_CASE("user weight table {A:2, B:1} draws A first with probability 2/3") {
  const WeightTable t({{OpId::Rotate, 2.0}, {OpId::Solarize, 1.0}});
  const auto dist = oracle::successive_draw_distribution(t.probabilities(), 1);
  CHECK(dist.at({index_in(smart_ops(), OpId::Rotate)}) == doctest::Approx(2.0 / 3.0));
  Rng rng(6);
  const int n = 30000;
  int first = 0;
  for (int i = 0; i < n; ++i) first += sample_smartsampling_plan(t, {0, 1}, rng).steps[0].op == OpId::Rotate;
  CHECK(std::abs(first - n * 2.0 / 3.0) <= 3 * std::sqrt(n * 2.0 / 9.0));
}

TEST_CASE("weighted draws without replacement follow the successive-draw distribution") {
  const std::vector<std::vector<double>> tables = {
      {1, 2, 3, 4, 5}, {0.1, 1.3, 0.9, 0.4, 0}, {5, 1, 1, 1, 1}, {1, 1}};
  Rng rng(7);
  for (const auto& w : tables) {
    for (std::size_t k = 1; k <= std::min<std::size_t>(3, w.size()); ++k) {
      const auto dist = oracle::successive_draw_distribution(w, k);
      std::map<std::vector<std::size_t>, double> seen;
      const int n = 10000;
      for (int i = 0; i < n; ++i) seen[weighted_sample_without_replacement(w, k, rng)]++;
      std::vector<double> obs;
      std::vector<double> exp;
      for (const auto& [seq, p] : dist) {
        obs.push_back(seen[seq]);
        exp.push_back(p * n);
      }
      double accounted = 0;
      for (double o : obs) accounted += o;
      CHECK(accounted == n);  // no sequence outside the support
      CHECK(oracle::chi_square(obs, exp).pass());
    }
  }
  CHECK_THROWS(weighted_sample_without_replacement(std::vector<double>{1, 0, 0}, 2, rng));
}

TEST_CASE("rand plan properties") {
  Rng rng(8);
  const std::array<OpId, 1> only_identity{OpId::Identity};
  const AugPlan id = sample_rand_plan({1, 20}, rng, only_identity);
  CHECK(id.augment);
  REQUIRE(id.steps.size() == 1);
  CHECK(id.steps[0].op == OpId::Identity);
  bool repeated = false;
  for (int i = 0; i < 500; ++i) {
    const AugPlan plan = sample_rand_plan({3, 15}, rng);
    CHECK(plan.augment);
    REQUIRE(plan.steps.size() == 3);
    for (const auto& s : plan.steps) CHECK(s.magnitude == 15);
    repeated |= ops_of(plan).size() < 3;
  }
  CHECK(repeated);
}

TEST_CASE("rand and trivial op frequencies are uniform over 13 ops") {
  const int n = 10000;
  Rng rng(9);
  std::vector<double> rand_counts(13, 0.0);
  std::vector<double> trivial_counts(13, 0.0);
  double magnitude_sum = 0;
  for (int i = 0; i < n; ++i) {
    rand_counts[index_in(rand_ops(), sample_rand_plan({1, 9}, rng).steps[0].op)]++;
    const AugPlan t = sample_trivial_plan(rng);
    trivial_counts[index_in(rand_ops(), t.steps[0].op)]++;
    magnitude_sum += *t.steps[0].magnitude;
  }
  const std::vector<double> expected(13, n / 13.0);
  CHECK(oracle::chi_square(rand_counts, expected).pass());
  CHECK(oracle::chi_square(trivial_counts, expected).pass());
  CHECK(std::abs(magnitude_sum / n - 15.0) <= 0.5);
}

TEST_CASE("default plan ranges and flip rate") {
  Rng rng(10);
  const int n = 10000;
  int flips = 0;
  for (int i = 0; i < n; ++i) {
    const AugPlan plan = sample_default_plan(rng);
    CHECK(plan.augment);
    std::size_t k = 0;
    if (plan.steps[0].op == OpId::HorizontalFlip) {
      ++flips;
      k = 1;
    }
    REQUIRE(plan.steps.size() == k + 2);
    CHECK(plan.steps[k].op == OpId::Rotate);
    CHECK(std::abs(plan.steps[k].param) <= 45.0);
    CHECK(plan.steps[k + 1].op == OpId::Scale);
    CHECK(plan.steps[k + 1].param >= 0.65);
    CHECK(plan.steps[k + 1].param <= 1.35);
  }
  CHECK(std::abs(flips / static_cast<double>(n) - 0.5) <= 0.015);
}

TEST_CASE("sampling is seed-deterministic") {
  const std::vector<StrategyConfig> configs = {
      StrategyConfig{DefaultParams{}, 1}, StrategyConfig{TrivialParams{}, 1}, make_rand(4, 12),
      make_smart(3, 2, 12, 7, 0.6), StrategyConfig{SmartSamplingParams{}, 1}};
  for (const auto& cfg : configs) {
    for (std::uint64_t seed : {0ULL, 42ULL}) {
      Rng a(seed);
      Rng b(seed);
      for (int i = 0; i < 50; ++i) CHECK(sample_plan(cfg, {i % 5, 5}, a) == sample_plan(cfg, {i % 5, 5}, b));
    }
  }
}

TEST_CASE("strategy and plan JSON round trips") {
  std::vector<StrategyConfig> configs = {
      StrategyConfig{DefaultParams{}, 3}, StrategyConfig{TrivialParams{}, 0}, make_rand(13, 30, 5),
      make_smart(7, 5, 0, 30, 0.123456789012345, 18446744073709551615ULL),
      StrategyConfig{SmartSamplingParams{uniform_weight_table(), false}, 9}};
  for (const auto& cfg : configs) {
    const Json j = to_json(cfg);
    const StrategyConfig back = strategy_from_json(Json::parse(j.dump()));
    CHECK(back == cfg);
    CHECK(to_json(back).dump() == j.dump());
  }
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    const AugPlan plan = i % 2 ? sample_rand_plan({3, static_cast<int>(rng.below(31))}, rng) : sample_default_plan(rng);
    CHECK(plan_from_json(Json::parse(to_json(plan).dump())) == plan);
  }
}

TEST_CASE("strategy JSON errors") {
  CHECK_THROWS_AS(strategy_from_json(Json::parse(R"({"kind":"smart","n_c":1})")), ConfigError);
  CHECK_THROWS_AS(strategy_from_json(Json::parse(R"({"kind":"bogus"})")), ConfigError);
  CHECK_THROWS_AS(strategy_from_json(Json::parse(R"({"kind":"rand","n":2,"m":3,"x":1})")), ConfigError);
  CHECK_THROWS_AS(strategy_from_json(Json::parse(R"({"kind":"rand","n":2,"m":31})")), ConfigError);
  CHECK_THROWS_AS(strategy_from_json(Json::parse(R"({"kind":"smartsampling","weights":{"Rotate":1}})")),
                  ConfigError);
  CHECK_THROWS_AS(
      plan_from_json(Json::parse(R"({"augment":true,"steps":[{"op":"Rotate","magnitude":30,"sign":1,"param":2.0}]})")),
      ConfigError);
  const auto sampling = strategy_from_json(
      Json::parse(std::string(R"({"kind":"smartsampling","weights":")") + SEGAUG_DATA_DIR + "/default_weights.json\"}"));
  CHECK(std::get<SmartSamplingParams>(sampling.params).weights == default_weight_table());
}
