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

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>

#include "segaug/data.hpp"
#include "segaug/metrics.hpp"
#include "segaug/strategy.hpp"

namespace segaug {

/// Scores one strategy configuration (higher is better). Implementations
/// must be safe to call concurrently and throw EvaluatorError on failure.
class Evaluator {
 public:
  virtual ~Evaluator() = default;
  virtual double evaluate(const StrategyConfig& cfg, std::uint64_t seed) const = 0;
};

class FunctionEvaluator final : public Evaluator {
 public:
  using Fn = std::function<double(const StrategyConfig&, std::uint64_t)>;
  explicit FunctionEvaluator(Fn fn) : fn_(std::move(fn)) {}
  double evaluate(const StrategyConfig& cfg, std::uint64_t seed) const override { return fn_(cfg, seed); }

 private:
  Fn fn_;
};

/// File-based protocol for an external trainer:
///   input  JSON {"config": <strategy>, "seed": <int>, "out": "<path>"}
///   invoke `<command> <input-path>` through /bin/sh
///   output JSON at "out": {"miou": <real in [0, 1]>}, exit status 0
struct ExternalSpec {
  std::string command;
  std::chrono::milliseconds timeout{std::chrono::hours(24)};
  /// Parent of the per-trial scratch directories; system temp dir when empty.
  std::filesystem::path work_root;
  bool keep_files = false;
};

/// Runs one external trial. Throws EvaluatorError (with the command's
/// captured output as diagnostics) on non-zero exit, timeout or a malformed
/// result file.
double evaluate_external(const StrategyConfig& cfg, std::uint64_t seed, const ExternalSpec& spec);

class ExternalEvaluator final : public Evaluator {
 public:
  explicit ExternalEvaluator(ExternalSpec spec);
  double evaluate(const StrategyConfig& cfg, std::uint64_t seed) const override {
    return evaluate_external(cfg, seed, spec_);
  }

 private:
  ExternalSpec spec_;
};

struct ProxyOptions {
  int epochs = 3;
  int iterations_per_epoch = 30;
  double learning_rate = 2.0;
  std::size_t max_pixels_per_epoch = 40000;
  bool class_weighted = true;
  std::optional<PreprocessSpec> preprocess;
};

/// Per-pixel multinomial linear classifier trained on augmented training
/// images and scored by mIoU on the unaugmented validation split. Features:
/// channel values, normalized coordinates, 3x3 local channel means, bias.
/// Pure function of (cfg, dataset, seed, options).
/// Throws DataError for a degenerate dataset.
EvalResult evaluate_proxy_detail(const StrategyConfig& cfg, const Dataset& dataset, std::uint64_t seed,
                                 const ProxyOptions& options = {});
double evaluate_proxy(const StrategyConfig& cfg, const Dataset& dataset, std::uint64_t seed,
                      const ProxyOptions& options = {});

class ProxyEvaluator final : public Evaluator {
 public:
  ProxyEvaluator(Dataset dataset, ProxyOptions options = {});
  double evaluate(const StrategyConfig& cfg, std::uint64_t seed) const override;
  const Dataset& dataset() const noexcept { return dataset_; }

 private:
  Dataset dataset_;
  ProxyOptions options_;
};

}  // namespace segaug
