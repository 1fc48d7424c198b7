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
#include <vector>

#include "segaug/error.hpp"
#include "segaug/evaluator.hpp"

namespace segaug {
namespace {

int feature_count(int channels) { return 2 * channels + 3; }

// Appends one feature row per pixel of `image` (row-major pixel order).
void append_features(const Raster& image, std::vector<double>& rows) {
  const int w = image.width();
  const int h = image.height();
  const int ch = image.channels();
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < ch; ++c) rows.push_back(image.at(x, y, c) / 255.0 - 0.5);
      rows.push_back(w > 1 ? static_cast<double>(x) / (w - 1) - 0.5 : 0.0);
      rows.push_back(h > 1 ? static_cast<double>(y) / (h - 1) - 0.5 : 0.0);
      for (int c = 0; c < ch; ++c) {
        int sum = 0;
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            sum += image.at(std::clamp(x + dx, 0, w - 1), std::clamp(y + dy, 0, h - 1), c);
          }
        }
        rows.push_back(sum / (9.0 * 255.0) - 0.5);
      }
      rows.push_back(1.0);
    }
  }
}

class LinearPixelClassifier {
 public:
  LinearPixelClassifier(int num_classes, int features)
      : k_(num_classes), f_(features), weights_(static_cast<std::size_t>(num_classes * features), 0.0) {}

  // Full-batch gradient descent on class-weighted softmax cross-entropy.
  void fit(const std::vector<double>& rows, const std::vector<int>& labels,
           const std::vector<double>& class_weight, int iterations, double learning_rate) {
    const std::size_t n = labels.size();
    if (n == 0) return;
    std::vector<double> grad(weights_.size());
    std::vector<double> prob(static_cast<std::size_t>(k_));
    for (int it = 0; it < iterations; ++it) {
      std::fill(grad.begin(), grad.end(), 0.0);
      double weight_sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double* x = &rows[i * static_cast<std::size_t>(f_)];
        softmax(x, prob);
        const int y = labels[i];
        const double wy = class_weight[static_cast<std::size_t>(y)];
        if (wy == 0.0) continue;
        weight_sum += wy;
        for (int c = 0; c < k_; ++c) {
          const double delta = wy * (prob[static_cast<std::size_t>(c)] - (c == y ? 1.0 : 0.0));
          double* g = &grad[static_cast<std::size_t>(c * f_)];
          for (int j = 0; j < f_; ++j) g[j] += delta * x[j];
        }
      }
      if (weight_sum == 0.0) return;
      const double step = learning_rate / weight_sum;
      for (std::size_t j = 0; j < weights_.size(); ++j) weights_[j] -= step * grad[j];
    }
  }

  int predict(const double* x) const {
    int best = 0;
    double best_score = -INFINITY;
    for (int c = 0; c < k_; ++c) {
      const double s = score(x, c);
      if (s > best_score) {
        best_score = s;
        best = c;
      }
    }
    return best;
  }

 private:
  double score(const double* x, int c) const {
    const double* w = &weights_[static_cast<std::size_t>(c * f_)];
    double s = 0.0;
    for (int j = 0; j < f_; ++j) s += w[j] * x[j];
    return s;
  }

  void softmax(const double* x, std::vector<double>& prob) const {
    double max_score = -INFINITY;
    for (int c = 0; c < k_; ++c) {
      prob[static_cast<std::size_t>(c)] = score(x, c);
      max_score = std::max(max_score, prob[static_cast<std::size_t>(c)]);
    }
    double total = 0.0;
    for (auto& p : prob) {
      p = std::exp(p - max_score);
      total += p;
    }
    for (auto& p : prob) p /= total;
  }

  int k_;
  int f_;
  std::vector<double> weights_;
};

void check_dataset(const Dataset& dataset) {
  if (dataset.num_classes < 2) throw DataError("proxy evaluation needs at least 2 classes");
  if (dataset.train.empty()) throw DataError("proxy evaluation needs a non-empty train split");
  if (dataset.val.empty()) throw DataError("proxy evaluation needs a non-empty val split");
  const int channels = dataset.train.front().image.channels();
  for (const auto* split : {&dataset.train, &dataset.val}) {
    for (const auto& s : *split) {
      if (s.image.channels() != channels) throw DataError("mixed channel counts in dataset");
    }
  }
}

}  // namespace

EvalResult evaluate_proxy_detail(const StrategyConfig& cfg, const Dataset& dataset, std::uint64_t seed,
                                 const ProxyOptions& options) {
  check_dataset(dataset);
  cfg.validate();
  if (options.epochs < 1) throw ConfigError("proxy epochs must be >= 1");
  const int k = dataset.num_classes;
  const int channels = dataset.train.front().image.channels();
  const int f = feature_count(channels);

  std::vector<LabelMask> train_masks;
  for (const auto& s : dataset.train) train_masks.push_back(s.mask);
  std::vector<double> class_weight(static_cast<std::size_t>(k), 1.0);
  try {
    if (options.class_weighted) class_weight = class_weights(train_masks, k);
  } catch (const ContractError& e) {
    throw DataError(std::string("degenerate training masks: ") + e.what());
  }

  LinearPixelClassifier model(k, f);
  std::vector<double> rows;
  std::vector<int> labels;
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    EpochStream stream(dataset.train, cfg, EpochClock{epoch, options.epochs}, seed, options.preprocess);
    rows.clear();
    labels.clear();
    std::vector<double> image_rows;
    for (std::size_t pos = 0; pos < stream.size(); ++pos) {
      const StreamItem item = stream.item(pos);
      image_rows.clear();
      append_features(item.image, image_rows);
      const auto mask = item.mask.labels();
      for (std::size_t p = 0; p < mask.size(); ++p) {
        if (mask[p] == item.mask.ignore_index()) continue;
        rows.insert(rows.end(), image_rows.begin() + static_cast<std::ptrdiff_t>(p * static_cast<std::size_t>(f)),
                    image_rows.begin() + static_cast<std::ptrdiff_t>((p + 1) * static_cast<std::size_t>(f)));
        labels.push_back(mask[p]);
      }
    }
    if (labels.size() > options.max_pixels_per_epoch) {
      // Deterministic subsample: partial Fisher-Yates over row indices.
      Rng rng(derive_seed(seed, static_cast<std::uint64_t>(epoch), 0x5A3B1E));
      std::vector<std::size_t> index(labels.size());
      for (std::size_t i = 0; i < index.size(); ++i) index[i] = i;
      for (std::size_t i = 0; i < options.max_pixels_per_epoch; ++i) {
        std::swap(index[i], index[i + rng.below(index.size() - i)]);
      }
      index.resize(options.max_pixels_per_epoch);
      std::sort(index.begin(), index.end());
      std::vector<double> sub_rows;
      std::vector<int> sub_labels;
      sub_rows.reserve(index.size() * static_cast<std::size_t>(f));
      for (auto i : index) {
        sub_rows.insert(sub_rows.end(), rows.begin() + static_cast<std::ptrdiff_t>(i * static_cast<std::size_t>(f)),
                        rows.begin() + static_cast<std::ptrdiff_t>((i + 1) * static_cast<std::size_t>(f)));
        sub_labels.push_back(labels[i]);
      }
      rows.swap(sub_rows);
      labels.swap(sub_labels);
    }
    model.fit(rows, labels, class_weight, options.iterations_per_epoch, options.learning_rate);
  }

  std::vector<LabelMask> predictions;
  std::vector<LabelMask> truth;
  std::vector<double> image_rows;
  for (const auto& s : dataset.val) {
    image_rows.clear();
    append_features(s.image, image_rows);
    LabelMask pred(s.image.width(), s.image.height(), 0, s.mask.ignore_index());
    auto out = pred.labels();
    for (std::size_t p = 0; p < out.size(); ++p) {
      out[p] = static_cast<std::uint8_t>(model.predict(&image_rows[p * static_cast<std::size_t>(f)]));
    }
    predictions.push_back(std::move(pred));
    truth.push_back(s.mask);
  }
  try {
    return miou(predictions, truth, k);
  } catch (const ContractError& e) {
    throw DataError(std::string("degenerate validation split: ") + e.what());
  }
}

double evaluate_proxy(const StrategyConfig& cfg, const Dataset& dataset, std::uint64_t seed,
                      const ProxyOptions& options) {
  return evaluate_proxy_detail(cfg, dataset, seed, options).miou;
}

ProxyEvaluator::ProxyEvaluator(Dataset dataset, ProxyOptions options)
    : dataset_(std::move(dataset)), options_(std::move(options)) {
  check_dataset(dataset_);
}

double ProxyEvaluator::evaluate(const StrategyConfig& cfg, std::uint64_t seed) const {
  try {
    return evaluate_proxy(cfg, dataset_, seed, options_);
  } catch (const DataError& e) {
    throw EvaluatorError(std::string("proxy evaluation failed: ") + e.what());
  }
}

}  // namespace segaug
