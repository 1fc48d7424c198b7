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

#include "segaug/metrics.hpp"

#include <string>

#include "segaug/error.hpp"

namespace segaug {

ConfusionMatrix::ConfusionMatrix(int num_classes) : k_(num_classes) {
  SEGAUG_EXPECT(num_classes >= 1, "class count must be >= 1");
  counts_.assign(static_cast<std::size_t>(k_) * static_cast<std::size_t>(k_), 0);
  unpredicted_.assign(static_cast<std::size_t>(k_), 0);
}

void ConfusionMatrix::accumulate(const LabelMask& pred, const LabelMask& gt) {
  if (pred.width() != gt.width() || pred.height() != gt.height()) {
    throw ContractError("prediction and ground truth shapes differ");
  }
  const auto p = pred.labels();
  const auto g = gt.labels();
  for (std::size_t i = 0; i < g.size(); ++i) {
    const int truth = g[i];
    if (truth == gt.ignore_index()) continue;
    if (truth >= k_) throw ContractError("ground-truth label " + std::to_string(truth) + " >= k");
    const int predicted = p[i];
    if (predicted == pred.ignore_index()) {
      ++unpredicted_[static_cast<std::size_t>(truth)];
    } else if (predicted >= k_) {
      throw ContractError("predicted label " + std::to_string(predicted) + " >= k");
    } else {
      ++counts_[static_cast<std::size_t>(truth * k_ + predicted)];
    }
    ++total_;
  }
}

std::optional<double> ConfusionMatrix::iou(int c) const {
  const std::uint64_t tp = count(c, c);
  std::uint64_t fp = 0;
  std::uint64_t fn = unpredicted(c);
  for (int o = 0; o < k_; ++o) {
    if (o == c) continue;
    fp += count(o, c);
    fn += count(c, o);
  }
  const std::uint64_t denom = tp + fp + fn;
  if (denom == 0) return std::nullopt;
  return static_cast<double>(tp) / static_cast<double>(denom);
}

EvalResult miou(std::span<const LabelMask> pred, std::span<const LabelMask> gt, int num_classes) {
  if (pred.empty() || gt.empty()) throw ContractError("empty input");
  if (pred.size() != gt.size()) throw ContractError("prediction and ground truth counts differ");
  ConfusionMatrix cm(num_classes);
  for (std::size_t i = 0; i < pred.size(); ++i) cm.accumulate(pred[i], gt[i]);
  if (cm.total() == 0) throw ContractError("no scored pixels");
  EvalResult result;
  result.pixels_scored = cm.total();
  double sum = 0.0;
  int present = 0;
  for (int c = 0; c < num_classes; ++c) {
    auto value = cm.iou(c);
    result.per_class_iou.push_back(value);
    if (value) {
      sum += *value;
      ++present;
    }
  }
  result.miou = sum / present;
  return result;
}

std::vector<double> class_weights(std::span<const LabelMask> masks, int num_classes) {
  if (masks.empty()) throw ContractError("empty input");
  SEGAUG_EXPECT(num_classes >= 1, "class count must be >= 1");
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(num_classes), 0);
  std::uint64_t total = 0;
  for (const auto& mask : masks) {
    for (auto label : mask.labels()) {
      if (label == mask.ignore_index()) continue;
      if (label >= num_classes) throw ContractError("label " + std::to_string(label) + " >= k");
      ++counts[label];
      ++total;
    }
  }
  if (total == 0) throw ContractError("no scored pixels");
  std::uint64_t present = 0;
  for (auto c : counts) present += c > 0 ? 1 : 0;
  std::vector<double> weights(counts.size(), 0.0);
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] > 0) {
      weights[c] = static_cast<double>(total) / (static_cast<double>(present) * static_cast<double>(counts[c]));
    }
  }
  return weights;
}

}  // namespace segaug
