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
#include <optional>
#include <span>
#include <vector>

#include "segaug/raster.hpp"

namespace segaug {

/// k x k pixel counts, rows = ground truth, columns = prediction. Pixels whose
/// ground truth is ignore_index are never counted; pixels predicted as
/// ignore_index count as misses of their ground-truth class.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(int num_classes);

  /// Throws ContractError on shape mismatch or invalid labels.
  void accumulate(const LabelMask& pred, const LabelMask& gt);

  int num_classes() const noexcept { return k_; }
  std::uint64_t count(int truth, int predicted) const {
    return counts_[static_cast<std::size_t>(truth * k_ + predicted)];
  }
  std::uint64_t unpredicted(int truth) const { return unpredicted_[static_cast<std::size_t>(truth)]; }
  std::uint64_t total() const noexcept { return total_; }

  /// TP / (TP + FP + FN); empty when the class is absent from both.
  std::optional<double> iou(int c) const;

 private:
  int k_;
  std::vector<std::uint64_t> counts_;
  std::vector<std::uint64_t> unpredicted_;
  std::uint64_t total_ = 0;
};

struct EvalResult {
  double miou = 0.0;
  std::vector<std::optional<double>> per_class_iou;
  std::uint64_t pixels_scored = 0;
};

/// Mean IoU from one confusion matrix aggregated over all pairs. Classes
/// absent from both prediction and ground truth are left out of the mean.
/// Throws ContractError on empty input, shape mismatch or no scored pixels.
EvalResult miou(std::span<const LabelMask> pred, std::span<const LabelMask> gt, int num_classes);

/// Inverse pixel-frequency class weights: total / (present_classes * count_c),
/// 0 for absent classes. Throws ContractError when no pixel is scored.
std::vector<double> class_weights(std::span<const LabelMask> masks, int num_classes);

}  // namespace segaug
