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

#include <optional>
#include <vector>

#include "segaug/kernels.hpp"
#include "segaug/ops.hpp"
#include "segaug/raster.hpp"

namespace segaug {

/// One resolved augmentation step. Magnitude-driven steps carry their
/// magnitude and the param derived from it; DefaultAugment steps carry only
/// the sampled param.
struct PlanStep {
  OpId op = OpId::Identity;
  std::optional<int> magnitude;
  int sign = 1;
  double param = 0.0;

  friend bool operator==(const PlanStep&, const PlanStep&) = default;
};

/// Per-image augmentation decision; replayable through apply_plan.
struct AugPlan {
  bool augment = false;
  std::vector<PlanStep> steps;

  friend bool operator==(const AugPlan&, const AugPlan&) = default;
};

/// Step whose param is magnitude_to_param(op, m, sign). Unsigned ops get sign +1.
PlanStep make_step(OpId op, Magnitude m, int sign = 1);
/// Step with an explicit kernel parameter (no magnitude).
PlanStep make_param_step(OpId op, double param, int sign = 1);

/// Applies the plan's steps in order; color ops touch the image only,
/// geometric ops transform image and mask jointly.
ImageAndMask apply_plan(const AugPlan& plan, const Raster& image, const LabelMask& mask);

}  // namespace segaug
