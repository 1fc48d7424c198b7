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

#include "segaug/plan.hpp"

#include "segaug/error.hpp"

namespace segaug {

PlanStep make_step(OpId op, Magnitude m, int sign) {
  PlanStep step;
  step.op = op;
  step.magnitude = m.value();
  step.sign = op_spec(op).signed_param ? sign : 1;
  step.param = magnitude_to_param(op, m, step.sign).value_or(0.0);
  return step;
}

PlanStep make_param_step(OpId op, double param, int sign) {
  SEGAUG_EXPECT(sign == 1 || sign == -1, "sign must be +1 or -1");
  PlanStep step;
  step.op = op;
  step.sign = sign;
  step.param = param;
  return step;
}

ImageAndMask apply_plan(const AugPlan& plan, const Raster& image, const LabelMask& mask) {
  expect_same_shape(image, mask);
  ImageAndMask out{image, mask};
  if (!plan.augment) return out;
  for (const auto& step : plan.steps) {
    switch (op_spec(step.op).kind) {
      case OpKind::Identity: break;
      case OpKind::Color: out.image = apply_color_op(step.op, step.param, out.image); break;
      case OpKind::Geometric:
        out = apply_geometric_op(step.op, step.param, out.image, out.mask);
        break;
    }
  }
  return out;
}

}  // namespace segaug
