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

#include "segaug/ops.hpp"

#include <cmath>
#include <string>

#include "segaug/error.hpp"

namespace segaug {
namespace {

constexpr std::array<OpSpec, 15> kOpTable{{
    {OpId::Sharpness, "Sharpness", OpKind::Color, {0.1, 1.9}, true, false},
    {OpId::AutoContrast, "AutoContrast", OpKind::Color, {0.0, 1.0}, false, true},
    {OpId::Equalize, "Equalize", OpKind::Color, {0.0, 1.0}, false, true},
    {OpId::Solarize, "Solarize", OpKind::Color, {0.0, 256.0}, false, false},
    {OpId::Color, "Color", OpKind::Color, {0.1, 1.9}, true, false},
    {OpId::Contrast, "Contrast", OpKind::Color, {0.1, 1.9}, true, false},
    {OpId::Brightness, "Brightness", OpKind::Color, {0.1, 1.9}, true, false},
    {OpId::Rotate, "Rotate", OpKind::Geometric, {0.0, 30.0}, true, false},
    {OpId::ShearX, "ShearX", OpKind::Geometric, {0.0, 0.3}, true, false},
    {OpId::ShearY, "ShearY", OpKind::Geometric, {0.0, 0.3}, true, false},
    {OpId::TranslateX, "TranslateX", OpKind::Geometric, {0.0, 0.33}, true, false},
    {OpId::TranslateY, "TranslateY", OpKind::Geometric, {0.0, 0.33}, true, false},
    {OpId::Identity, "Identity", OpKind::Identity, {0.0, 0.0}, false, true},
    {OpId::HorizontalFlip, "HorizontalFlip", OpKind::Geometric, {0.0, 0.0}, false, true},
    {OpId::Scale, "Scale", OpKind::Geometric, {0.65, 1.35}, false, false},
}};

constexpr std::array<OpId, 7> kColorOps{OpId::Sharpness, OpId::AutoContrast, OpId::Equalize,
                                        OpId::Solarize,  OpId::Color,        OpId::Contrast,
                                        OpId::Brightness};
constexpr std::array<OpId, 5> kGeometricOps{OpId::Rotate, OpId::ShearX, OpId::ShearY,
                                            OpId::TranslateX, OpId::TranslateY};
constexpr std::array<OpId, 12> kSmartOps{
    OpId::Sharpness, OpId::AutoContrast, OpId::Equalize, OpId::Solarize,
    OpId::Color,     OpId::Contrast,     OpId::Brightness, OpId::Rotate,
    OpId::ShearX,    OpId::ShearY,       OpId::TranslateX, OpId::TranslateY};
constexpr std::array<OpId, 13> kRandOps{
    OpId::Sharpness, OpId::AutoContrast, OpId::Equalize,   OpId::Solarize,  OpId::Color,
    OpId::Contrast,  OpId::Brightness,   OpId::Rotate,     OpId::ShearX,    OpId::ShearY,
    OpId::TranslateX, OpId::TranslateY,  OpId::Identity};
constexpr std::array<OpId, 15> kAllOps{
    OpId::Sharpness, OpId::AutoContrast, OpId::Equalize,   OpId::Solarize,  OpId::Color,
    OpId::Contrast,  OpId::Brightness,   OpId::Rotate,     OpId::ShearX,    OpId::ShearY,
    OpId::TranslateX, OpId::TranslateY,  OpId::Identity,   OpId::HorizontalFlip, OpId::Scale};

bool is_enhancement(OpId op) {
  return op == OpId::Sharpness || op == OpId::Color || op == OpId::Contrast ||
         op == OpId::Brightness;
}

}  // namespace

Magnitude::Magnitude(int value) : value_(value) {
  if (value < 0 || value > kMaxMagnitude) {
    throw ContractError("magnitude " + std::to_string(value) + " outside [0, 30]");
  }
}

const OpSpec& op_spec(OpId id) { return kOpTable[static_cast<std::size_t>(id)]; }

std::string_view op_name(OpId id) { return op_spec(id).name; }

bool is_known_op_name(std::string_view name) {
  for (const auto& spec : kOpTable) {
    if (spec.name == name) return true;
  }
  return false;
}

OpId op_from_name(std::string_view name) {
  for (const auto& spec : kOpTable) {
    if (spec.name == name) return spec.id;
  }
  std::string valid;
  for (const auto& spec : kOpTable) {
    if (!valid.empty()) valid += ", ";
    valid += spec.name;
  }
  throw ConfigError("unknown op '" + std::string(name) + "'; valid ops: " + valid);
}

std::span<const OpId> color_ops() { return kColorOps; }
std::span<const OpId> geometric_ops() { return kGeometricOps; }
std::span<const OpId> smart_ops() { return kSmartOps; }
std::span<const OpId> rand_ops() { return kRandOps; }
std::span<const OpId> all_ops() { return kAllOps; }

std::optional<double> magnitude_to_param(OpId op, Magnitude m, int sign) {
  if (sign != 1 && sign != -1) throw ContractError("sign must be +1 or -1");
  const OpSpec& spec = op_spec(op);
  if (op == OpId::HorizontalFlip || op == OpId::Scale) {
    throw ContractError(std::string(spec.name) + " has no magnitude mapping");
  }
  if (spec.parameterless) return std::nullopt;
  const int s = spec.signed_param ? sign : 1;
  if (op == OpId::Solarize) return 256.0 - m.fraction() * 256.0;
  if (is_enhancement(op)) return 1.0 + s * m.fraction() * 0.9;
  return s * (spec.range.lo + m.fraction() * (spec.range.hi - spec.range.lo));
}

double effect_strength(OpId op, double param) {
  const OpSpec& spec = op_spec(op);
  if (spec.parameterless) return 0.0;
  if (op == OpId::Solarize) return 256.0 - param;
  if (is_enhancement(op) || op == OpId::Scale) return std::abs(param - 1.0);
  return std::abs(param);
}

}  // namespace segaug
