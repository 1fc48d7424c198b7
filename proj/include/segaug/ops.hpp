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

#include <array>
#include <optional>
#include <span>
#include <string_view>

namespace segaug {

enum class OpId {
  // color
  Sharpness,
  AutoContrast,
  Equalize,
  Solarize,
  Color,
  Contrast,
  Brightness,
  // geometric
  Rotate,
  ShearX,
  ShearY,
  TranslateX,
  TranslateY,
  // no-op, only in the RandAugment/TrivialAugment sampling list
  Identity,
  // DefaultAugment kernels; not part of the magnitude-driven op table
  HorizontalFlip,
  Scale,
};

enum class OpKind { Color, Geometric, Identity };

struct ParamRange {
  double lo;
  double hi;
};

/// Static description of one augmentation operation.
struct OpSpec {
  OpId id;
  std::string_view name;
  OpKind kind;
  ParamRange range;
  bool signed_param;   // a random sign applies to the displacement / factor
  bool parameterless;  // AutoContrast, Equalize, Identity
};

inline constexpr int kMaxMagnitude = 30;

/// Integer augmentation strength in [0, 30].
class Magnitude {
 public:
  /// Throws ContractError when value is outside [0, 30].
  explicit Magnitude(int value);
  int value() const noexcept { return value_; }
  double fraction() const noexcept { return static_cast<double>(value_) / kMaxMagnitude; }

  friend bool operator==(Magnitude, Magnitude) = default;

 private:
  int value_;
};

const OpSpec& op_spec(OpId id);
std::string_view op_name(OpId id);
/// Throws ConfigError naming the valid ops when the name is unknown.
OpId op_from_name(std::string_view name);
bool is_known_op_name(std::string_view name);

/// The 7 color ops of the op table, in table order.
std::span<const OpId> color_ops();
/// The 5 geometric ops of the op table, in table order.
std::span<const OpId> geometric_ops();
/// Color then geometric ops (12), the list SmartSamplingAugment weights.
std::span<const OpId> smart_ops();
/// The 12 table ops plus Identity (13), sampled by RandAugment and TrivialAugment.
std::span<const OpId> rand_ops();
/// All ops that can appear in a plan, including the DefaultAugment kernels.
std::span<const OpId> all_ops();

/// Concrete kernel parameter for a magnitude. Empty for parameterless ops.
///   geometric:   sign * (lo + m/30 * (hi - lo))
///   Solarize:    256 - m/30 * 256
///   enhancement: 1 + sign * m/30 * 0.9
/// Throws ContractError for ops outside the magnitude table or sign not +-1.
std::optional<double> magnitude_to_param(OpId op, Magnitude m, int sign);

/// Distance of a parameter from the op's identity value; monotone in magnitude.
double effect_strength(OpId op, double param);

}  // namespace segaug
