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
#include <cmath>
#include <cstdint>

#include "segaug/ops.hpp"
#include "segaug/raster.hpp"

namespace segaug {

/// Rounds half away from zero and clamps to [0, 255].
inline std::uint8_t saturate_u8(double v) noexcept {
  if (!(v > 0.0)) return 0;
  if (v >= 255.0) return 255;
  return static_cast<std::uint8_t>(std::floor(v + 0.5));
}

/// ITU-R 601 luma with integer rounding: (299 R + 587 G + 114 B + 500) / 1000.
inline std::uint8_t luma(std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept {
  return static_cast<std::uint8_t>((299 * r + 587 * g + 114 * b + 500) / 1000);
}

struct ImageAndMask {
  Raster image;
  LabelMask mask;
};

/// Applies a color op. Enhancement ops blend toward a degenerate image
/// (Brightness: black, Contrast: mean luma, Color: luma, Sharpness: 3x3
/// smoothed) as saturate(degenerate + factor * (pixel - degenerate)).
/// Throws ContractError unless the op is a color op.
Raster apply_color_op(OpId op, double param, const Raster& image);

/// Row-major 2x3 matrix mapping output pixel coordinates to source
/// coordinates: src = [a b c; d e f] * [x y 1].
struct InverseAffine {
  std::array<double, 6> m{1, 0, 0, 0, 1, 0};

  double src_x(double x, double y) const noexcept { return m[0] * x + m[1] * y + m[2]; }
  double src_y(double x, double y) const noexcept { return m[3] * x + m[4] * y + m[5]; }
};

/// Output-to-source mapping of a geometric op on a width x height canvas.
/// Rotate is in degrees (positive = counter-clockwise on screen) about the
/// center ((w-1)/2, (h-1)/2); Shear params are shear factors about the
/// center line; Translate params are fractions of the image dimension;
/// Scale is a zoom factor about the center; HorizontalFlip ignores param.
InverseAffine geometric_inverse_map(OpId op, double param, int width, int height);

/// Resamples image (bilinear, fill 0) and mask (nearest, fill ignore_index)
/// through the same mapping. A pixel is filled when its nearest source pixel
/// floor(src + 0.5) lies outside the canvas; otherwise bilinear taps outside
/// the canvas are clamped to the border.
ImageAndMask warp_affine(const Raster& image, const LabelMask& mask, const InverseAffine& map);

/// Applies a geometric op jointly to image and mask. Output size equals input.
/// Throws ContractError on kind or shape mismatch.
ImageAndMask apply_geometric_op(OpId op, double param, const Raster& image,
                                const LabelMask& mask);

Raster resize_bilinear(const Raster& image, int width, int height);
LabelMask resize_nearest(const LabelMask& mask, int width, int height);
Raster crop(const Raster& image, int x0, int y0, int width, int height);
LabelMask crop(const LabelMask& mask, int x0, int y0, int width, int height);

}  // namespace segaug
