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

#include "segaug/kernels.hpp"

#include <algorithm>
#include <numbers>
#include <string>

#include "segaug/error.hpp"

namespace segaug {
namespace {

template <typename DegenerateFn>
Raster blend(const Raster& image, double factor, DegenerateFn degenerate) {
  Raster out(image.width(), image.height(), image.channels());
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      for (int c = 0; c < image.channels(); ++c) {
        const double d = degenerate(x, y, c);
        out.at(x, y, c) = saturate_u8(d + factor * (image.at(x, y, c) - d));
      }
    }
  }
  return out;
}

std::uint8_t pixel_luma(const Raster& image, int x, int y) {
  if (image.channels() == 1) return image.at(x, y, 0);
  return luma(image.at(x, y, 0), image.at(x, y, 1), image.at(x, y, 2));
}

Raster brightness(const Raster& image, double factor) {
  return blend(image, factor, [](int, int, int) { return 0.0; });
}

Raster contrast(const Raster& image, double factor) {
  if (image.pixel_count() == 0) return image;
  std::uint64_t sum = 0;
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) sum += pixel_luma(image, x, y);
  }
  const auto mean = std::floor(static_cast<double>(sum) / static_cast<double>(image.pixel_count()) + 0.5);
  return blend(image, factor, [mean](int, int, int) { return mean; });
}

Raster color(const Raster& image, double factor) {
  return blend(image, factor, [&image](int x, int y, int c) {
    return image.channels() == 1 ? static_cast<double>(image.at(x, y, c))
                                 : static_cast<double>(pixel_luma(image, x, y));
  });
}

// 3x3 smoothing kernel [1 1 1; 1 5 1; 1 1 1] / 13; border pixels are kept.
Raster smoothed(const Raster& image) {
  Raster out = image;
  for (int y = 1; y + 1 < image.height(); ++y) {
    for (int x = 1; x + 1 < image.width(); ++x) {
      for (int c = 0; c < image.channels(); ++c) {
        int sum = 4 * image.at(x, y, c);
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) sum += image.at(x + dx, y + dy, c);
        }
        out.at(x, y, c) = static_cast<std::uint8_t>((sum + 6) / 13);
      }
    }
  }
  return out;
}

Raster sharpness(const Raster& image, double factor) {
  const Raster degenerate = smoothed(image);
  return blend(image, factor,
               [&degenerate](int x, int y, int c) { return static_cast<double>(degenerate.at(x, y, c)); });
}

Raster solarize(const Raster& image, double threshold) {
  Raster out = image;
  for (auto& v : out.data()) {
    if (static_cast<double>(v) >= threshold) v = static_cast<std::uint8_t>(255 - v);
  }
  return out;
}

Raster autocontrast(const Raster& image) {
  Raster out = image;
  const int channels = image.channels();
  const auto data = image.data();
  for (int c = 0; c < channels; ++c) {
    int lo = 255;
    int hi = 0;
    for (std::size_t i = static_cast<std::size_t>(c); i < data.size(); i += static_cast<std::size_t>(channels)) {
      lo = std::min<int>(lo, data[i]);
      hi = std::max<int>(hi, data[i]);
    }
    if (hi <= lo) continue;
    // round((v - lo) * 255 / (hi - lo)), half up, in integers
    const int span = hi - lo;
    auto dst = out.data();
    for (std::size_t i = static_cast<std::size_t>(c); i < data.size(); i += static_cast<std::size_t>(channels)) {
      dst[i] = static_cast<std::uint8_t>(((data[i] - lo) * 510 + span) / (2 * span));
    }
  }
  return out;
}

Raster equalize(const Raster& image) {
  Raster out = image;
  const int channels = image.channels();
  const auto data = image.data();
  for (int c = 0; c < channels; ++c) {
    std::array<std::uint64_t, 256> hist{};
    for (std::size_t i = static_cast<std::size_t>(c); i < data.size(); i += static_cast<std::size_t>(channels)) {
      ++hist[data[i]];
    }
    std::uint64_t total = 0;
    std::uint64_t last_nonzero = 0;
    for (auto h : hist) {
      total += h;
      if (h != 0) last_nonzero = h;
    }
    const std::uint64_t step = (total - last_nonzero) / 255;
    if (step == 0) continue;
    std::array<std::uint8_t, 256> lut{};
    std::uint64_t n = step / 2;
    for (int v = 0; v < 256; ++v) {
      lut[static_cast<std::size_t>(v)] = static_cast<std::uint8_t>(std::min<std::uint64_t>(n / step, 255));
      n += hist[static_cast<std::size_t>(v)];
    }
    auto dst = out.data();
    for (std::size_t i = static_cast<std::size_t>(c); i < data.size(); i += static_cast<std::size_t>(channels)) {
      dst[i] = lut[data[i]];
    }
  }
  return out;
}

std::uint8_t bilinear(const Raster& image, double sx, double sy, int c) {
  const int w = image.width();
  const int h = image.height();
  const double fx0 = std::floor(sx);
  const double fy0 = std::floor(sy);
  const double fx = sx - fx0;
  const double fy = sy - fy0;
  const int x0 = std::clamp(static_cast<int>(fx0), 0, w - 1);
  const int x1 = std::clamp(static_cast<int>(fx0) + 1, 0, w - 1);
  const int y0 = std::clamp(static_cast<int>(fy0), 0, h - 1);
  const int y1 = std::clamp(static_cast<int>(fy0) + 1, 0, h - 1);
  const double top = (1.0 - fx) * image.at(x0, y0, c) + fx * image.at(x1, y0, c);
  const double bottom = (1.0 - fx) * image.at(x0, y1, c) + fx * image.at(x1, y1, c);
  return saturate_u8((1.0 - fy) * top + fy * bottom);
}

}  // namespace

Raster apply_color_op(OpId op, double param, const Raster& image) {
  if (op_spec(op).kind != OpKind::Color) {
    throw ContractError(std::string(op_name(op)) + " is not a color op");
  }
  switch (op) {
    case OpId::Sharpness: return sharpness(image, param);
    case OpId::AutoContrast: return autocontrast(image);
    case OpId::Equalize: return equalize(image);
    case OpId::Solarize: return solarize(image, param);
    case OpId::Color: return color(image, param);
    case OpId::Contrast: return contrast(image, param);
    case OpId::Brightness: return brightness(image, param);
    default: break;
  }
  throw ContractError("unhandled color op");
}

InverseAffine geometric_inverse_map(OpId op, double param, int width, int height) {
  const double cx = (width - 1) / 2.0;
  const double cy = (height - 1) / 2.0;
  InverseAffine map;
  auto& m = map.m;
  switch (op) {
    case OpId::Rotate: {
      const double theta = param * std::numbers::pi / 180.0;
      const double cs = std::cos(theta);
      const double sn = std::sin(theta);
      m = {cs, -sn, cx - cs * cx + sn * cy, sn, cs, cy - sn * cx - cs * cy};
      break;
    }
    case OpId::ShearX: m = {1.0, -param, param * cy, 0.0, 1.0, 0.0}; break;
    case OpId::ShearY: m = {1.0, 0.0, 0.0, -param, 1.0, param * cx}; break;
    case OpId::TranslateX: m = {1.0, 0.0, -param * width, 0.0, 1.0, 0.0}; break;
    case OpId::TranslateY: m = {1.0, 0.0, 0.0, 0.0, 1.0, -param * height}; break;
    case OpId::HorizontalFlip: m = {-1.0, 0.0, width - 1.0, 0.0, 1.0, 0.0}; break;
    case OpId::Scale: {
      SEGAUG_EXPECT(param > 0.0, "scale factor must be positive");
      const double inv = 1.0 / param;
      m = {inv, 0.0, cx - inv * cx, 0.0, inv, cy - inv * cy};
      break;
    }
    default: throw ContractError(std::string(op_name(op)) + " is not a geometric op");
  }
  return map;
}

ImageAndMask warp_affine(const Raster& image, const LabelMask& mask, const InverseAffine& map) {
  expect_same_shape(image, mask);
  const int w = image.width();
  const int h = image.height();
  ImageAndMask out{Raster(w, h, image.channels(), 0),
                   LabelMask(w, h, mask.ignore_index(), mask.ignore_index())};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double sx = map.src_x(x, y);
      const double sy = map.src_y(x, y);
      const double nx = std::floor(sx + 0.5);
      const double ny = std::floor(sy + 0.5);
      if (!(nx >= 0 && nx < w && ny >= 0 && ny < h)) continue;
      out.mask.at(x, y) = mask.at(static_cast<int>(nx), static_cast<int>(ny));
      for (int c = 0; c < image.channels(); ++c) out.image.at(x, y, c) = bilinear(image, sx, sy, c);
    }
  }
  return out;
}

ImageAndMask apply_geometric_op(OpId op, double param, const Raster& image, const LabelMask& mask) {
  if (op_spec(op).kind != OpKind::Geometric) {
    throw ContractError(std::string(op_name(op)) + " is not a geometric op");
  }
  expect_same_shape(image, mask);
  return warp_affine(image, mask, geometric_inverse_map(op, param, image.width(), image.height()));
}

Raster resize_bilinear(const Raster& image, int width, int height) {
  SEGAUG_EXPECT(width > 0 && height > 0, "resize target must be positive");
  SEGAUG_EXPECT(!image.empty(), "cannot resize an empty raster");
  Raster out(width, height, image.channels());
  const double scale_x = static_cast<double>(image.width()) / width;
  const double scale_y = static_cast<double>(image.height()) / height;
  for (int y = 0; y < height; ++y) {
    const double sy = std::clamp((y + 0.5) * scale_y - 0.5, 0.0, image.height() - 1.0);
    for (int x = 0; x < width; ++x) {
      const double sx = std::clamp((x + 0.5) * scale_x - 0.5, 0.0, image.width() - 1.0);
      for (int c = 0; c < image.channels(); ++c) out.at(x, y, c) = bilinear(image, sx, sy, c);
    }
  }
  return out;
}

LabelMask resize_nearest(const LabelMask& mask, int width, int height) {
  SEGAUG_EXPECT(width > 0 && height > 0, "resize target must be positive");
  SEGAUG_EXPECT(mask.pixel_count() > 0, "cannot resize an empty mask");
  LabelMask out(width, height, 0, mask.ignore_index());
  const double scale_x = static_cast<double>(mask.width()) / width;
  const double scale_y = static_cast<double>(mask.height()) / height;
  for (int y = 0; y < height; ++y) {
    const int sy = std::min(static_cast<int>(std::floor((y + 0.5) * scale_y)), mask.height() - 1);
    for (int x = 0; x < width; ++x) {
      const int sx = std::min(static_cast<int>(std::floor((x + 0.5) * scale_x)), mask.width() - 1);
      out.at(x, y) = mask.at(sx, sy);
    }
  }
  return out;
}

Raster crop(const Raster& image, int x0, int y0, int width, int height) {
  SEGAUG_EXPECT(x0 >= 0 && y0 >= 0 && width >= 0 && height >= 0 && x0 + width <= image.width() &&
                    y0 + height <= image.height(),
                "crop window outside the raster");
  Raster out(width, height, image.channels());
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      for (int c = 0; c < image.channels(); ++c) out.at(x, y, c) = image.at(x0 + x, y0 + y, c);
    }
  }
  return out;
}

LabelMask crop(const LabelMask& mask, int x0, int y0, int width, int height) {
  SEGAUG_EXPECT(x0 >= 0 && y0 >= 0 && width >= 0 && height >= 0 && x0 + width <= mask.width() &&
                    y0 + height <= mask.height(),
                "crop window outside the mask");
  LabelMask out(width, height, 0, mask.ignore_index());
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) out.at(x, y) = mask.at(x0 + x, y0 + y);
  }
  return out;
}

}  // namespace segaug
