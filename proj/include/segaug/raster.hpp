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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace segaug {

inline constexpr std::uint8_t kDefaultIgnoreIndex = 255;

/// Row-major 8-bit image with 1 (grayscale) or 3 (RGB) interleaved channels.
class Raster {
 public:
  Raster() = default;
  Raster(int width, int height, int channels, std::uint8_t fill = 0);
  Raster(int width, int height, int channels, std::vector<std::uint8_t> data);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int channels() const noexcept { return channels_; }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }
  bool empty() const noexcept { return data_.empty(); }

  std::uint8_t& at(int x, int y, int c) { return data_[index(x, y, c)]; }
  std::uint8_t at(int x, int y, int c) const { return data_[index(x, y, c)]; }

  std::span<std::uint8_t> data() noexcept { return data_; }
  std::span<const std::uint8_t> data() const noexcept { return data_; }

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  std::size_t index(int x, int y, int c) const noexcept {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
            static_cast<std::size_t>(x)) *
               static_cast<std::size_t>(channels_) +
           static_cast<std::size_t>(c);
  }

  int width_ = 0;
  int height_ = 0;
  int channels_ = 1;
  std::vector<std::uint8_t> data_;
};

/// Per-pixel class indices paired with a Raster. Pixels equal to
/// ignore_index are undefined (e.g. regions exposed by geometric fill).
class LabelMask {
 public:
  LabelMask() = default;
  LabelMask(int width, int height, std::uint8_t fill = 0,
            std::uint8_t ignore_index = kDefaultIgnoreIndex);
  LabelMask(int width, int height, std::vector<std::uint8_t> labels,
            std::uint8_t ignore_index = kDefaultIgnoreIndex);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t pixel_count() const noexcept { return labels_.size(); }
  std::uint8_t ignore_index() const noexcept { return ignore_index_; }

  std::uint8_t& at(int x, int y) { return labels_[index(x, y)]; }
  std::uint8_t at(int x, int y) const { return labels_[index(x, y)]; }

  std::span<std::uint8_t> labels() noexcept { return labels_; }
  std::span<const std::uint8_t> labels() const noexcept { return labels_; }

  friend bool operator==(const LabelMask&, const LabelMask&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::uint8_t ignore_index_ = kDefaultIgnoreIndex;
  std::vector<std::uint8_t> labels_;
};

/// Throws ContractError unless image and mask share width and height.
void expect_same_shape(const Raster& image, const LabelMask& mask);

/// Throws ContractError if any label is neither < num_classes nor ignore_index.
void expect_valid_labels(const LabelMask& mask, int num_classes);

}  // namespace segaug
