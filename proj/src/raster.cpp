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

#include "segaug/raster.hpp"

#include <string>

#include "segaug/error.hpp"

namespace segaug {

DataError::DataError(std::vector<std::string> issues)
    : Error([&] {
        std::string msg;
        for (const auto& issue : issues) {
          if (!msg.empty()) msg += '\n';
          msg += issue;
        }
        return msg;
      }()),
      issues_(std::move(issues)) {}

Raster::Raster(int width, int height, int channels, std::uint8_t fill)
    : width_(width), height_(height), channels_(channels) {
  SEGAUG_EXPECT(width >= 0 && height >= 0, "raster dimensions must be non-negative");
  SEGAUG_EXPECT(channels == 1 || channels == 3, "raster channels must be 1 or 3");
  data_.assign(pixel_count() * static_cast<std::size_t>(channels), fill);
}

Raster::Raster(int width, int height, int channels, std::vector<std::uint8_t> data)
    : width_(width), height_(height), channels_(channels), data_(std::move(data)) {
  SEGAUG_EXPECT(width >= 0 && height >= 0, "raster dimensions must be non-negative");
  SEGAUG_EXPECT(channels == 1 || channels == 3, "raster channels must be 1 or 3");
  SEGAUG_EXPECT(data_.size() == pixel_count() * static_cast<std::size_t>(channels),
                "raster data length must equal width * height * channels");
}

LabelMask::LabelMask(int width, int height, std::uint8_t fill, std::uint8_t ignore_index)
    : width_(width), height_(height), ignore_index_(ignore_index) {
  SEGAUG_EXPECT(width >= 0 && height >= 0, "mask dimensions must be non-negative");
  labels_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

LabelMask::LabelMask(int width, int height, std::vector<std::uint8_t> labels,
                     std::uint8_t ignore_index)
    : width_(width), height_(height), ignore_index_(ignore_index), labels_(std::move(labels)) {
  SEGAUG_EXPECT(width >= 0 && height >= 0, "mask dimensions must be non-negative");
  SEGAUG_EXPECT(labels_.size() == static_cast<std::size_t>(width) * static_cast<std::size_t>(height),
                "mask label count must equal width * height");
}

void expect_same_shape(const Raster& image, const LabelMask& mask) {
  if (image.width() != mask.width() || image.height() != mask.height()) {
    throw ContractError("image is " + std::to_string(image.width()) + "x" +
                        std::to_string(image.height()) + " but mask is " +
                        std::to_string(mask.width()) + "x" + std::to_string(mask.height()));
  }
}

void expect_valid_labels(const LabelMask& mask, int num_classes) {
  for (auto label : mask.labels()) {
    if (label != mask.ignore_index() && label >= num_classes) {
      throw ContractError("label " + std::to_string(label) + " is not a valid class index (k=" +
                          std::to_string(num_classes) + ")");
    }
  }
}

}  // namespace segaug
