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

#include <filesystem>

#include "segaug/raster.hpp"

namespace segaug {

/// Decodes an 8-bit grayscale or RGB image; palette images are expanded,
/// alpha is dropped and 16-bit samples are reduced to 8 bits.
/// Throws DataError naming the file on failure.
Raster read_image_png(const std::filesystem::path& path);

/// Decodes a single-channel mask (grayscale or palette indices, unexpanded).
LabelMask read_mask_png(const std::filesystem::path& path,
                        std::uint8_t ignore_index = kDefaultIgnoreIndex);

/// Deterministic encoders: identical input gives byte-identical files.
void write_image_png(const std::filesystem::path& path, const Raster& image);
void write_mask_png(const std::filesystem::path& path, const LabelMask& mask);

}  // namespace segaug
