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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "segaug/plan.hpp"
#include "segaug/raster.hpp"
#include "segaug/rng.hpp"
#include "segaug/strategy.hpp"

namespace segaug {

enum class Split { Train, Val, Test };
std::string_view split_name(Split split);

struct ManifestItem {
  std::string name;  // file name shared by image and mask
  std::filesystem::path image;
  std::filesystem::path mask;
  Split split = Split::Train;
};

/// Validated listing of a root/{train,val,test}/{images,masks} dataset.
struct DatasetManifest {
  std::filesystem::path root;
  std::vector<ManifestItem> items;  // lexicographic within each split
  int num_classes = 0;
  std::uint8_t ignore_index = kDefaultIgnoreIndex;

  std::vector<ManifestItem> split_items(Split split) const;
};

/// Scans and validates a dataset directory. Every image/mask pair must exist,
/// decode and agree in size. The class count comes from root/dataset.json
/// ({"num_classes": k, "ignore_index": i}) or the largest label + 1.
/// Throws DataError listing every problem found.
DatasetManifest load_manifest(const std::filesystem::path& root);

nlohmann::json to_json(const DatasetManifest& manifest);

struct Sample {
  std::string name;
  Raster image;
  LabelMask mask;
};

/// Decoded dataset held in memory.
struct Dataset {
  std::vector<Sample> train;
  std::vector<Sample> val;
  std::vector<Sample> test;
  int num_classes = 0;
  std::uint8_t ignore_index = kDefaultIgnoreIndex;

  const std::vector<Sample>& split(Split s) const;
};

Dataset load_dataset(const DatasetManifest& manifest);

struct PreprocessSpec {
  int width = 0;
  int height = 0;
  double crop_probability = 0.5;

  /// Throws ConfigError for non-positive targets, sides above 4096 or a
  /// probability outside [0, 1].
  void validate() const;
};

/// The preprocessing branch taken for one item; replayable.
struct PreprocessDecision {
  enum class Mode { None, Crop, Downsize } mode = Mode::None;
  int x = 0;
  int y = 0;
  int width = 0;
  int height = 0;

  friend bool operator==(const PreprocessDecision&, const PreprocessDecision&) = default;
};

/// Draws the crop-or-downsize branch. A crop larger than the source falls
/// back to downsizing.
PreprocessDecision sample_preprocess(int source_width, int source_height, const PreprocessSpec& spec,
                                     Rng& rng);
ImageAndMask apply_preprocess(const PreprocessDecision& decision, const Raster& image,
                              const LabelMask& mask);
ImageAndMask preprocess(const Raster& image, const LabelMask& mask, const PreprocessSpec& spec,
                        Rng& rng);

nlohmann::json to_json(const PreprocessDecision& decision);
PreprocessDecision preprocess_decision_from_json(const nlohmann::json& j);

/// Seed of the per-item RNG stream.
std::uint64_t item_stream_seed(std::uint64_t seed, int epoch, std::size_t item_index);

struct StreamItem {
  std::size_t source_index = 0;
  PreprocessDecision preprocess;
  AugPlan plan;
  Raster image;
  LabelMask mask;
};

/// One epoch of augmented samples. Items are visited in a seeded shuffled
/// order and each is computed independently: preprocess, sample a plan,
/// apply it.
class EpochStream {
 public:
  EpochStream(std::span<const Sample> samples, StrategyConfig strategy, EpochClock clock,
              std::uint64_t seed, std::optional<PreprocessSpec> preprocess = std::nullopt);

  std::size_t size() const noexcept { return order_.size(); }
  /// The position-th item of the epoch.
  StreamItem item(std::size_t position) const;
  const std::vector<std::size_t>& order() const noexcept { return order_; }

 private:
  std::span<const Sample> samples_;
  StrategyConfig strategy_;
  EpochClock clock_;
  std::uint64_t seed_;
  std::optional<PreprocessSpec> preprocess_;
  std::vector<std::size_t> order_;
};

enum class SyntheticVariant {
  // Class follows the red channel: background red <= 100, shapes red >= 160.
  ColorCued,
  // Class follows the vertical position (horizontal bands with jittered
  // boundaries); the red channel tracks the class in train and is reversed
  // in val/test.
  ColorShift,
};

struct SyntheticSpec {
  int count = 40;
  int width = 32;
  int height = 32;
  int num_classes = 2;
  int shapes = 3;
  int channels = 3;
  SyntheticVariant variant = SyntheticVariant::ColorCued;
  std::uint64_t seed = 0;

  /// Throws ConfigError; "canvas too small" when shapes do not fit.
  void validate() const;
};

nlohmann::json to_json(const SyntheticSpec& spec);
SyntheticSpec synthetic_spec_from_json(const nlohmann::json& j);

/// In-memory synthetic dataset; splits are 70/15/15 by generation order.
Dataset synthesize_dataset(const SyntheticSpec& spec);

/// Writes the synthetic dataset as PNG pairs plus dataset.json under root and
/// returns its manifest.
DatasetManifest generate_synthetic(const SyntheticSpec& spec, const std::filesystem::path& root);

/// Writes a dataset in the root/{split}/{images,masks} layout.
void write_dataset(const Dataset& dataset, const std::filesystem::path& root);

}  // namespace segaug
