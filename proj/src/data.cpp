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

#include "segaug/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "segaug/error.hpp"
#include "segaug/log.hpp"
#include "segaug/png_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace segaug {
namespace {

constexpr std::array<Split, 3> kSplits{Split::Train, Split::Val, Split::Test};
constexpr int kMaxTargetSide = 4096;

std::vector<std::string> png_names(const fs::path& dir) {
  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".png") {
      names.push_back(entry.path().filename().string());
    }
  }
  std::sort(names.begin(), names.end());
  return names;
}

std::string size_text(int w, int h) { return std::to_string(w) + "x" + std::to_string(h); }

}  // namespace

std::string_view split_name(Split split) {
  switch (split) {
    case Split::Train: return "train";
    case Split::Val: return "val";
    case Split::Test: return "test";
  }
  return "train";
}

std::vector<ManifestItem> DatasetManifest::split_items(Split split) const {
  std::vector<ManifestItem> out;
  for (const auto& item : items) {
    if (item.split == split) out.push_back(item);
  }
  return out;
}

const std::vector<Sample>& Dataset::split(Split s) const {
  switch (s) {
    case Split::Train: return train;
    case Split::Val: return val;
    case Split::Test: return test;
  }
  return train;
}

DatasetManifest load_manifest(const fs::path& root) {
  if (!fs::is_directory(root)) throw DataError("dataset root is not a directory: " + root.string());
  DatasetManifest manifest;
  manifest.root = root;
  std::vector<std::string> issues;
  std::optional<int> declared_k;

  const fs::path meta = root / "dataset.json";
  if (fs::exists(meta)) {
    try {
      std::ifstream in(meta);
      const json j = json::parse(in);
      if (j.contains("num_classes")) declared_k = j.at("num_classes").get<int>();
      if (j.contains("ignore_index")) manifest.ignore_index = j.at("ignore_index").get<std::uint8_t>();
    } catch (const json::exception& e) {
      issues.push_back(meta.string() + ": " + e.what());
    }
  }

  int max_label = -1;
  for (Split split : kSplits) {
    const fs::path dir = root / split_name(split);
    if (!fs::exists(dir)) {
      if (split == Split::Train) issues.push_back("missing split: train");
      continue;
    }
    const fs::path image_dir = dir / "images";
    const fs::path mask_dir = dir / "masks";
    if (!fs::is_directory(image_dir) || !fs::is_directory(mask_dir)) {
      issues.push_back("split " + std::string(split_name(split)) + " needs images/ and masks/ directories");
      continue;
    }
    const auto images = png_names(image_dir);
    const auto masks = png_names(mask_dir);
    if (images.empty()) {
      issues.push_back("empty split: " + std::string(split_name(split)));
      continue;
    }
    const std::set<std::string> mask_set(masks.begin(), masks.end());
    const std::set<std::string> image_set(images.begin(), images.end());
    for (const auto& name : masks) {
      if (!image_set.count(name)) issues.push_back("missing image for mask " + (mask_dir / name).string());
    }
    for (const auto& name : images) {
      const fs::path image_path = image_dir / name;
      const fs::path mask_path = mask_dir / name;
      if (!mask_set.count(name)) {
        issues.push_back("missing mask for image " + image_path.string());
        continue;
      }
      try {
        const Raster image = read_image_png(image_path);
        const LabelMask mask = read_mask_png(mask_path, manifest.ignore_index);
        if (image.width() != mask.width() || image.height() != mask.height()) {
          issues.push_back("size mismatch: " + image_path.string() + " is " +
                           size_text(image.width(), image.height()) + " but " + mask_path.string() +
                           " is " + size_text(mask.width(), mask.height()));
          continue;
        }
        for (auto label : mask.labels()) {
          if (label != mask.ignore_index()) max_label = std::max<int>(max_label, label);
        }
      } catch (const DataError& e) {
        issues.push_back(e.what());
        continue;
      }
      manifest.items.push_back({name, image_path, mask_path, split});
    }
  }

  manifest.num_classes = declared_k.value_or(max_label + 1);
  if (issues.empty()) {
    if (manifest.num_classes < 1) issues.push_back("dataset has no labelled pixels");
    if (max_label >= manifest.num_classes) {
      issues.push_back("label " + std::to_string(max_label) + " exceeds declared num_classes " +
                       std::to_string(manifest.num_classes));
    }
  }
  if (!issues.empty()) throw DataError(std::move(issues));
  return manifest;
}

json to_json(const DatasetManifest& manifest) {
  json items = json::array();
  for (const auto& item : manifest.items) {
    items.push_back({{"name", item.name},
                     {"image", item.image.string()},
                     {"mask", item.mask.string()},
                     {"split", std::string(split_name(item.split))}});
  }
  return {{"root", manifest.root.string()},
          {"num_classes", manifest.num_classes},
          {"ignore_index", manifest.ignore_index},
          {"items", std::move(items)}};
}

Dataset load_dataset(const DatasetManifest& manifest) {
  Dataset dataset;
  dataset.num_classes = manifest.num_classes;
  dataset.ignore_index = manifest.ignore_index;
  for (const auto& item : manifest.items) {
    Sample sample{item.name, read_image_png(item.image), read_mask_png(item.mask, manifest.ignore_index)};
    switch (item.split) {
      case Split::Train: dataset.train.push_back(std::move(sample)); break;
      case Split::Val: dataset.val.push_back(std::move(sample)); break;
      case Split::Test: dataset.test.push_back(std::move(sample)); break;
    }
  }
  return dataset;
}

void PreprocessSpec::validate() const {
  if (width <= 0 || height <= 0) throw ConfigError("preprocess target must be positive");
  if (width > kMaxTargetSide || height > kMaxTargetSide) {
    throw ConfigError("preprocess target side exceeds 4096");
  }
  if (!(crop_probability >= 0.0 && crop_probability <= 1.0)) {
    throw ConfigError("crop probability outside [0, 1]");
  }
}

PreprocessDecision sample_preprocess(int source_width, int source_height, const PreprocessSpec& spec,
                                     Rng& rng) {
  spec.validate();
  PreprocessDecision d;
  d.width = spec.width;
  d.height = spec.height;
  if (rng.bernoulli(spec.crop_probability)) {
    if (spec.width <= source_width && spec.height <= source_height) {
      d.mode = PreprocessDecision::Mode::Crop;
      d.x = rng.integer(0, source_width - spec.width);
      d.y = rng.integer(0, source_height - spec.height);
      return d;
    }
    log_message(LogLevel::Verbose, "crop target " + size_text(spec.width, spec.height) +
                                       " exceeds source " + size_text(source_width, source_height) +
                                       "; downsizing instead");
  }
  d.mode = PreprocessDecision::Mode::Downsize;
  return d;
}

ImageAndMask apply_preprocess(const PreprocessDecision& d, const Raster& image, const LabelMask& mask) {
  expect_same_shape(image, mask);
  switch (d.mode) {
    case PreprocessDecision::Mode::None: return {image, mask};
    case PreprocessDecision::Mode::Crop:
      return {crop(image, d.x, d.y, d.width, d.height), crop(mask, d.x, d.y, d.width, d.height)};
    case PreprocessDecision::Mode::Downsize:
      return {resize_bilinear(image, d.width, d.height), resize_nearest(mask, d.width, d.height)};
  }
  return {image, mask};
}

ImageAndMask preprocess(const Raster& image, const LabelMask& mask, const PreprocessSpec& spec, Rng& rng) {
  return apply_preprocess(sample_preprocess(image.width(), image.height(), spec, rng), image, mask);
}

json to_json(const PreprocessDecision& d) {
  switch (d.mode) {
    case PreprocessDecision::Mode::None: return {{"mode", "none"}};
    case PreprocessDecision::Mode::Crop:
      return {{"mode", "crop"}, {"x", d.x}, {"y", d.y}, {"width", d.width}, {"height", d.height}};
    case PreprocessDecision::Mode::Downsize:
      return {{"mode", "downsize"}, {"width", d.width}, {"height", d.height}};
  }
  return {{"mode", "none"}};
}

PreprocessDecision preprocess_decision_from_json(const json& j) {
  try {
    PreprocessDecision d;
    const auto mode = j.at("mode").get<std::string>();
    if (mode == "none") return d;
    d.width = j.at("width").get<int>();
    d.height = j.at("height").get<int>();
    if (mode == "crop") {
      d.mode = PreprocessDecision::Mode::Crop;
      d.x = j.at("x").get<int>();
      d.y = j.at("y").get<int>();
    } else if (mode == "downsize") {
      d.mode = PreprocessDecision::Mode::Downsize;
    } else {
      throw ConfigError("unknown preprocess mode '" + mode + "'");
    }
    return d;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid preprocess record: ") + e.what());
  }
}

std::uint64_t item_stream_seed(std::uint64_t seed, int epoch, std::size_t item_index) {
  return derive_seed(seed, static_cast<std::uint64_t>(epoch), item_index);
}

EpochStream::EpochStream(std::span<const Sample> samples, StrategyConfig strategy, EpochClock clock,
                         std::uint64_t seed, std::optional<PreprocessSpec> preprocess)
    : samples_(samples),
      strategy_(std::move(strategy)),
      clock_(clock),
      seed_(seed),
      preprocess_(preprocess) {
  if (samples_.empty()) throw DataError("split is empty");
  clock_.validate();
  strategy_.validate();
  if (preprocess_) preprocess_->validate();
  order_.resize(samples_.size());
  for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = i;
  Rng shuffle(derive_seed(seed ^ 0x5EEDF00DULL, static_cast<std::uint64_t>(clock_.epoch), ~0ULL));
  for (std::size_t i = order_.size(); i > 1; --i) std::swap(order_[i - 1], order_[shuffle.below(i)]);
}

StreamItem EpochStream::item(std::size_t position) const {
  SEGAUG_EXPECT(position < order_.size(), "stream position out of range");
  StreamItem out;
  out.source_index = order_[position];
  const Sample& sample = samples_[out.source_index];
  Rng rng(item_stream_seed(seed_, clock_.epoch, out.source_index));
  try {
    if (preprocess_) {
      out.preprocess = sample_preprocess(sample.image.width(), sample.image.height(), *preprocess_, rng);
    }
    auto pre = apply_preprocess(out.preprocess, sample.image, sample.mask);
    out.plan = sample_plan(strategy_, clock_, rng);
    auto augmented = apply_plan(out.plan, pre.image, pre.mask);
    out.image = std::move(augmented.image);
    out.mask = std::move(augmented.mask);
  } catch (const Error& e) {
    throw DataError("item '" + sample.name + "': " + e.what());
  }
  return out;
}

void SyntheticSpec::validate() const {
  if (num_classes < 2) throw ConfigError("synthetic dataset needs num_classes >= 2");
  if (num_classes > 254) throw ConfigError("synthetic dataset supports at most 254 classes");
  if (count < 7) throw ConfigError("synthetic dataset needs count >= 7 so every split is non-empty");
  if (channels != 1 && channels != 3) throw ConfigError("channels must be 1 or 3");
  if (shapes < 0) throw ConfigError("shape count must be >= 0");
  if (width > kMaxTargetSide || height > kMaxTargetSide) throw ConfigError("canvas side exceeds 4096");
  if (width < 8 || height < 8 || shapes > (width / 4) * (height / 4)) {
    throw ConfigError("canvas too small: " + size_text(width, height) + " cannot hold " +
                      std::to_string(shapes) + " shapes");
  }
}

json to_json(const SyntheticSpec& spec) {
  return {{"count", spec.count},
          {"width", spec.width},
          {"height", spec.height},
          {"num_classes", spec.num_classes},
          {"shapes", spec.shapes},
          {"channels", spec.channels},
          {"variant", spec.variant == SyntheticVariant::ColorCued ? "color" : "color_shift"},
          {"seed", spec.seed}};
}

SyntheticSpec synthetic_spec_from_json(const json& j) {
  SyntheticSpec spec;
  try {
    spec.count = j.value("count", spec.count);
    spec.width = j.value("width", spec.width);
    spec.height = j.value("height", spec.height);
    spec.num_classes = j.value("num_classes", spec.num_classes);
    spec.shapes = j.value("shapes", spec.shapes);
    spec.channels = j.value("channels", spec.channels);
    spec.seed = j.value("seed", spec.seed);
    const auto variant = j.value("variant", std::string("color"));
    if (variant == "color") {
      spec.variant = SyntheticVariant::ColorCued;
    } else if (variant == "color_shift") {
      spec.variant = SyntheticVariant::ColorShift;
    } else {
      throw ConfigError("unknown synthetic variant '" + variant + "'; expected color or color_shift");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid synthetic spec: ") + e.what());
  }
  spec.validate();
  return spec;
}

namespace {

std::uint8_t clamp_u8(int v) { return static_cast<std::uint8_t>(std::clamp(v, 0, 255)); }

void set_pixel(Raster& image, int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  image.at(x, y, 0) = r;
  if (image.channels() == 3) {
    image.at(x, y, 1) = g;
    image.at(x, y, 2) = b;
  }
}

Sample color_cued_sample(const SyntheticSpec& spec, Rng& rng) {
  const int w = spec.width;
  const int h = spec.height;
  Sample s{"", Raster(w, h, spec.channels), LabelMask(w, h, 0)};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const auto r = clamp_u8(rng.integer(0, 100));
      const auto g = clamp_u8(rng.integer(0, 255));
      const auto b = clamp_u8(rng.integer(0, 255));
      set_pixel(s.image, x, y, r, g, b);
    }
  }
  const int k = spec.num_classes;
  for (int i = 0; i < spec.shapes; ++i) {
    const int cls = rng.integer(1, k - 1);
    const int green = k == 2 ? 128 : 30 + 195 * (cls - 1) / (k - 2);
    const bool disc = rng.bernoulli(0.5);
    auto paint = [&](int x, int y) {
      s.mask.at(x, y) = static_cast<std::uint8_t>(cls);
      set_pixel(s.image, x, y, clamp_u8(rng.integer(160, 255)), clamp_u8(green + rng.integer(-20, 20)),
                clamp_u8(rng.integer(0, 255)));
    };
    if (disc) {
      const int lo = std::max(1, std::min(w, h) / 10);
      const int hi = std::max(lo, std::min(w, h) / 5);
      const int radius = rng.integer(lo, hi);
      const int cx = rng.integer(0, w - 1);
      const int cy = rng.integer(0, h - 1);
      for (int y = std::max(0, cy - radius); y <= std::min(h - 1, cy + radius); ++y) {
        for (int x = std::max(0, cx - radius); x <= std::min(w - 1, cx + radius); ++x) {
          if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= radius * radius) paint(x, y);
        }
      }
    } else {
      const int sw = rng.integer(std::max(2, w / 8), std::max(2, w / 3));
      const int sh = rng.integer(std::max(2, h / 8), std::max(2, h / 3));
      const int x0 = rng.integer(0, w - sw);
      const int y0 = rng.integer(0, h - sh);
      for (int y = y0; y < y0 + sh; ++y) {
        for (int x = x0; x < x0 + sw; ++x) paint(x, y);
      }
    }
  }
  return s;
}

Sample color_shift_sample(const SyntheticSpec& spec, bool reversed, Rng& rng) {
  const int w = spec.width;
  const int h = spec.height;
  const int k = spec.num_classes;
  Sample s{"", Raster(w, h, spec.channels), LabelMask(w, h, 0)};
  std::vector<double> boundaries;
  for (int j = 1; j < k; ++j) {
    boundaries.push_back((static_cast<double>(j) / k + rng.uniform(-0.05, 0.05)) * h);
  }
  for (int y = 0; y < h; ++y) {
    int cls = 0;
    for (double b : boundaries) cls += y >= b ? 1 : 0;
    const int tint_class = reversed ? k - 1 - cls : cls;
    const int red = 40 + 175 * tint_class / (k - 1);
    for (int x = 0; x < w; ++x) {
      s.mask.at(x, y) = static_cast<std::uint8_t>(cls);
      set_pixel(s.image, x, y, clamp_u8(red + rng.integer(-25, 25)), clamp_u8(rng.integer(0, 255)),
                clamp_u8(rng.integer(0, 255)));
    }
  }
  return s;
}

}  // namespace

Dataset synthesize_dataset(const SyntheticSpec& spec) {
  spec.validate();
  Dataset dataset;
  dataset.num_classes = spec.num_classes;
  const int n_train = static_cast<int>(std::floor(0.7 * spec.count + 0.5));
  const int n_val = std::max(1, static_cast<int>(std::floor(0.15 * spec.count + 0.5)));
  for (int i = 0; i < spec.count; ++i) {
    Rng rng(derive_seed(spec.seed, static_cast<std::uint64_t>(i)));
    const Split split = i < n_train ? Split::Train : (i < n_train + n_val ? Split::Val : Split::Test);
    Sample s = spec.variant == SyntheticVariant::ColorCued
                   ? color_cued_sample(spec, rng)
                   : color_shift_sample(spec, split != Split::Train, rng);
    char name[32];
    std::snprintf(name, sizeof(name), "img_%04d.png", i);
    s.name = name;
    switch (split) {
      case Split::Train: dataset.train.push_back(std::move(s)); break;
      case Split::Val: dataset.val.push_back(std::move(s)); break;
      case Split::Test: dataset.test.push_back(std::move(s)); break;
    }
  }
  return dataset;
}

void write_dataset(const Dataset& dataset, const fs::path& root) {
  for (Split split : kSplits) {
    const auto& samples = dataset.split(split);
    if (samples.empty()) continue;
    const fs::path dir = root / split_name(split);
    fs::create_directories(dir / "images");
    fs::create_directories(dir / "masks");
    for (const auto& s : samples) {
      write_image_png(dir / "images" / s.name, s.image);
      write_mask_png(dir / "masks" / s.name, s.mask);
    }
  }
  std::ofstream meta(root / "dataset.json");
  meta << json{{"num_classes", dataset.num_classes}, {"ignore_index", dataset.ignore_index}}.dump(2) << '\n';
  if (!meta) throw DataError("cannot write " + (root / "dataset.json").string());
}

DatasetManifest generate_synthetic(const SyntheticSpec& spec, const fs::path& root) {
  const Dataset dataset = synthesize_dataset(spec);
  fs::create_directories(root);
  write_dataset(dataset, root);
  std::ofstream out(root / "synthetic.json");
  out << to_json(spec).dump(2) << '\n';
  return load_manifest(root);
}

}  // namespace segaug
