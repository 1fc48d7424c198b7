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

#include "segaug/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "segaug/data.hpp"
#include "segaug/error.hpp"
#include "segaug/evaluator.hpp"
#include "segaug/log.hpp"
#include "segaug/png_io.hpp"
#include "segaug/search.hpp"
#include "segaug/serialize.hpp"

namespace fs = std::filesystem;

namespace segaug::cli {
namespace {

constexpr const char* kExternalContract =
    "External evaluator contract:\n"
    "  input file = JSON {\"config\": <StrategyConfig>, \"seed\": <int>, \"out\": \"<path>\"}\n"
    "  invocation = `<command> <input-path>`\n"
    "  output file at \"out\" = JSON {\"miou\": <real>}\n"
    "  exit 0 on success; non-zero exit, timeout or a malformed result marks the trial failed.\n";

/// Reads --config JSON files: top-level keys set global options, nested
/// objects set options of the subcommand with that name.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App*, bool, bool, std::string) const override { return "{}"; }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    Json j;
    try {
      j = Json::parse(input);
    } catch (const nlohmann::json::parse_error& e) {
      throw CLI::ConversionError(std::string("invalid JSON config: ") + e.what());
    }
    std::vector<CLI::ConfigItem> items;
    collect(j, {}, items);
    return items;
  }

 private:
  static std::string scalar(const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

  static void collect(const Json& j, const std::vector<std::string>& parents, std::vector<CLI::ConfigItem>& items) {
    if (!j.is_object()) throw CLI::ConversionError("config file must hold a JSON object");
    for (const auto& [key, value] : j.items()) {
      if (value.is_object()) {
        auto nested = parents;
        nested.push_back(key);
        collect(value, nested, items);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      if (value.is_array()) {
        for (const auto& v : value) item.inputs.push_back(scalar(v));
      } else {
        item.inputs.push_back(scalar(value));
      }
      items.push_back(std::move(item));
    }
  }
};

struct GlobalFlags {
  std::uint64_t seed = 0;
  bool verbose = false;
  int jobs = 1;
};

StrategyConfig parse_strategy_arg(const std::string& arg) {
  const auto first = arg.find_first_not_of(" \t\n");
  if (first != std::string::npos && arg[first] == '{') {
    try {
      return strategy_from_json(Json::parse(arg));
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError(std::string("invalid strategy JSON: ") + e.what());
    }
  }
  return load_strategy(arg);
}

std::optional<PreprocessSpec> parse_target(const std::string& target, double crop_probability) {
  if (target.empty()) return std::nullopt;
  PreprocessSpec spec;
  char x = 0;
  std::istringstream in(target);
  if (!(in >> spec.width >> x >> spec.height) || (x != 'x' && x != 'X') || !in.eof()) {
    throw ConfigError("--target must look like WIDTHxHEIGHT, got '" + target + "'");
  }
  spec.crop_probability = crop_probability;
  spec.validate();
  return spec;
}

void expect_fresh_output(const fs::path& out) {
  if (fs::exists(out) && !(fs::is_directory(out) && fs::is_empty(out))) {
    throw ConfigError("output directory " + out.string() + " already exists and is not empty");
  }
}

// ---------------------------------------------------------------- augment

struct AugmentFlags {
  std::string data;
  std::string strategy;
  int epochs = 1;
  std::string out;
  std::string split = "train";
  std::string target;
  double crop_probability = 0.5;
};

int cmd_augment(const AugmentFlags& flags, const GlobalFlags& global) {
  if (flags.epochs < 1) throw ConfigError("--epochs must be >= 1");
  const StrategyConfig strategy = parse_strategy_arg(flags.strategy);
  const auto preprocess = parse_target(flags.target, flags.crop_probability);
  Split split;
  if (flags.split == "train") {
    split = Split::Train;
  } else if (flags.split == "val") {
    split = Split::Val;
  } else if (flags.split == "test") {
    split = Split::Test;
  } else {
    throw ConfigError("--split must be train, val or test");
  }
  const fs::path out = flags.out;
  expect_fresh_output(out);

  const DatasetManifest manifest = load_manifest(flags.data);
  const Dataset dataset = load_dataset(manifest);
  const auto& samples = dataset.split(split);
  if (samples.empty()) throw DataError("empty split: " + flags.split);

  const bool existed = fs::exists(out);
  try {
    fs::create_directories(out);
    std::ofstream plans(out / "plans.jsonl");
    for (int epoch = 0; epoch < flags.epochs; ++epoch) {
      const fs::path dir = out / ("epoch_" + std::to_string(epoch));
      fs::create_directories(dir / "images");
      fs::create_directories(dir / "masks");
      EpochStream stream(samples, strategy, EpochClock{epoch, flags.epochs}, global.seed, preprocess);
      for (std::size_t pos = 0; pos < stream.size(); ++pos) {
        const StreamItem item = stream.item(pos);
        const auto& name = samples[item.source_index].name;
        write_image_png(dir / "images" / name, item.image);
        write_mask_png(dir / "masks" / name, item.mask);
        plans << Json{{"epoch", epoch},
                      {"position", pos},
                      {"item", name},
                      {"split", flags.split},
                      {"preprocess", to_json(item.preprocess)},
                      {"plan", to_json(item.plan)}}
                     .dump()
              << '\n';
      }
      log_message(LogLevel::Verbose, "epoch " + std::to_string(epoch) + ": " + std::to_string(stream.size()) + " items");
    }
    plans.flush();
    if (!plans) throw DataError("cannot write " + (out / "plans.jsonl").string());
  } catch (...) {
    std::error_code ec;
    if (existed) {
      for (const auto& entry : fs::directory_iterator(out, ec)) fs::remove_all(entry.path(), ec);
    } else {
      fs::remove_all(out, ec);
    }
    throw;
  }
  std::cout << "wrote " << flags.epochs << " epoch(s) of " << samples.size() << " items to " << out.string() << '\n';
  return kOk;
}

// ----------------------------------------------------------------- search

struct SearchFlags {
  std::string space = "smart";
  std::string method = "bo";
  int budget = 50;
  std::string evaluator = "proxy";
  std::string ledger;
  std::string data;
  int n_max = 0;
  double timeout = 0.0;
  bool timing = false;
  int proxy_epochs = 3;
};

int cmd_search(const SearchFlags& flags, const GlobalFlags& global) {
  SearchOptions options;
  options.method = method_from_name(flags.method);
  if (flags.space == "smart") {
    if (flags.n_max != 0) throw ConfigError("--n-max only applies to the rand space");
    options.space = SearchSpace::smart();
  } else if (flags.space == "rand") {
    const int n_max = flags.n_max != 0 ? flags.n_max
                                       : (options.method == SearchMethod::Grid ? 3 : static_cast<int>(rand_ops().size()));
    options.space = SearchSpace::rand(n_max);
  } else {
    throw ConfigError("--space must be smart or rand");
  }
  if (options.method == SearchMethod::Grid && options.space.kind() != SpaceKind::Rand) {
    throw ConfigError("grid search requires --space rand");
  }
  options.budget = flags.budget;
  options.seed = global.seed;
  options.jobs = global.jobs;
  options.record_wall_time = flags.timing;

  std::unique_ptr<Evaluator> evaluator;
  if (flags.evaluator == "proxy") {
    Dataset dataset = flags.data.empty() ? synthesize_dataset(SyntheticSpec{}) : load_dataset(load_manifest(flags.data));
    ProxyOptions proxy;
    proxy.epochs = flags.proxy_epochs;
    evaluator = std::make_unique<ProxyEvaluator>(std::move(dataset), proxy);
  } else if (flags.evaluator.rfind("external:", 0) == 0) {
    ExternalSpec spec;
    spec.command = flags.evaluator.substr(9);
    if (flags.timeout > 0) spec.timeout = std::chrono::milliseconds(static_cast<long long>(flags.timeout * 1000.0));
    evaluator = std::make_unique<ExternalEvaluator>(spec);

  } else {
    throw ConfigError("--evaluator must be 'proxy' or 'external:<command>'");
  }

  const std::size_t before = fs::exists(flags.ledger) ? Ledger::read(flags.ledger).size() : 0;
  const Ledger ledger = run_search(options, *evaluator, fs::path(flags.ledger));
  std::cout << "ledger: " << flags.ledger << " (" << ledger.size() << " rows, " << ledger.size() - before
            << " new)\n";
  SearchReport report;
  try {
    report = summarize_ledger(ledger.records());
  } catch (const LedgerError&) {
    std::cout << "no trial succeeded; see the error field of each ledger row\n";
    return kEvaluatorError;
  }
  if (report.n_failed > 0) std::cout << "note: " << report.n_failed << " trial(s) failed\n";
  std::printf("best: trial %d score %.6f config %s\n", report.best.trial_id, *report.best.score,
              to_json(report.best.config).dump().c_str());
  std::printf("top-%zu mean score: %.6f\n", report.top_trial_ids.size(), report.top3_mean);
  for (int id : report.top_trial_ids) {
    const auto& r = ledger.records()[static_cast<std::size_t>(id)];
    std::printf("  trial %d  score %.6f  %s\n", id, *r.score, to_json(r.config).dump().c_str());
  }
  std::fflush(stdout);
  return kOk;
}

// ---------------------------------------------------------------- analyze

int cmd_analyze(const std::string& ledger_path, const std::string& out) {
  if (!fs::exists(ledger_path)) throw LedgerError("ledger not found: " + ledger_path);
  const auto records = Ledger::read(ledger_path);
  const SearchReport report = summarize_ledger(records);
  std::cout << format_report(report);
  if (!out.empty()) {
    std::ofstream file(out);
    file << to_json(report).dump(2) << '\n';
    if (!file) throw DataError("cannot write " + out);
  }
  return kOk;
}

// ---------------------------------------------------------------- preview

struct PreviewFlags {
  std::string image;
  std::string mask;
  std::string op;
  int magnitude = 10;
  int sign = 1;
  std::string out;
};

Raster as_rgb(const Raster& image) {
  if (image.channels() == 3) return image;
  Raster rgb(image.width(), image.height(), 3);
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      for (int c = 0; c < 3; ++c) rgb.at(x, y, c) = image.at(x, y, 0);
    }
  }
  return rgb;
}

Raster overlay(const Raster& image, const LabelMask& mask) {
  static constexpr std::array<std::array<int, 3>, 6> kPalette{
      {{230, 25, 75}, {60, 180, 75}, {255, 225, 25}, {0, 130, 200}, {245, 130, 48}, {70, 240, 240}}};
  Raster out = as_rgb(image);
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      const int label = mask.at(x, y);
      if (label == mask.ignore_index()) {
        out.at(x, y, 0) = 255;
        out.at(x, y, 1) = 0;
        out.at(x, y, 2) = 255;
      } else if (label > 0) {
        const auto& color = kPalette[static_cast<std::size_t>(label - 1) % kPalette.size()];
        for (int c = 0; c < 3; ++c) {
          out.at(x, y, c) = static_cast<std::uint8_t>((out.at(x, y, c) + color[static_cast<std::size_t>(c)]) / 2);
        }
      }
    }
  }
  return out;
}

void paste(Raster& canvas, const Raster& tile, int x0, int y0) {
  for (int y = 0; y < tile.height(); ++y) {
    for (int x = 0; x < tile.width(); ++x) {
      for (int c = 0; c < 3; ++c) canvas.at(x0 + x, y0 + y, c) = tile.at(x, y, c);
    }
  }
}

int cmd_preview(const PreviewFlags& flags) {
  const auto valid = rand_ops();
  if (std::none_of(valid.begin(), valid.end(), [&](OpId op) { return op_name(op) == flags.op; })) {
    std::string names;
    for (OpId op : valid) names += (names.empty() ? "" : ", ") + std::string(op_name(op));
    throw ConfigError("unknown op '" + flags.op + "'; valid ops: " + names);
  }
  if (flags.sign != 1 && flags.sign != -1) throw ConfigError("--sign must be 1 or -1");
  if (flags.magnitude < 0 || flags.magnitude > kMaxMagnitude) {
    throw ConfigError("--magnitude " + std::to_string(flags.magnitude) + " outside [0, 30]");
  }
  const Raster image = read_image_png(flags.image);
  const LabelMask mask = read_mask_png(flags.mask);
  if (image.width() != mask.width() || image.height() != mask.height()) {
    throw DataError("size mismatch: " + flags.image + " and " + flags.mask);
  }
  AugPlan plan{true, {make_step(op_from_name(flags.op), Magnitude(flags.magnitude), flags.sign)}};
  const ImageAndMask after = apply_plan(plan, image, mask);

  const int w = image.width();
  const int h = image.height();
  Raster canvas(2 * w, 2 * h, 3);
  paste(canvas, as_rgb(image), 0, 0);
  paste(canvas, as_rgb(after.image), w, 0);
  paste(canvas, overlay(image, mask), 0, h);
  paste(canvas, overlay(after.image, after.mask), w, h);
  write_image_png(flags.out, canvas);
  std::cout << "wrote " << flags.out << " (top: image before | after, bottom: mask overlay before | after)\n";
  return kOk;
}

// --------------------------------------------------------------- generate

struct GenerateFlags {
  std::string out;
  std::string spec;
  SyntheticSpec synthetic;
  std::string variant = "color";
};

int cmd_generate(GenerateFlags flags, const GlobalFlags& global) {
  SyntheticSpec spec;
  if (!flags.spec.empty()) {
    spec = synthetic_spec_from_json(read_json_file(flags.spec));
  } else {
    spec = flags.synthetic;
    spec.seed = global.seed;
    Json j = to_json(spec);
    j["variant"] = flags.variant;
    spec = synthetic_spec_from_json(j);
  }
  const DatasetManifest manifest = generate_synthetic(spec, flags.out);
  std::cout << "wrote " << manifest.items.size() << " pairs (" << manifest.num_classes << " classes) to " << flags.out
            << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Segmentation-aware data augmentation: strategies, strategy search and analysis.", "segaug"};
  app.require_subcommand(1);
  app.footer(kExternalContract);
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON file with option values ({\"seed\": 1, \"search\": {\"budget\": 20}})");

  GlobalFlags global;
  app.add_option("--seed", global.seed, "RNG seed")->capture_default_str();
  app.add_flag("-v,--verbose", global.verbose, "Verbose logging");
  app.add_option("--jobs", global.jobs, "Maximum parallel workers")->check(CLI::PositiveNumber)->capture_default_str();

  AugmentFlags augment;
  auto* augment_cmd = app.add_subcommand("augment", "Write augmented image/mask pairs per epoch plus a plans.jsonl replay log");
  augment_cmd->add_option("--data", augment.data, "Dataset root")->required();
  augment_cmd->add_option("--strategy", augment.strategy, "Strategy JSON file or inline JSON")->required();
  augment_cmd->add_option("--epochs", augment.epochs, "Number of epochs")->capture_default_str();
  augment_cmd->add_option("--out", augment.out, "Output directory (must not exist or be empty)")->required();
  augment_cmd->add_option("--split", augment.split, "Split to augment")->capture_default_str();
  augment_cmd->add_option("--target", augment.target, "Crop-or-downsize target WIDTHxHEIGHT");
  augment_cmd->add_option("--crop-probability", augment.crop_probability, "Probability of the crop branch")
      ->capture_default_str();

  SearchFlags search;
  auto* search_cmd = app.add_subcommand("search", "Search augmentation hyperparameters");
  search_cmd->footer(kExternalContract);
  search_cmd->add_option("--space", search.space, "smart | rand")->capture_default_str();
  search_cmd->add_option("--method", search.method, "bo | random | grid (grid needs --space rand)")->capture_default_str();
  search_cmd->add_option("--budget", search.budget, "Number of trials")->capture_default_str();
  search_cmd->add_option("--evaluator", search.evaluator, "proxy | external:<command>")->capture_default_str();
  search_cmd->add_option("--ledger", search.ledger, "JSON Lines trial ledger (resumed when it exists)")->required();
  search_cmd->add_option("--data", search.data, "Dataset root for the proxy evaluator (default: built-in synthetic)");
  search_cmd->add_option("--n-max", search.n_max, "Upper bound of N in the rand space (default 3 for grid, 13 otherwise)");
  search_cmd->add_option("--timeout", search.timeout, "External evaluator timeout in seconds");
  search_cmd->add_flag("--timing", search.timing, "Record wall_time per trial (makes ledgers run-dependent)");
  search_cmd->add_option("--proxy-epochs", search.proxy_epochs, "Training epochs of the proxy evaluator")
      ->capture_default_str();

  std::string analyze_ledger;
  std::string analyze_out;
  auto* analyze_cmd = app.add_subcommand("analyze", "Summarize a trial ledger");
  analyze_cmd->add_option("--ledger", analyze_ledger, "Trial ledger")->required();
  analyze_cmd->add_option("--out", analyze_out, "Write the JSON report here");

  PreviewFlags preview;
  auto* preview_cmd = app.add_subcommand("preview", "Render one op on an image/mask pair side by side");
  preview_cmd->add_option("--image", preview.image, "Image PNG")->required();
  preview_cmd->add_option("--mask", preview.mask, "Mask PNG")->required();
  preview_cmd->add_option("--op", preview.op, "Op name")->required();
  preview_cmd->add_option("--magnitude", preview.magnitude, "Magnitude in [0, 30]")->capture_default_str();
  preview_cmd->add_option("--sign", preview.sign, "Direction of signed ops (1 or -1)")->capture_default_str();
  preview_cmd->add_option("--out", preview.out, "Output PNG")->required();

  GenerateFlags generate;
  auto* generate_cmd = app.add_subcommand("generate", "Write a synthetic segmentation dataset");
  generate_cmd->add_option("--out", generate.out, "Output dataset root")->required();
  generate_cmd->add_option("--spec", generate.spec, "Synthetic spec JSON (overrides the flags below)");
  generate_cmd->add_option("--count", generate.synthetic.count, "Number of image/mask pairs")->capture_default_str();
  generate_cmd->add_option("--width", generate.synthetic.width, "Canvas width")->capture_default_str();
  generate_cmd->add_option("--height", generate.synthetic.height, "Canvas height")->capture_default_str();
  generate_cmd->add_option("--classes", generate.synthetic.num_classes, "Class count k")->capture_default_str();
  generate_cmd->add_option("--shapes", generate.synthetic.shapes, "Shapes per image")->capture_default_str();
  generate_cmd->add_option("--channels", generate.synthetic.channels, "1 or 3")->capture_default_str();
  generate_cmd->add_option("--variant", generate.variant, "color | color_shift")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  const LogLevel previous = log_level();
  set_log_level(global.verbose ? LogLevel::Verbose : LogLevel::Info);
  int code = kOk;
  try {
    if (*augment_cmd) {
      code = cmd_augment(augment, global);
    } else if (*search_cmd) {
      code = cmd_search(search, global);
    } else if (*analyze_cmd) {
      code = cmd_analyze(analyze_ledger, analyze_out);
    } else if (*preview_cmd) {
      code = cmd_preview(preview);
    } else if (*generate_cmd) {
      code = cmd_generate(generate, global);
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    code = kUsage;
  } catch (const ContractError& e) {
    std::cerr << "error: " << e.what() << '\n';
    code = kUsage;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    code = kDataError;
  } catch (const LedgerError& e) {
    std::cerr << "error: " << e.what() << '\n';
    code = kDataError;
  } catch (const EvaluatorError& e) {
    std::cerr << "error: " << e.what() << '\n' << e.diagnostics() << '\n';
    code = kEvaluatorError;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    code = kDataError;
  }
  set_log_level(previous);
  return code;
}

}  // namespace segaug::cli
