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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "segaug/cli.hpp"
#include "segaug/data.hpp"
#include "segaug/evaluator.hpp"
#include "segaug/log.hpp"
#include "segaug/metrics.hpp"
#include "segaug/plan.hpp"
#include "segaug/png_io.hpp"
#include "segaug/search.hpp"
#include "segaug/serialize.hpp"
#include "segaug/strategy.hpp"

using namespace segaug;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

const SmartParams& smart(const StrategyConfig& c) { return std::get<SmartParams>(c.params); }

std::size_t index_in(std::span<const OpId> list, OpId op) {
  return static_cast<std::size_t>(std::find(list.begin(), list.end(), op) - list.begin());
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("segaug_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 1. Every op kernel against its brute-force oracle.
Outcome op_kernel_oracles() {
  const auto start = Clock::now();
  std::mt19937_64 gen(101);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::map<std::string, int> mismatches;
  int ops_checked = 0;
  for (OpId op : all_ops()) {
    ++ops_checked;
    for (int trial = 0; trial < 500; ++trial) {
      const int w = 1 + static_cast<int>(gen() % 8);
      const int h = 1 + static_cast<int>(gen() % 8);
      const Raster img = oracle::random_raster(gen, w, h, gen() % 2 ? 3 : 1);
      const LabelMask mask = oracle::random_mask(gen, w, h, 4, 0.1);
      const int m = static_cast<int>(gen() % 31);
      const int sign = gen() % 2 ? 1 : -1;
      bool same = true;
      const OpSpec& spec = op_spec(op);
      if (spec.kind == OpKind::Color) {
        const double p = magnitude_to_param(op, Magnitude(m), sign).value_or(0.0);
        same = apply_color_op(op, p, img) == oracle::color_op(op, p, img);
      } else if (op == OpId::Identity) {
        const auto out = apply_plan(AugPlan{true, {make_step(op, Magnitude(m), sign)}}, img, mask);
        same = out.image == img && out.mask == mask;
      } else {
        double p;
        if (op == OpId::HorizontalFlip) {
          p = 0.0;
        } else if (op == OpId::Scale) {
          p = 1.0 + 0.35 * u(gen);
        } else {
          p = *magnitude_to_param(op, Magnitude(m), sign);
        }
        const auto out = apply_geometric_op(op, p, img, mask);
        const auto [ref_img, ref_mask] = oracle::geometric_op(op, p, img, mask);
        same = out.image == ref_img && out.mask == ref_mask;
      }
      if (!same) ++mismatches[std::string(op_name(op))];
    }
  }
  const double secs = seconds_since(start);
  std::string detail = fmt("%d ops x 500 cases, %.2fs", ops_checked, secs);
  for (const auto& [name, n] : mismatches) detail += fmt(", %s: %d mismatches", name.c_str(), n);
  return {mismatches.empty() && secs < 30.0, detail};
}

// One-hot co-location between a nearest-sampled mask and a bilinear image:
// a hot mask pixel sees at least a quarter of the hot source value, and an
// image pixel above half of it must be hot in the mask.
int colocation_violations(OpId op, double param, int w, int h) {
  int violations = 0;
  for (int hy = 0; hy < h; ++hy) {
    for (int hx = 0; hx < w; ++hx) {
      Raster img(w, h, 1, 0);
      LabelMask mask(w, h, 0);
      img.at(hx, hy, 0) = 255;
      mask.at(hx, hy) = 1;
      const auto out = apply_geometric_op(op, param, img, mask);
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
          const int v = out.image.at(x, y, 0);
          const bool hot = out.mask.at(x, y) == 1;
          if (hot && v < 64) ++violations;
          if (v >= 129 && !hot) ++violations;
          if (out.mask.at(x, y) == mask.ignore_index() && v != 0) ++violations;
        }
      }
    }
  }
  return violations;
}

// 2. Label preservation under random geometric plans.
Outcome label_preservation() {
  Rng rng(202);
  int violations = 0;
  int steps = 0;
  for (int plan_index = 0; plan_index < 1000; ++plan_index) {
    AugPlan plan;
    if (plan_index % 5 == 4) {
      plan = sample_default_plan(rng);
    } else {
      const SmartParams cfg{0, rng.integer(1, 5), 0, rng.integer(0, 30), 1.0};
      plan = sample_smart_plan(cfg, rng);
    }
    const int w = rng.integer(3, 10);
    const int h = rng.integer(3, 10);
    for (const PlanStep& step : plan.steps) {
      violations += colocation_violations(step.op, step.param, w, h);
      ++steps;
    }
  }
  return {violations == 0, fmt("1000 plans, %d steps, %d violations", steps, violations)};
}

// 3. Sampler distributions.
Outcome sampler_distributions() {
  const int n = 10000;
  std::vector<std::string> failed;
  std::string detail;
  auto record = [&](const std::string& name, const oracle::ChiSquare& c) {
    detail += fmt("%s chi2=%.1f/%.1f(df %d); ", name.c_str(), c.statistic, c.critical, c.dof);
    if (!c.pass()) failed.push_back(name);
  };
  {
    Rng rng(301);
    std::vector<double> counts(13, 0.0);
    for (int i = 0; i < n; ++i) counts[index_in(rand_ops(), sample_trivial_plan(rng).steps[0].op)]++;
    record("trivial", oracle::chi_square(counts, std::vector<double>(13, n / 13.0)));
  }
  {
    Rng rng(302);
    std::vector<double> counts(13, 0.0);
    for (int i = 0; i < n; ++i) counts[index_in(rand_ops(), sample_rand_plan({1, 9}, rng).steps[0].op)]++;
    record("rand++", oracle::chi_square(counts, std::vector<double>(13, n / 13.0)));
  }
  {
    Rng rng(303);
    const WeightTable table = default_weight_table();
    const auto dist = oracle::successive_draw_distribution(table.probabilities(), 2);
    std::map<std::vector<std::size_t>, double> seen;
    for (int i = 0; i < n; ++i) {
      const AugPlan plan = sample_smartsampling_plan(table, {0, 1}, rng);
      seen[{index_in(smart_ops(), plan.steps[0].op), index_in(smart_ops(), plan.steps[1].op)}]++;
    }
    std::vector<double> obs;
    std::vector<double> exp;
    double covered = 0;
    for (const auto& [seq, p] : dist) {
      obs.push_back(seen[seq]);
      exp.push_back(p * n);
      covered += seen[seq];
    }
    if (covered != n) failed.push_back("smartsampling support");
    record("smartsampling", oracle::chi_square(obs, exp));
  }
  for (double p : {0.1, 0.5, 0.9}) {
    Rng rng(304 + static_cast<std::uint64_t>(p * 10));
    double hits = 0;
    for (int i = 0; i < n; ++i) hits += sample_smart_plan({2, 1, 10, 10, p}, rng).augment;
    record(fmt("smart P=%.1f", p), oracle::chi_square({hits, n - hits}, {n * p, n * (1 - p)}));
  }
  {
    Rng rng(305);
    double flips = 0;
    for (int i = 0; i < n; ++i) flips += sample_default_plan(rng).steps[0].op == OpId::HorizontalFlip;
    record("default flip", oracle::chi_square({flips, n - flips}, {n * 0.5, n * 0.5}));
  }
  for (const auto& f : failed) detail += "FAILED " + f + "; ";
  return {failed.empty(), detail};
}

// 4. Annealing schedule.
Outcome annealing_exactness() {
  bool ok = true;
  for (int total : {2, 10, 100}) {
    const Fraction first = annealed_probability({0, total});
    const Fraction last = annealed_probability({total - 1, total});
    ok &= first.num == 0 && last.num == last.den;
    for (int e = 0; e + 1 < total; ++e) {
      const Fraction a = annealed_probability({e, total});
      const Fraction b = annealed_probability({e + 1, total});
      // b - a == 1 / (total - 1), cross-multiplied
      ok &= (b.num * a.den - a.num * b.den) * (total - 1) == a.den * b.den;
    }
  }
  return {ok, "E in {2, 10, 100}: P(0)=0, P(E-1)=1, constant step 1/(E-1)"};
}

// 5. Classical grid.
Outcome classical_grid() {
  FunctionEvaluator f([](const StrategyConfig&, std::uint64_t) { return 0.5; });
  const auto rows = grid_search(SearchSpace::rand(3), f, 1000);
  bool ordered = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& p = std::get<RandParams>(rows[i].config.params);
    ordered &= p.n == 1 + static_cast<int>(i / 31) && p.m == static_cast<int>(i % 31);
  }
  return {rows.size() == 93 && ordered, fmt("%zu trials, row-major order %s", rows.size(), ordered ? "ok" : "broken")};
}

// 6. TPE against random search on a synthetic objective.
Outcome tpe_efficacy() {
  const auto start = Clock::now();
  FunctionEvaluator f([](const StrategyConfig& c, std::uint64_t) {
    const auto& s = smart(c);
    return -std::pow(s.m_color - 20, 2) - std::pow(s.m_geometric - 5, 2) - std::abs(s.p - 0.7);
  });
  int wins = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    SearchOptions options;
    options.budget = 50;
    options.seed = seed;
    options.method = SearchMethod::Bo;
    const double bo = *summarize_ledger(run_search(options, f).records()).best.score;
    options.method = SearchMethod::Random;
    const double rs = *summarize_ledger(run_search(options, f).records()).best.score;
    wins += bo >= rs;
  }
  const double secs = seconds_since(start);
  return {wins >= 80 && secs < 300.0, fmt("TPE >= random in %d/100 paired runs, %.1fs", wins, secs)};
}

// 7. Strategy preference flips between synthetic variants.
Outcome directional_reproduction() {
  const auto start = Clock::now();
  const StrategyConfig low = make_smart(1, 0, 3, 0, 0.5);
  const StrategyConfig heavy = make_smart(7, 0, 30, 0, 1.0);
  double margin_cued = 0;
  double margin_shift = 0;
  int cued_low_wins = 0;
  int shift_heavy_wins = 0;
  const int seeds = 20;
  for (int seed = 0; seed < seeds; ++seed) {
    for (SyntheticVariant variant : {SyntheticVariant::ColorCued, SyntheticVariant::ColorShift}) {
      SyntheticSpec spec;
      spec.variant = variant;
      spec.seed = static_cast<std::uint64_t>(seed);
      const ProxyEvaluator evaluator(synthesize_dataset(spec));
      const std::uint64_t ts = trial_seed(static_cast<std::uint64_t>(seed), 0);
      const double s_low = evaluator.evaluate(low, ts);
      const double s_heavy = evaluator.evaluate(heavy, ts);
      if (variant == SyntheticVariant::ColorCued) {
        margin_cued += (s_low - s_heavy) / seeds;
        cued_low_wins += s_low > s_heavy;
      } else {
        margin_shift += (s_heavy - s_low) / seeds;
        shift_heavy_wins += s_heavy > s_low;
      }
    }
  }
  const double secs = seconds_since(start);
  const bool pass = margin_cued > 0.05 && margin_shift > 0.05 && secs < 600.0;
  return {pass, fmt("color-cued: low-M_C ahead by %.3f mIoU (%d/20 seeds); color-shift: heavy ahead by %.3f "
                    "(%d/20 seeds); %.1fs",
                    margin_cued, cued_low_wins, margin_shift, shift_heavy_wins, secs)};
}

// 8. End-to-end determinism through the command line.
Outcome end_to_end_determinism() {
  TempDir tmp;
  auto p = [&](const char* name) { return (tmp.path / name).string(); };
  bool ok = cli::run({"--seed", "8", "generate", "--out", p("data"), "--count", "12"}) == cli::kOk;
  for (const char* ledger : {"l1.jsonl", "l2.jsonl"}) {
    ok &= cli::run({"--seed", "8", "search", "--budget", "12", "--data", p("data"), "--ledger", p(ledger)}) ==
          cli::kOk;
  }
  const bool ledgers_equal = ok && slurp(p("l1.jsonl")) == slurp(p("l2.jsonl")) && !slurp(p("l1.jsonl")).empty();

  const std::string strategy = R"({"kind":"smart","n_c":3,"n_g":2,"m_c":14,"m_g":11,"p":0.9})";
  ok &= cli::run({"--seed", "8", "augment", "--data", p("data"), "--strategy", strategy, "--epochs", "3",
                  "--target", "28x24", "--out", p("aug")}) == cli::kOk;
  const Dataset data = load_dataset(load_manifest(p("data")));
  std::ifstream log(tmp.path / "aug" / "plans.jsonl");
  std::string line;
  int rows = 0;
  int replay_mismatches = 0;
  while (std::getline(log, line)) {
    const Json j = Json::parse(line);
    const std::string name = j.at("item");
    const auto it = std::find_if(data.train.begin(), data.train.end(), [&](const Sample& s) { return s.name == name; });
    if (it == data.train.end()) {
      ++replay_mismatches;
      continue;
    }
    const auto base = apply_preprocess(preprocess_decision_from_json(j.at("preprocess")), it->image, it->mask);
    const auto out = apply_plan(plan_from_json(j.at("plan")), base.image, base.mask);
    const fs::path dir = tmp.path / "aug" / ("epoch_" + std::to_string(j.at("epoch").get<int>()));
    if (!(read_image_png(dir / "images" / name) == out.image && read_mask_png(dir / "masks" / name) == out.mask)) {
      ++replay_mismatches;
    }
    ++rows;
  }
  const bool replay_ok = rows == 3 * static_cast<int>(data.train.size()) && replay_mismatches == 0;
  return {ok && ledgers_equal && replay_ok,
          fmt("ledgers %s; replayed %d augment rows, %d mismatches", ledgers_equal ? "byte-identical" : "DIFFER", rows,
              replay_mismatches)};
}

// 9. mIoU against the pixel-set oracle.
Outcome miou_oracle() {
  std::mt19937_64 gen(909);
  double worst = 0;
  int cases = 0;
  while (cases < 1000) {
    const int k = 1 + static_cast<int>(gen() % 4);
    const int n = 1 + static_cast<int>(gen() % 3);
    std::vector<LabelMask> gt;
    std::vector<LabelMask> pred;
    bool scored = false;
    for (int i = 0; i < n; ++i) {
      const int w = 1 + static_cast<int>(gen() % 8);
      const int h = 1 + static_cast<int>(gen() % 8);
      gt.push_back(oracle::random_mask(gen, w, h, k, 0.15));
      pred.push_back(oracle::random_mask(gen, w, h, k, 0.05));
      for (auto l : gt.back().labels()) scored |= l != 255;
    }
    if (!scored) continue;
    worst = std::max(worst, std::abs(miou(pred, gt, k).miou - oracle::miou_by_sets(pred, gt, k)));
    ++cases;
  }
  return {worst <= 1e-12, fmt("1000 cases, max |difference| = %.3g", worst)};
}

// 10. External evaluator loopback.
Outcome external_loopback() {
  ExternalSpec spec;
  spec.command = std::string("'") + STUB_TRAINER + "' p";
  const ExternalEvaluator evaluator(spec);
  SearchOptions options;
  options.budget = 15;
  options.seed = 10;
  const auto rows = run_search(options, evaluator).records();
  int exact = 0;
  for (const auto& r : rows) exact += r.status == TrialStatus::Ok && *r.score == smart(r.config).p;
  return {exact == static_cast<int>(rows.size()) && rows.size() == 15,
          fmt("%d/%zu ledger scores equal the config's P exactly", exact, rows.size())};
}

}  // namespace

int main() {
  set_log_level(LogLevel::Quiet);
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"op kernels match brute-force oracles", op_kernel_oracles},
      {"label preservation (one-hot co-location)", label_preservation},
      {"sampler distributions (chi-square, alpha 0.001)", sampler_distributions},
      {"annealing exactness", annealing_exactness},
      {"classical grid has 93 trials", classical_grid},
      {"TPE efficacy", tpe_efficacy},
      {"directional reproduction on synthetic variants", directional_reproduction},
      {"end-to-end determinism", end_to_end_determinism},
      {"mIoU oracle equivalence", miou_oracle},
      {"external evaluator loopback", external_loopback},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    failures += !outcome.pass;
    std::printf("criterion %zu: %s  %s: %s\n", i + 1, outcome.pass ? "PASS" : "FAIL", criteria[i].first,
                outcome.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
