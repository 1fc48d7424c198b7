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

#include "segaug/search.hpp"

#include <chrono>
#include <fstream>
#include <future>
#include <string>

#include "segaug/error.hpp"
#include "segaug/serialize.hpp"

namespace fs = std::filesystem;

namespace segaug {

nlohmann::json to_json(const TrialRecord& record) {
  Json j;
  j["trial_id"] = record.trial_id;
  j["config"] = to_json(record.config);
  j["seed"] = record.seed;
  j["status"] = record.status == TrialStatus::Ok ? "ok" : "failed";
  if (record.score) j["score"] = *record.score;
  if (record.wall_time) j["wall_time"] = *record.wall_time;
  if (!record.error.empty()) j["error"] = record.error;
  return j;
}

TrialRecord trial_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw LedgerError("row is not a JSON object");
  TrialRecord r;
  try {
    r.trial_id = j.at("trial_id").get<int>();
    r.config = strategy_from_json(j.at("config"));
    r.seed = j.at("seed").get<std::uint64_t>();
    const auto status = j.at("status").get<std::string>();
    if (status == "ok") {
      r.status = TrialStatus::Ok;
    } else if (status == "failed") {
      r.status = TrialStatus::Failed;
    } else {
      throw LedgerError("unknown status '" + status + "'");
    }
    if (j.contains("score")) r.score = j.at("score").get<double>();
    if (j.contains("wall_time")) r.wall_time = j.at("wall_time").get<double>();
    if (j.contains("error")) r.error = j.at("error").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw LedgerError(e.what());
  } catch (const ConfigError& e) {
    throw LedgerError(std::string("bad config: ") + e.what());
  }
  if (r.score.has_value() != (r.status == TrialStatus::Ok)) {
    throw LedgerError("score must be present exactly when status is ok");
  }
  return r;
}

std::vector<TrialRecord> Ledger::read(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw LedgerError("cannot read ledger " + path.string());
  std::vector<TrialRecord> records;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      throw LedgerError(path.string() + ": line " + std::to_string(line_no) + ": empty line");
    }
    try {
      TrialRecord r = trial_from_json(Json::parse(line));
      if (r.trial_id != static_cast<int>(records.size())) {
        throw LedgerError("trial_id " + std::to_string(r.trial_id) + " where " +
                          std::to_string(records.size()) + " was expected");
      }
      records.push_back(std::move(r));
    } catch (const nlohmann::json::parse_error& e) {
      throw LedgerError(path.string() + ": line " + std::to_string(line_no) + ": " + e.what());
    } catch (const LedgerError& e) {
      throw LedgerError(path.string() + ": line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return records;
}

Ledger Ledger::open(const fs::path& path) {
  Ledger ledger;
  if (fs::exists(path)) ledger.records_ = read(path);
  ledger.path_ = path;
  return ledger;
}

void Ledger::append(const TrialRecord& record) {
  if (record.trial_id != static_cast<int>(records_.size())) {
    throw LedgerError("trial ids must be dense: got " + std::to_string(record.trial_id) + ", expected " +
                      std::to_string(records_.size()));
  }
  if (path_) {
    std::ofstream out(*path_, std::ios::app);
    out << to_json(record).dump() << '\n';
    out.flush();
    if (!out) throw LedgerError("cannot append to ledger " + path_->string());
  }
  records_.push_back(record);
}

std::string_view method_name(SearchMethod method) {
  switch (method) {
    case SearchMethod::Grid: return "grid";
    case SearchMethod::Random: return "random";
    case SearchMethod::Bo: return "bo";
  }
  return "bo";
}

SearchMethod method_from_name(std::string_view name) {
  if (name == "grid") return SearchMethod::Grid;
  if (name == "random") return SearchMethod::Random;
  if (name == "bo") return SearchMethod::Bo;
  throw ConfigError("unknown search method '" + std::string(name) + "'; expected grid, random or bo");
}

std::uint64_t trial_seed(std::uint64_t search_seed, int trial_id) {
  return derive_seed(search_seed, static_cast<std::uint64_t>(trial_id), 0x7121A1ULL);
}

namespace {

std::uint64_t suggestion_seed(std::uint64_t search_seed, int trial_id) {
  return derive_seed(search_seed, static_cast<std::uint64_t>(trial_id), 0x5E6E57ULL);
}

TrialRecord run_trial(const Evaluator& evaluator, StrategyConfig cfg, int trial_id, std::uint64_t seed,
                      bool record_wall_time) {
  TrialRecord record;
  record.trial_id = trial_id;
  record.seed = seed;
  cfg.seed = seed;
  record.config = cfg;
  const auto start = std::chrono::steady_clock::now();
  try {
    record.score = evaluator.evaluate(cfg, seed);
    record.status = TrialStatus::Ok;
  } catch (const EvaluatorError& e) {
    record.status = TrialStatus::Failed;
    record.error = e.what();
    if (!e.diagnostics().empty()) record.error += "\n" + e.diagnostics();
  } catch (const std::exception& e) {
    record.status = TrialStatus::Failed;
    record.error = e.what();
  }
  if (record_wall_time) {
    record.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return record;
}

}  // namespace

Ledger run_search(const SearchOptions& options, const Evaluator& evaluator,
                  const std::optional<fs::path>& ledger_path) {
  if (options.budget < 1) throw ConfigError("search budget must be >= 1");
  if (options.jobs < 1) throw ConfigError("jobs must be >= 1");
  std::vector<StrategyConfig> grid;
  if (options.method == SearchMethod::Grid) grid = grid_points(options.space);
  const int budget = options.method == SearchMethod::Grid
                         ? std::min(options.budget, static_cast<int>(grid.size()))
                         : options.budget;

  Ledger ledger = ledger_path ? Ledger::open(*ledger_path) : Ledger();
  for (const auto& r : ledger.records()) {
    if (!options.space.contains(r.config)) {
      throw LedgerError("ledger row " + std::to_string(r.trial_id) + " is not in the " +
                        std::string(options.space.name()) + " search space");
    }
  }

  auto suggest = [&](int trial_id) {
    if (options.method == SearchMethod::Grid) return grid[static_cast<std::size_t>(trial_id)];
    Rng rng(suggestion_seed(options.seed, trial_id));
    if (options.method == SearchMethod::Random) return options.space.sample_uniform(rng);
    return tpe_suggest(ledger.records(), options.space, rng, options.tpe);
  };

  int next = static_cast<int>(ledger.size());
  while (next < budget) {
    const int batch = std::min(options.jobs, budget - next);
    std::vector<StrategyConfig> configs;
    for (int j = 0; j < batch; ++j) configs.push_back(suggest(next + j));
    if (batch == 1) {
      ledger.append(run_trial(evaluator, configs[0], next, trial_seed(options.seed, next),
                              options.record_wall_time));
    } else {
      std::vector<std::future<TrialRecord>> running;
      for (int j = 0; j < batch; ++j) {
        const int id = next + j;
        running.push_back(std::async(std::launch::async, run_trial, std::cref(evaluator), configs[static_cast<std::size_t>(j)],
                                     id, trial_seed(options.seed, id), options.record_wall_time));
      }
      for (auto& f : running) ledger.append(f.get());
    }
    next += batch;
  }
  return ledger;
}

std::vector<TrialRecord> grid_search(const SearchSpace& space, const Evaluator& evaluator, int budget) {
  SearchOptions options;
  options.method = SearchMethod::Grid;
  options.space = space;
  options.budget = budget;
  return run_search(options, evaluator).records();
}

std::vector<TrialRecord> random_search(const SearchSpace& space, const Evaluator& evaluator, int budget,
                                       std::uint64_t seed) {
  SearchOptions options;
  options.method = SearchMethod::Random;
  options.space = space;
  options.budget = budget;
  options.seed = seed;
  return run_search(options, evaluator).records();
}

}  // namespace segaug
