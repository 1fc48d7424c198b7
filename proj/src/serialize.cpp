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

#include "segaug/serialize.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "segaug/error.hpp"

namespace segaug {
namespace {

void expect_keys(const Json& j, std::initializer_list<const char*> allowed, std::string_view what) {
  if (!j.is_object()) throw ConfigError(std::string(what) + " must be a JSON object");
  std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& item : j.items()) {
    if (!keys.count(item.key())) {
      throw ConfigError("unknown key '" + item.key() + "' in " + std::string(what));
    }
  }
}

template <typename T>
T required(const Json& j, const char* key, std::string_view what) {
  if (!j.contains(key)) throw ConfigError(std::string(what) + " is missing '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("'" + std::string(key) + "' in " + std::string(what) + " has the wrong type");
  }
}

int required_int(const Json& j, const char* key, std::string_view what) {
  if (!j.contains(key) || !j.at(key).is_number_integer()) {
    throw ConfigError(std::string(what) + " needs integer '" + key + "'");
  }
  return j.at(key).get<int>();
}

}  // namespace

Json to_json(const WeightTable& table) {
  Json j = Json::object();
  for (OpId op : smart_ops()) j[std::string(op_name(op))] = table.weight(op);
  return j;
}

WeightTable weight_table_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("weight table must be a JSON object");
  std::map<OpId, double> weights;
  for (const auto& item : j.items()) {
    if (!item.value().is_number()) {
      throw ConfigError("weight for '" + item.key() + "' must be a number");
    }
    weights[op_from_name(item.key())] = item.value().get<double>();
  }
  return WeightTable(std::move(weights));
}

Json to_json(const StrategyConfig& cfg) {
  Json j;
  j["kind"] = std::string(cfg.kind());
  if (const auto* r = std::get_if<RandParams>(&cfg.params)) {
    j["n"] = r->n;
    j["m"] = r->m;
  } else if (const auto* s = std::get_if<SmartParams>(&cfg.params)) {
    j["n_c"] = s->n_color;
    j["n_g"] = s->n_geometric;
    j["m_c"] = s->m_color;
    j["m_g"] = s->m_geometric;
    j["p"] = s->p;
  } else if (const auto* ss = std::get_if<SmartSamplingParams>(&cfg.params)) {
    j["weights"] = to_json(ss->weights);
    j["anneal"] = ss->anneal;
  }
  j["seed"] = cfg.seed;
  return j;
}

StrategyConfig strategy_from_json(const Json& j) {
  constexpr std::string_view what = "strategy config";
  if (!j.is_object()) throw ConfigError("strategy config must be a JSON object");
  const auto kind = required<std::string>(j, "kind", what);
  StrategyConfig cfg;
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned() && !(j.at("seed").is_number_integer() && j.at("seed").get<std::int64_t>() >= 0)) {
      throw ConfigError("'seed' must be a non-negative integer");
    }
    cfg.seed = j.at("seed").get<std::uint64_t>();
  }
  if (kind == "default") {
    expect_keys(j, {"kind", "seed"}, what);
    cfg.params = DefaultParams{};
  } else if (kind == "trivial") {
    expect_keys(j, {"kind", "seed"}, what);
    cfg.params = TrivialParams{};
  } else if (kind == "rand") {
    expect_keys(j, {"kind", "seed", "n", "m"}, what);
    cfg.params = RandParams{required_int(j, "n", what), required_int(j, "m", what)};
  } else if (kind == "smart") {
    expect_keys(j, {"kind", "seed", "n_c", "n_g", "m_c", "m_g", "p"}, what);
    SmartParams s;
    s.n_color = required_int(j, "n_c", what);
    s.n_geometric = required_int(j, "n_g", what);
    s.m_color = required_int(j, "m_c", what);
    s.m_geometric = required_int(j, "m_g", what);
    s.p = required<double>(j, "p", what);
    cfg.params = s;
  } else if (kind == "smartsampling") {
    expect_keys(j, {"kind", "seed", "weights", "anneal"}, what);
    SmartSamplingParams s;
    if (j.contains("weights")) {
      s.weights = j.at("weights").is_string() ? load_weight_table(j.at("weights").get<std::string>())
                                              : weight_table_from_json(j.at("weights"));
    }
    if (j.contains("anneal")) s.anneal = required<bool>(j, "anneal", what);
    cfg.params = s;
  } else {
    throw ConfigError("unknown strategy kind '" + kind +
                      "'; expected default, trivial, rand, smart or smartsampling");
  }
  cfg.validate();
  return cfg;
}

StrategyConfig load_strategy(const std::filesystem::path& path) {
  return strategy_from_json(read_json_file(path));
}

Json to_json(const AugPlan& plan) {
  Json steps = Json::array();
  for (const auto& step : plan.steps) {
    Json s;
    s["op"] = std::string(op_name(step.op));
    s["magnitude"] = step.magnitude ? Json(*step.magnitude) : Json(nullptr);
    s["sign"] = step.sign;
    s["param"] = step.param;
    steps.push_back(std::move(s));
  }
  return Json{{"augment", plan.augment}, {"steps", std::move(steps)}};
}

AugPlan plan_from_json(const Json& j) {
  constexpr std::string_view what = "plan";
  expect_keys(j, {"augment", "steps"}, what);
  AugPlan plan;
  plan.augment = required<bool>(j, "augment", what);
  const Json& steps = j.contains("steps") ? j.at("steps") : Json::array();
  if (!steps.is_array()) throw ConfigError("plan 'steps' must be an array");
  for (const auto& s : steps) {
    expect_keys(s, {"op", "magnitude", "sign", "param"}, "plan step");
    const OpId op = op_from_name(required<std::string>(s, "op", "plan step"));
    const int sign = s.contains("sign") ? required<int>(s, "sign", "plan step") : 1;
    if (sign != 1 && sign != -1) throw ConfigError("plan step sign must be +1 or -1");
    PlanStep step;
    if (s.contains("magnitude") && !s.at("magnitude").is_null()) {
      try {
        step = make_step(op, Magnitude(required<int>(s, "magnitude", "plan step")), sign);
      } catch (const ContractError& e) {
        throw ConfigError(e.what());
      }
      if (s.contains("param") && required<double>(s, "param", "plan step") != step.param) {
        throw ConfigError("plan step param disagrees with its magnitude");
      }
    } else {
      step = make_param_step(op, s.contains("param") ? required<double>(s, "param", "plan step") : 0.0, sign);
    }
    plan.steps.push_back(step);
  }
  if (!plan.augment && !plan.steps.empty()) {
    throw ConfigError("a plan that does not augment must have no steps");
  }
  return plan;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("invalid JSON in " + path.string() + ": " + e.what());
  }
}

}  // namespace segaug
