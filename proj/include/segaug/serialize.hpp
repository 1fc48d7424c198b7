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
#include <string>

#include "json.hpp"
#include "segaug/plan.hpp"
#include "segaug/strategy.hpp"

namespace segaug {

using Json = nlohmann::json;

// Strategy config schema:
//   {"kind": "default" | "trivial"}
//   {"kind": "rand", "n": int, "m": int}
//   {"kind": "smart", "n_c": int, "n_g": int, "m_c": int, "m_g": int, "p": real}
//   {"kind": "smartsampling", "weights": {"<Op>": real, ...}, "anneal": bool}
// plus an optional "seed" (unsigned 64-bit, default 0).
Json to_json(const StrategyConfig& cfg);
/// Throws ConfigError on schema violations.
StrategyConfig strategy_from_json(const Json& j);
StrategyConfig load_strategy(const std::filesystem::path& path);

Json to_json(const WeightTable& table);
WeightTable weight_table_from_json(const Json& j);

// {"augment": bool, "steps": [{"op": name, "magnitude": int|null, "sign": +-1, "param": real}]}
Json to_json(const AugPlan& plan);
AugPlan plan_from_json(const Json& j);

/// Reads a whole file as JSON; throws ConfigError naming the path on failure.
Json read_json_file(const std::filesystem::path& path);

}  // namespace segaug
