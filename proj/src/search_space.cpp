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

#include <cmath>
#include <string>

#include "segaug/error.hpp"
#include "segaug/search.hpp"

namespace segaug {

SearchSpace SearchSpace::smart() {
  return SearchSpace(SpaceKind::Smart, {
                                           {"n_c", DimensionType::Categorical, 0, 7},
                                           {"n_g", DimensionType::Categorical, 0, 5},
                                           {"m_c", DimensionType::Integer, 0, 30},
                                           {"m_g", DimensionType::Integer, 0, 30},
                                           {"p", DimensionType::Real, 0.0, 1.0},
                                       });
}

SearchSpace SearchSpace::rand(int n_max, int n_min) {
  const int list_size = static_cast<int>(rand_ops().size());
  if (n_min < 1 || n_max < n_min || n_max > list_size) {
    throw ConfigError("rand space needs 1 <= n_min <= n_max <= " + std::to_string(list_size));
  }
  return SearchSpace(SpaceKind::Rand, {
                                          {"n", DimensionType::Categorical, static_cast<double>(n_min),
                                           static_cast<double>(n_max)},
                                          {"m", DimensionType::Integer, 0, 30},
                                      });
}

std::vector<double> SearchSpace::encode(const StrategyConfig& cfg) const {
  if (kind_ == SpaceKind::Smart) {
    const auto* s = std::get_if<SmartParams>(&cfg.params);
    if (!s) throw ConfigError("config kind '" + std::string(cfg.kind()) + "' is not in the smart space");
    return {static_cast<double>(s->n_color), static_cast<double>(s->n_geometric),
            static_cast<double>(s->m_color), static_cast<double>(s->m_geometric), s->p};
  }
  const auto* r = std::get_if<RandParams>(&cfg.params);
  if (!r) throw ConfigError("config kind '" + std::string(cfg.kind()) + "' is not in the rand space");
  return {static_cast<double>(r->n), static_cast<double>(r->m)};
}

StrategyConfig SearchSpace::decode(std::span<const double> v, std::uint64_t seed) const {
  SEGAUG_EXPECT(v.size() == dims_.size(), "value count does not match the space dimensionality");
  auto as_int = [](double x) { return static_cast<int>(std::lround(x)); };
  if (kind_ == SpaceKind::Smart) {
    return make_smart(as_int(v[0]), as_int(v[1]), as_int(v[2]), as_int(v[3]), v[4], seed);
  }
  return make_rand(as_int(v[0]), as_int(v[1]), seed);
}

bool SearchSpace::contains(const StrategyConfig& cfg) const {
  std::vector<double> values;
  try {
    values = encode(cfg);
  } catch (const ConfigError&) {
    return false;
  }
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    const auto& d = dims_[i];
    if (!(values[i] >= d.lo && values[i] <= d.hi)) return false;
    if (d.type != DimensionType::Real && values[i] != std::floor(values[i])) return false;
  }
  return true;
}

StrategyConfig SearchSpace::sample_uniform(Rng& rng, std::uint64_t seed) const {
  std::vector<double> values;
  values.reserve(dims_.size());
  for (const auto& d : dims_) {
    if (d.type == DimensionType::Real) {
      values.push_back(rng.uniform(d.lo, d.hi));
    } else {
      values.push_back(rng.integer(static_cast<int>(d.lo), static_cast<int>(d.hi)));
    }
  }
  return decode(values, seed);
}

std::vector<StrategyConfig> grid_points(const SearchSpace& space) {
  if (space.kind() != SpaceKind::Rand) throw ConfigError("grid search is only defined on the rand space");
  const auto& dims = space.dimensions();
  std::vector<StrategyConfig> points;
  for (int n = static_cast<int>(dims[0].lo); n <= static_cast<int>(dims[0].hi); ++n) {
    for (int m = static_cast<int>(dims[1].lo); m <= static_cast<int>(dims[1].hi); ++m) {
      points.push_back(make_rand(n, m));
    }
  }
  return points;
}

}  // namespace segaug
