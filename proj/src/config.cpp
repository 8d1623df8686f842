// Copyright 2026 The fpclab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "fpclab/error.hpp"
#include "fpclab/report.hpp"
#include "json.hpp"
#include "json_io.hpp"

namespace fpclab {

using nlohmann::json;

namespace detail {

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                std::string_view context) {
  if (!obj.is_object()) throw ValidationError(std::string(context) + " must be a JSON object");
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ValidationError("unknown key '" + key + "' in " + std::string(context));
  }
}

json params_to_json(const PopulationParams& params) {
  return std::visit(
      [](const auto& p) -> json {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, DiscreteUniformParams>) {
          return {{"lo", p.lo}, {"hi", p.hi}};
        } else if constexpr (std::is_same_v<P, NormalParams>) {
          return {{"mu", p.mu}, {"sigma", p.sigma}};
        } else if constexpr (std::is_same_v<P, StudentTParams>) {
          return {{"df", p.df}, {"location", p.location}, {"scale", p.scale}};
        } else if constexpr (std::is_same_v<P, SyntheticEmpiricalParams>) {
          json components = json::array();
          for (const auto& c : p.components)
            components.push_back({{"weight", c.weight}, {"mu", c.mu}, {"sigma", c.sigma}});
          return {{"components", components}, {"clamp_lo", p.clamp_lo}, {"clamp_hi", p.clamp_hi}};
        } else {
          return {{"offset", p.offset}, {"noise_sigma", p.noise_sigma}};
        }
      },
      params);
}

PopulationParams params_from_json(PopulationKind kind, const json& j) {
  auto get = [&](const char* key, auto fallback) {
    return j.contains(key) ? j.at(key).get<decltype(fallback)>() : fallback;
  };
  switch (kind) {
    case PopulationKind::discrete_uniform: {
      check_keys(j, {"lo", "hi"}, "discrete_uniform params");
      DiscreteUniformParams d;
      return DiscreteUniformParams{get("lo", d.lo), get("hi", d.hi)};
    }
    case PopulationKind::normal: {
      check_keys(j, {"mu", "sigma"}, "normal params");
      NormalParams d;
      return NormalParams{get("mu", d.mu), get("sigma", d.sigma)};
    }
    case PopulationKind::student_t: {
      check_keys(j, {"df", "location", "scale"}, "student_t params");
      StudentTParams d;
      return StudentTParams{get("df", d.df), get("location", d.location), get("scale", d.scale)};
    }
    case PopulationKind::synthetic_empirical: {
      check_keys(j, {"components", "clamp_lo", "clamp_hi"}, "synthetic_empirical params");
      SyntheticEmpiricalParams p;
      p.clamp_lo = get("clamp_lo", p.clamp_lo);
      p.clamp_hi = get("clamp_hi", p.clamp_hi);
      if (j.contains("components")) {
        p.components.clear();
        for (const auto& c : j.at("components")) {
          check_keys(c, {"weight", "mu", "sigma"}, "mixture component");
          p.components.push_back(
              {c.at("weight").get<double>(), c.at("mu").get<double>(), c.at("sigma").get<double>()});
        }
      }
      return p;
    }
    case PopulationKind::ill_conditioned: {
      check_keys(j, {"offset", "noise_sigma"}, "ill_conditioned params");
      IllConditionedParams d;
      return IllConditionedParams{get("offset", d.offset), get("noise_sigma", d.noise_sigma)};
    }
  }
  throw ValidationError("unknown population kind");
}

json population_to_json(const PopulationSource& source) {
  if (const auto* path = std::get_if<std::filesystem::path>(&source.source)) return path->string();
  const auto& spec = std::get<PopulationSpec>(source.source);
  return {{"name", source.name},
          {"kind", std::string(to_string(spec.kind()))},
          {"size_N", spec.size_N},
          {"seed", spec.seed},
          {"params", params_to_json(spec.params)}};
}

PopulationSource population_from_json(const json& j) {
  if (j.is_string()) {
    std::filesystem::path path = j.get<std::string>();
    return {path, path.stem().string()};
  }
  check_keys(j, {"name", "preset", "kind", "size_N", "seed", "params"}, "population");
  const auto size_N = j.at("size_N").get<std::uint64_t>();
  const auto seed = j.contains("seed") ? j.at("seed").get<std::uint64_t>() : std::uint64_t{1};
  if (j.contains("preset")) {
    if (j.contains("kind") || j.contains("params"))
      throw ValidationError("population: 'preset' cannot be combined with 'kind' or 'params'");
    const auto preset = j.at("preset").get<std::string>();
    PopulationSource out{preset_spec(preset, size_N, seed), preset};
    if (j.contains("name")) out.name = j.at("name").get<std::string>();
    return out;
  }
  if (!j.contains("kind")) throw ValidationError("population needs 'preset', 'kind', or a file path");
  const auto kind = parse_population_kind(j.at("kind").get<std::string>());
  PopulationSpec spec{size_N, params_from_json(kind, j.value("params", json::object())), seed};
  return {spec, j.value("name", std::string("custom"))};
}

json pathway_to_json(const Pathway& p) {
  return {{"strategy", p.strategy.to_string()}, {"precision", std::string(to_string(p.precision))}};
}

Pathway pathway_from_json(const json& j) {
  check_keys(j, {"strategy", "precision"}, "strategy entry");
  return {AccumulationStrategy::parse(j.at("strategy").get<std::string>()),
          parse_precision(j.at("precision").get<std::string>())};
}

json config_to_json_value(const ExperimentConfig& c) {
  json strategies = json::array();
  for (const auto& p : c.strategies) strategies.push_back(pathway_to_json(p));
  return {{"population", population_to_json(c.population)},
          {"f_grid", c.f_grid},
          {"R", c.R},
          {"K", c.K},
          {"strategies", strategies},
          {"sweep_pathway", pathway_to_json(c.sweep_pathway)},
          {"base_seed", c.base_seed},
          {"output_dir", c.output_dir.string()},
          {"thresholds",
           {{"classical_max_f", c.thresholds.classical_max_f},
            {"floor_margin", c.thresholds.floor_margin}}},
          {"dump_draws", c.dump_draws}};
}

ExperimentConfig config_from_json_value(const json& j) {
  check_keys(j,
             {"population", "f_grid", "R", "K", "strategies", "sweep_pathway", "base_seed",
              "output_dir", "thresholds", "dump_draws"},
             "config");
  ExperimentConfig c;
  if (j.contains("population")) c.population = population_from_json(j.at("population"));
  if (j.contains("f_grid")) c.f_grid = j.at("f_grid").get<std::vector<double>>();
  if (j.contains("R")) c.R = j.at("R").get<std::uint64_t>();
  if (j.contains("K")) c.K = j.at("K").get<std::uint64_t>();
  if (j.contains("strategies")) {
    c.strategies.clear();
    for (const auto& s : j.at("strategies")) c.strategies.push_back(pathway_from_json(s));
  }
  if (j.contains("sweep_pathway")) c.sweep_pathway = pathway_from_json(j.at("sweep_pathway"));
  if (j.contains("base_seed")) c.base_seed = j.at("base_seed").get<std::uint64_t>();
  if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
  if (j.contains("thresholds")) {
    const auto& t = j.at("thresholds");
    check_keys(t, {"classical_max_f", "floor_margin"}, "thresholds");
    c.thresholds.classical_max_f = t.value("classical_max_f", c.thresholds.classical_max_f);
    c.thresholds.floor_margin = t.value("floor_margin", c.thresholds.floor_margin);
  }
  if (j.contains("dump_draws")) c.dump_draws = j.at("dump_draws").get<bool>();
  return c;
}

}  // namespace detail

void ExperimentConfig::validate() const {
  if (f_grid.empty()) throw ValidationError("f_grid must not be empty");
  for (std::size_t i = 0; i < f_grid.size(); ++i) {
    if (!(f_grid[i] > 0.0) || f_grid[i] > 1.0) throw ValidationError("f_grid values must lie in (0, 1]");
    if (i > 0 && !(f_grid[i] > f_grid[i - 1])) throw ValidationError("f_grid must be strictly ascending");
  }
  if (R < 2) throw ValidationError("R must be >= 2");
  if (K < 2) throw ValidationError("K must be >= 2");
  if (workers == 0) throw ValidationError("workers must be >= 1");
  thresholds.validate();
  if (const auto* spec = std::get_if<PopulationSpec>(&population.source)) {
    try {
      spec->validate();
    } catch (const ParameterError& e) {
      throw ValidationError(std::string("population: ") + e.what());
    }
  }
}

ExperimentConfig parse_config_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }
  try {
    auto config = detail::config_from_json_value(j);
    config.validate();
    return config;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  } catch (const ParameterError& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  return parse_config_json(detail::read_text(path));
}

std::string config_to_json(const ExperimentConfig& config) {
  return detail::config_to_json_value(config).dump(2) + "\n";
}

Population materialize_population(const PopulationSource& source) {
  if (const auto* path = std::get_if<std::filesystem::path>(&source.source)) return load_population(*path);
  return generate_population(std::get<PopulationSpec>(source.source));
}

}  // namespace fpclab
