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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fpclab/experiments.hpp"
#include "fpclab/population.hpp"
#include "fpclab/theory.hpp"

namespace fpclab {

inline constexpr std::string_view kVersion = "1.0.0";

struct PopulationSource {
  // Either a spec to generate or the path of a saved population file.
  std::variant<PopulationSpec, std::filesystem::path> source = preset_spec("pop_a", 100000, 1);
  std::string name = "pop_a";  // preset name, "custom", or the file stem
};

struct ExperimentConfig {
  PopulationSource population;
  std::vector<double> f_grid{0.01, 0.5, 0.9, 0.99, 1.0};
  std::uint64_t R = 2000;
  std::uint64_t K = 100;
  std::vector<Pathway> strategies{
      {AccumulationStrategy::compensated(), Precision::fp64},
      {AccumulationStrategy::naive_serial(), Precision::fp64},
      {AccumulationStrategy::naive_serial(), Precision::fp32},
      {AccumulationStrategy::pairwise_tree(), Precision::fp32},
      {AccumulationStrategy::blocked_parallel(256, strategy::Combine::tree), Precision::fp32},
  };
  Pathway sweep_pathway{AccumulationStrategy::compensated(), Precision::fp64};
  std::uint64_t base_seed = 20260101;
  std::filesystem::path output_dir = "fpclab_out";
  RegimeThresholds thresholds;
  bool dump_draws = false;

  // Not part of the serialized config: changes speed, never results.
  unsigned workers = 1;

  void validate() const;
};

/// Strict parse: unknown keys anywhere are a ValidationError.
ExperimentConfig parse_config_json(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string config_to_json(const ExperimentConfig& config);

Population materialize_population(const PopulationSource& source);

struct Table1Row {
  std::string population;
  std::uint64_t N = 0;
  double mean = 0.0;
  double var_pop = 0.0;
  std::optional<double> var_srs;
  PopulationKind kind = PopulationKind::discrete_uniform;
};

struct RegimeEntry {
  double f = 0.0;
  RegimeLabel label = RegimeLabel::classical;
};

struct DistributionRecord {
  double f = 0.0;
  std::uint64_t n = 0;
  double mean_of_means = 0.0;
  std::vector<double> means;
};

struct Report {
  std::string version{kVersion};
  ExperimentConfig config;
  std::uint32_t population_checksum = 0;
  double mean_mu = 0.0;
  std::vector<Table1Row> table1;
  std::vector<VarianceRow> table2;
  std::vector<NumericalRow> table3;
  std::vector<RegimeEntry> regimes;
  std::optional<double> numerical_floor;  // of config.sweep_pathway
  std::vector<Phase2Result> deviations;   // one seeded draw per f
  std::vector<DistributionRecord> distributions;
};

enum class RunPhases { all, sweep, numerical };

/// Runs phases 1-4 (or the subset) in order. Errors are rethrown as
/// PhaseError tagged with the failing phase.
Report run_all(const ExperimentConfig& config, RunPhases phases = RunPhases::all);

std::string table1_csv(const Report& report);
std::string table2_csv(const Report& report);
std::string table3_csv(const Report& report);
std::vector<VarianceRow> parse_table2_csv(std::string_view text);

std::string report_to_json(const Report& report);
Report parse_report_json(std::string_view text);
Report load_report(const std::filesystem::path& path);

/// table1.csv, table2.csv, table3.csv.
void render_csv(const Report& report, const std::filesystem::path& output_dir);
/// JSON mirror of each table plus report.json with everything.
void render_json(const Report& report, const std::filesystem::path& output_dir);
/// variance_vs_f.svg, deviation_vs_f.svg and histogram_f<f>.svg per f.
void render_plots(const Report& report, const std::filesystem::path& output_dir);

/// Invariant checks on a sweep report. Returns one message per violation.
std::vector<std::string> check_report(const Report& report);

}  // namespace fpclab
