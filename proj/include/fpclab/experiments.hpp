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
#include <optional>
#include <span>
#include <vector>

#include "fpclab/accumulate.hpp"
#include "fpclab/population.hpp"
#include "fpclab/theory.hpp"

namespace fpclab {

/// A (strategy, precision) pair: one way of computing a mean.
struct Pathway {
  AccumulationStrategy strategy = AccumulationStrategy::compensated();
  Precision precision = Precision::fp64;

  bool operator==(const Pathway&) const = default;
};

struct Phase2Result {
  double f = 0.0;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  double sample_mean = 0.0;
  double deviation_from_mu = 0.0;  // sample_mean - truth.mean_mu
};

Phase2Result run_phase2(const Population& population, double f, std::uint64_t seed,
                        const AccumulationStrategy& strategy, Precision precision);

struct RandomizationDistribution {
  double f = 0.0;
  std::uint64_t n = 0;
  std::uint64_t R = 0;
  std::vector<double> means;  // means[r] comes from seed derive_seed(base_seed, r)
  double empirical_var = 0.0;
  double mean_of_means = 0.0;
  Pathway pathway;
  std::uint64_t base_seed = 0;
};

RandomizationDistribution run_randomization(const Population& population, double f, std::uint64_t R,
                                            const AccumulationStrategy& strategy, Precision precision,
                                            std::uint64_t base_seed, unsigned workers = 1);

struct VarianceRow {
  double f = 0.0;
  std::uint64_t n = 0;
  double empirical_var = 0.0;
  double fpc_var = 0.0;
  std::optional<double> ratio;  // empirical_var / fpc_var, absent when fpc_var == 0

  bool operator==(const VarianceRow&) const = default;
};

VarianceRow make_variance_row(const RandomizationDistribution& dist, const Truth& truth);

/// One randomization distribution per f. Every f uses the same base_seed, so
/// replicate r at a smaller f draws a prefix of replicate r's sample at a
/// larger f (common random numbers across the sweep).
std::vector<RandomizationDistribution> sweep_distributions(const Population& population,
                                                           std::span<const double> f_grid,
                                                           std::uint64_t R, const Pathway& pathway,
                                                           std::uint64_t base_seed,
                                                           unsigned workers = 1);

std::vector<VarianceRow> run_variance_sweep(const Population& population,
                                            std::span<const double> f_grid, std::uint64_t R,
                                            const AccumulationStrategy& strategy, Precision precision,
                                            std::uint64_t base_seed, unsigned workers = 1);

struct NumericalRow {
  Pathway pathway;
  double f = 1.0;
  double observed_var = 0.0;
  double max_abs_dev = 0.0;
  double expected_var = 0.0;
};

/// Full-enumeration study: the f = 1 draw is reduced K times per pathway
/// under seeded order shuffles. All pathways see the same K shuffles.
std::vector<NumericalRow> run_numerical_study(const Population& population,
                                              std::span<const Pathway> configs, std::uint64_t K,
                                              std::uint64_t base_seed, unsigned workers = 1);

double estimate_numerical_floor(const Population& population, const AccumulationStrategy& strategy,
                                Precision precision, std::uint64_t K, std::uint64_t seed,
                                unsigned workers = 1);

}  // namespace fpclab
