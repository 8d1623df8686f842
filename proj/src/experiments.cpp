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

#include "fpclab/experiments.hpp"

#include <algorithm>

#include "fpclab/error.hpp"
#include "fpclab/rng.hpp"
#include "fpclab/sampling.hpp"
#include "parallel.hpp"

namespace fpclab {

namespace {

void require_valid_f(double f) {
  if (!(f > 0.0) || f > 1.0) throw ParameterError("sampling fraction must lie in (0, 1]");
}

}  // namespace

Phase2Result run_phase2(const Population& population, double f, std::uint64_t seed,
                        const AccumulationStrategy& strategy, Precision precision) {
  require_valid_f(f);
  const auto draw = draw_sample(population, f, seed);
  const auto sample = gather_values(population, draw);
  const double mean = reduce_mean(sample, strategy, precision);
  return {f, draw.n, seed, mean, mean - population.truth().mean_mu};
}

RandomizationDistribution run_randomization(const Population& population, double f, std::uint64_t R,
                                            const AccumulationStrategy& strategy, Precision precision,
                                            std::uint64_t base_seed, unsigned workers) {
  require_valid_f(f);
  if (R < 2) throw ParameterError("randomization distribution needs R >= 2");
  const std::uint64_t n = sample_size_for(f, population.size());
  if (n == 0) throw ParameterError("sampling fraction too small: floor(f * N) = 0");

  RandomizationDistribution dist;
  dist.f = f;
  dist.n = n;
  dist.R = R;
  dist.pathway = {strategy, precision};
  dist.base_seed = base_seed;
  dist.means.resize(R);

  const auto values = population.values();
  // Contiguous replicate chunks so each worker owns one sampler buffer.
  const std::uint64_t chunks = std::min<std::uint64_t>(R, std::max(1u, workers));
  detail::parallel_for(chunks, workers, [&](std::size_t c) {
    const std::uint64_t begin = R * c / chunks;
    const std::uint64_t end = R * (c + 1) / chunks;
    SrsworSampler sampler(population.size());
    std::vector<std::uint64_t> indices;
    std::vector<double> sample(n);
    for (std::uint64_t r = begin; r < end; ++r) {
      sampler.draw(n, derive_seed(base_seed, r), indices);
      for (std::uint64_t i = 0; i < n; ++i) sample[i] = values[indices[i]];
      dist.means[r] = reduce_mean(sample, strategy, precision);
    }
  });

  dist.empirical_var = sample_variance(dist.means);
  KahanAccumulator<double> total;
  for (double m : dist.means) total.add(m);
  dist.mean_of_means = total.sum() / static_cast<double>(R);
  return dist;
}

VarianceRow make_variance_row(const RandomizationDistribution& dist, const Truth& truth) {
  VarianceRow row;
  row.f = dist.f;
  row.n = dist.n;
  row.empirical_var = dist.empirical_var;
  row.fpc_var = fpc_variance(truth.require_var_srs(), dist.n, truth.size_N);
  if (row.fpc_var > 0.0) row.ratio = row.empirical_var / row.fpc_var;
  return row;
}

std::vector<RandomizationDistribution> sweep_distributions(const Population& population,
                                                           std::span<const double> f_grid,
                                                           std::uint64_t R, const Pathway& pathway,
                                                           std::uint64_t base_seed,
                                                           unsigned workers) {
  if (f_grid.empty()) throw ParameterError("f grid must not be empty");
  std::vector<RandomizationDistribution> out;
  out.reserve(f_grid.size());
  for (double f : f_grid)
    out.push_back(run_randomization(population, f, R, pathway.strategy, pathway.precision, base_seed,
                                    workers));
  return out;
}

std::vector<VarianceRow> run_variance_sweep(const Population& population,
                                            std::span<const double> f_grid, std::uint64_t R,
                                            const AccumulationStrategy& strategy, Precision precision,
                                            std::uint64_t base_seed, unsigned workers) {
  const auto dists =
      sweep_distributions(population, f_grid, R, {strategy, precision}, base_seed, workers);
  std::vector<VarianceRow> rows;
  rows.reserve(dists.size());
  for (const auto& d : dists) rows.push_back(make_variance_row(d, population.truth()));
  return rows;
}

std::vector<NumericalRow> run_numerical_study(const Population& population,
                                              std::span<const Pathway> configs, std::uint64_t K,
                                              std::uint64_t base_seed, unsigned workers) {
  if (K < 2) throw ParameterError("numerical study needs K >= 2");
  const auto draw = draw_sample(population, 1.0, base_seed);
  const auto data = gather_values(population, draw);
  std::vector<NumericalRow> rows;
  rows.reserve(configs.size());
  for (const auto& pathway : configs) {
    const auto spread =
        spread_of_reductions(data, pathway.strategy, pathway.precision, K, base_seed, workers);
    rows.push_back({pathway, 1.0, spread.observed_var, spread.max_abs_dev, 0.0});
  }
  return rows;
}

double estimate_numerical_floor(const Population& population, const AccumulationStrategy& strategy,
                                Precision precision, std::uint64_t K, std::uint64_t seed,
                                unsigned workers) {
  const Pathway pathway{strategy, precision};
  return run_numerical_study(population, std::span(&pathway, 1), K, seed, workers)
      .front()
      .observed_var;
}

}  // namespace fpclab
