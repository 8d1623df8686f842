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

#include "fpclab/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <string>

#include "fpclab/error.hpp"
#include "fpclab/rng.hpp"
#include "format.hpp"

namespace fpclab {

std::uint64_t sample_size_for(double f, std::uint64_t N) {
  if (!(f > 0.0) || f > 1.0) throw ParameterError("sampling fraction must lie in (0, 1]");
  const double product = f * static_cast<double>(N);
  const double nearest = std::round(product);
  const double n = std::abs(product - nearest) <= 1e-9 * std::max(1.0, product) ? nearest
                                                                                 : std::floor(product);
  return static_cast<std::uint64_t>(std::min(n, static_cast<double>(N)));
}

SrsworSampler::SrsworSampler(std::uint64_t N) : slots_(N) {
  std::iota(slots_.begin(), slots_.end(), std::uint64_t{0});
}

void SrsworSampler::draw(std::uint64_t n, std::uint64_t seed, std::vector<std::uint64_t>& out) {
  const std::uint64_t N = slots_.size();
  if (n == 0 || n > N)
    throw ParameterError("sample size must satisfy 1 <= n <= N (n = " + std::to_string(n) +
                         ", N = " + std::to_string(N) + ")");
  Xoshiro256ss rng(seed);
  swapped_with_.resize(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const std::uint64_t j = i + rng.bounded(N - i);
    std::swap(slots_[i], slots_[j]);
    swapped_with_[i] = j;
  }
  out.assign(slots_.begin(), slots_.begin() + static_cast<std::ptrdiff_t>(n));
  for (std::uint64_t i = n; i-- > 0;) std::swap(slots_[i], slots_[swapped_with_[i]]);
}

std::vector<std::uint64_t> srswor_indices(std::uint64_t N, std::uint64_t n, std::uint64_t seed) {
  if (n == 0 || n > N) throw ParameterError("sample size must satisfy 1 <= n <= N");
  SrsworSampler sampler(N);
  std::vector<std::uint64_t> out;
  sampler.draw(n, seed, out);
  return out;
}

SampleDraw draw_sample(const Population& population, double f, std::uint64_t seed) {
  const std::uint64_t n = sample_size_for(f, population.size());
  if (n == 0) throw ParameterError("sampling fraction too small: floor(f * N) = 0");
  return SampleDraw{srswor_indices(population.size(), n, seed), n, f, seed, population.checksum()};
}

std::vector<double> gather_values(const Population& population, const SampleDraw& draw) {
  if (draw.population_id != population.checksum())
    throw ProvenanceError("sample was drawn from a different population");
  const auto values = population.values();
  std::vector<double> out;
  out.reserve(draw.indices.size());
  for (std::uint64_t i : draw.indices) {
    if (i >= values.size()) throw ProvenanceError("sample index out of range for population");
    out.push_back(values[i]);
  }
  return out;
}

void write_draw_log(const std::filesystem::path& path, std::span<const DrawLogRow> rows) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << "replicate,seed,n,f\n";
  for (const auto& row : rows)
    out << row.replicate << ',' << row.seed << ',' << row.n << ',' << detail::shortest(row.f) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace fpclab
