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
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "doctest.h"
#include "fpclab/error.hpp"
#include "fpclab/rng.hpp"
#include "fpclab/sampling.hpp"
#include "oracles.hpp"

using namespace fpclab;

namespace {

Population small_population(std::vector<double> values) {
  return Population(PopulationSpec{values.size(), NormalParams{}, 0}, std::move(values));
}

std::map<std::uint64_t, std::uint64_t> subset_counts(std::uint64_t N, std::uint64_t n, std::uint64_t draws,
                                                     std::uint64_t base_seed) {
  SrsworSampler sampler(N);
  std::vector<std::uint64_t> idx;
  std::map<std::uint64_t, std::uint64_t> counts;
  for (std::uint64_t r = 0; r < draws; ++r) {
    sampler.draw(n, derive_seed(base_seed, r), idx);
    ++counts[oracle::subset_mask(idx)];
  }
  return counts;
}

}  // namespace

TEST_CASE("n == N returns the whole index set") {
  for (std::uint64_t seed : {0ULL, 1ULL, 99ULL}) {
    auto idx = srswor_indices(5, 5, seed);
    std::sort(idx.begin(), idx.end());
    CHECK(idx == std::vector<std::uint64_t>{0, 1, 2, 3, 4});
  }
}

TEST_CASE("invalid sample sizes") {
  CHECK_THROWS_AS(srswor_indices(3, 4, 1), ParameterError);
  CHECK_THROWS_AS(srswor_indices(3, 0, 1), ParameterError);
}

TEST_CASE("N=4, n=2: the six subsets are equally likely") {
  constexpr std::uint64_t kDraws = 60000;
  const auto counts = subset_counts(4, 2, kDraws, 17);
  CHECK(counts.size() == 6);
  const double stat = oracle::chi_square_uniform(counts, 6, kDraws);
  CHECK(stat < oracle::chi_square_critical(5, 0.001));
}

TEST_CASE("subset uniformity for every N <= 6 and every n") {
  for (unsigned N = 1; N <= 6; ++N) {
    for (unsigned n = 1; n <= N; ++n) {
      CAPTURE(N);
      CAPTURE(n);
      const std::uint64_t cells = oracle::binomial(N, n);
      const std::uint64_t draws = 2000 * cells;
      const auto counts = subset_counts(N, n, draws, 1000 + 10 * N + n);
      if (cells == 1) {
        CHECK(counts.size() == 1);
        continue;
      }
      const double stat = oracle::chi_square_uniform(counts, cells, draws);
      CHECK(stat < oracle::chi_square_critical(static_cast<double>(cells - 1), 0.001));
    }
  }
}

TEST_CASE("inclusion probability is n/N for every unit") {
  constexpr std::uint64_t kN = 6, kDraws = 50000;
  for (std::uint64_t n = 1; n <= kN; ++n) {
    CAPTURE(n);
    SrsworSampler sampler(kN);
    std::vector<std::uint64_t> idx;
    std::vector<std::uint64_t> hits(kN, 0);
    for (std::uint64_t r = 0; r < kDraws; ++r) {
      sampler.draw(n, derive_seed(77 + n, r), idx);
      for (auto i : idx) ++hits[i];
    }
    const double p = static_cast<double>(n) / kN;
    const double se = std::sqrt(p * (1 - p) / kDraws);
    for (auto h : hits) CHECK(std::abs(static_cast<double>(h) / kDraws - p) <= 3 * se + 1e-15);
  }
}

TEST_CASE("draws never repeat an index") {
  for (std::uint64_t N = 1; N <= 9; ++N) {
    SrsworSampler sampler(N);
    std::vector<std::uint64_t> idx;
    for (std::uint64_t n = 1; n <= N; ++n) {
      for (std::uint64_t seed = 0; seed < 200; ++seed) {
        sampler.draw(n, seed, idx);
        REQUIRE(idx.size() == n);
        const std::set<std::uint64_t> unique(idx.begin(), idx.end());
        REQUIRE(unique.size() == n);
        REQUIRE(*unique.rbegin() < N);
      }
    }
  }
}

TEST_CASE("a reused sampler matches a fresh one draw for draw") {
  SrsworSampler reused(1000);
  std::vector<std::uint64_t> idx;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const std::uint64_t n = 1 + (seed * 37) % 1000;
    reused.draw(n, seed, idx);
    CHECK(idx == srswor_indices(1000, n, seed));
  }
}

TEST_CASE("sample size is floor(f * N)") {
  CHECK(sample_size_for(0.01, 100000) == 1000);
  CHECK(sample_size_for(0.29, 100) == 29);
  CHECK(sample_size_for(0.5, 7) == 3);
  CHECK(sample_size_for(1.0, 12345) == 12345);
  CHECK(sample_size_for(0.999, 100) == 99);
  CHECK_THROWS_AS(sample_size_for(0.0, 10), ParameterError);
  CHECK_THROWS_AS(sample_size_for(-0.1, 10), ParameterError);
  CHECK_THROWS_AS(sample_size_for(1.5, 10), ParameterError);
}

TEST_CASE("draw_sample") {
  const auto pop = generate_population({100000, NormalParams{0, 1}, 5});
  const auto d = draw_sample(pop, 0.01, 3);
  CHECK(d.n == 1000);
  CHECK(d.indices.size() == 1000);
  CHECK(d.population_id == pop.checksum());
  CHECK(d == draw_sample(pop, 0.01, 3));
  CHECK_FALSE(d == draw_sample(pop, 0.01, 4));

  const auto full = draw_sample(pop, 1.0, 3);
  std::vector<std::uint64_t> sorted = full.indices;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::uint64_t> all(100000);
  std::iota(all.begin(), all.end(), std::uint64_t{0});
  CHECK(sorted == all);

  CHECK_THROWS_AS(draw_sample(pop, 1e-9, 3), ParameterError);
  CHECK_THROWS_AS(draw_sample(pop, 0.0, 3), ParameterError);
  CHECK_THROWS_AS(draw_sample(pop, 1.0000001, 3), ParameterError);
}

TEST_CASE("gather_values follows draw order and checks provenance") {
  const auto pop = small_population({10, 20, 30});
  SampleDraw d{{2, 0}, 2, 2.0 / 3.0, 0, pop.checksum()};
  CHECK(gather_values(pop, d) == std::vector<double>{30, 10});

  const auto other = small_population({10, 20, 31});
  CHECK_THROWS_AS(gather_values(other, d), ProvenanceError);

  const auto full = draw_sample(pop, 1.0, 8);
  auto values = gather_values(pop, full);
  std::sort(values.begin(), values.end());
  CHECK(values == std::vector<double>{10, 20, 30});
}

TEST_CASE("draw log CSV") {
  const auto path = std::filesystem::temp_directory_path() / "fpclab_test_draws.csv";
  const std::vector<DrawLogRow> rows{{0, 11, 1000, 0.01}, {1, 12, 1000, 0.01}};
  write_draw_log(path, rows);
  std::ifstream in(path);
  std::stringstream text;
  text << in.rdbuf();
  CHECK(text.str() == "replicate,seed,n,f\n0,11,1000,0.01\n1,12,1000,0.01\n");
  std::filesystem::remove(path);
}
