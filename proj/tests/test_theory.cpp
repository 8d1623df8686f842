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

#include <cmath>

#include "doctest.h"
#include "fpclab/error.hpp"
#include "fpclab/population.hpp"
#include "fpclab/rng.hpp"
#include "fpclab/theory.hpp"
#include "oracles.hpp"

using namespace fpclab;

TEST_CASE("fpc_variance examples") {
  CHECK(fpc_variance(25.0, 1000, 1000) == 0.0);

  const std::vector<double> four{1, 2, 3, 4};
  const double s2 = enumerate_truth(four).require_var_srs();
  const double v = fpc_variance(s2, 2, 4);
  CHECK(v == doctest::Approx(5.0 / 12.0).epsilon(1e-15));
  // Six subsets {1,2} .. {3,4}: means 1.5 2 2.5 2.5 3 3.5 around 2.5.
  CHECK(std::abs(v - static_cast<double>(oracle::subset_mean_variance(four, 2))) < 1e-15);

  const double sigma2 = enumerate_truth(four).var_pop;
  CHECK(fpc_variance(s2, 1, 4) == doctest::Approx(sigma2).epsilon(1e-15));

  CHECK_THROWS_AS(fpc_variance(1.0, 5, 4), ParameterError);
  CHECK_THROWS_AS(fpc_variance(1.0, 0, 4), ParameterError);
  CHECK_THROWS_AS(fpc_variance(-1.0, 1, 4), ParameterError);
}

TEST_CASE("srs_variance_infinite") {
  CHECK(srs_variance_infinite(25.0, 100000) == doctest::Approx(2.5e-4).epsilon(1e-15));
  CHECK(srs_variance_infinite(0.0, 10) == 0.0);
  CHECK_THROWS_AS(srs_variance_infinite(1.0, 0), ParameterError);
  for (std::uint64_t n : {1u, 10u, 5000u, 9999u}) {
    const double ratio = fpc_variance(3.7, n, 10000) / srs_variance_infinite(3.7, n);
    CHECK(ratio == doctest::Approx(1.0 - n / 10000.0).epsilon(1e-14));
  }
}

TEST_CASE("property: fpc_variance equals brute-force subset variance for N <= 8") {
  Xoshiro256ss rng(8080);
  for (int trial = 0; trial < 20; ++trial) {
    for (unsigned N = 2; N <= 8; ++N) {
      std::vector<double> values(N);
      for (auto& v : values) v = 100.0 * rng.uniform01() - 20.0;
      const double s2 = enumerate_truth(values).require_var_srs();
      for (unsigned n = 1; n <= N; ++n) {
        const double predicted = fpc_variance(s2, n, N);
        const long double brute = oracle::subset_mean_variance(values, n);
        if (n == N) {
          CHECK(predicted == 0.0);
          CHECK(brute < 1e-25L);
        } else {
          CHECK(std::abs((predicted - brute) / brute) < 1e-12L);
        }
      }
    }
  }
}

TEST_CASE("property: fpc_variance strictly decreases in n") {
  for (std::uint64_t N : {2u, 10u, 1000u, 100000u}) {
    double prev = INFINITY;
    for (std::uint64_t n = 1; n <= N; n += std::max<std::uint64_t>(1, N / 500)) {
      const double v = fpc_variance(2.0, n, N);
      CHECK(v < prev);
      CHECK((v > 0.0) == (n < N));
      prev = v;
    }
    CHECK(fpc_variance(2.0, N, N) == 0.0);
    CHECK(fpc_variance(2.0, N - 1, N) > 0.0);
  }
}

TEST_CASE("classify_regime") {
  const RegimeThresholds t;
  CHECK(classify_regime(1.0, 0.0, 0.0, t) == RegimeLabel::near_enumeration);
  CHECK(classify_regime(1.0, 1.0, 0.0, t) == RegimeLabel::near_enumeration);
  CHECK(classify_regime(0.01, 2.5e-4, 1e-20, t) == RegimeLabel::classical);
  CHECK(classify_regime(0.1, 2.5e-4, 1e-20, t) == RegimeLabel::classical);
  CHECK(classify_regime(0.5, 2.5e-6, 1e-20, t) == RegimeLabel::finite_population);
  CHECK(classify_regime(0.5, 1e-19, 1e-20, t) == RegimeLabel::near_enumeration);
  CHECK(classify_regime(0.5, 1e-18, 1e-20, t) == RegimeLabel::finite_population);
  CHECK_THROWS_AS(classify_regime(0.0, 1.0, 0.0, t), ParameterError);
  CHECK_THROWS_AS(classify_regime(1.01, 1.0, 0.0, t), ParameterError);

  CHECK_THROWS_AS((RegimeThresholds{0.0, 10.0}.validate()), ValidationError);
  CHECK_THROWS_AS((RegimeThresholds{0.1, 1.0}.validate()), ValidationError);
  CHECK_NOTHROW(RegimeThresholds{}.validate());
}

TEST_CASE("property: labels never move backwards as f grows") {
  constexpr std::uint64_t N = 100000;
  for (double floor : {0.0, 1e-20, 1e-12, 1e-9, 1e-6}) {
    CAPTURE(floor);
    int prev = -1;
    for (std::uint64_t n = 1; n <= N; n += 97) {
      const double f = static_cast<double>(n) / N;
      const auto label = classify_regime(f, fpc_variance(24.0, n, N), floor);
      CHECK(static_cast<int>(label) >= prev);
      prev = static_cast<int>(label);
    }
    CHECK(classify_regime(1.0, 0.0, floor) == RegimeLabel::near_enumeration);
  }
}
