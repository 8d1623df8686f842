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
#include <numeric>

#include "doctest.h"
#include "fpclab/accumulate.hpp"
#include "fpclab/error.hpp"
#include "fpclab/population.hpp"
#include "fpclab/rng.hpp"
#include "oracles.hpp"

using namespace fpclab;

namespace {

std::vector<AccumulationStrategy> all_strategies() {
  return {AccumulationStrategy::naive_serial(), AccumulationStrategy::compensated(),
          AccumulationStrategy::pairwise_tree(), AccumulationStrategy::randomized_order(5),
          AccumulationStrategy::blocked_parallel(3, strategy::Combine::serial),
          AccumulationStrategy::blocked_parallel(3, strategy::Combine::tree)};
}

// Independent pairwise oracle: explicit stack of (begin, end) ranges.
float pairwise_oracle(const std::vector<float>& xs, std::size_t begin, std::size_t end) {
  if (end - begin <= 8) {
    float s = 0;
    for (std::size_t i = begin; i < end; ++i) s += xs[i];
    return s;
  }
  const std::size_t mid = begin + (end - begin) / 2;
  const float a = pairwise_oracle(xs, begin, mid);
  const float b = pairwise_oracle(xs, mid, end);
  return a + b;
}

double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  return xs[xs.size() / 2];
}

}  // namespace

TEST_CASE("binary32 forcing case: 2^24 + 1 + 1") {
  const std::vector<double> xs{16777216.0, 1.0, 1.0};
  CHECK(reduce_sum(xs, AccumulationStrategy::naive_serial(), Precision::fp32) == 16777216.0);
  CHECK(reduce_sum(xs, AccumulationStrategy::compensated(), Precision::fp32) == 16777218.0);
  CHECK(reduce_sum(xs, AccumulationStrategy::naive_serial(), Precision::fp64) == 16777218.0);

  CHECK(reduce_mean(xs, AccumulationStrategy::naive_serial(), Precision::fp32) ==
        static_cast<double>(16777216.0f / 3.0f));
  CHECK(reduce_mean(xs, AccumulationStrategy::compensated(), Precision::fp32) ==
        static_cast<double>(16777218.0f / 3.0f));
}

TEST_CASE("exactly representable sums agree across every strategy and precision") {
  const std::vector<double> ones(10, 1.0);
  std::vector<double> one_to_eight(8);
  std::iota(one_to_eight.begin(), one_to_eight.end(), 1.0);
  for (const auto& s : all_strategies()) {
    CAPTURE(s.to_string());
    for (auto p : {Precision::fp64, Precision::fp32}) CHECK(reduce_sum(ones, s, p) == 10.0);
    CHECK(reduce_sum(one_to_eight, s, Precision::fp64) == 36.0);
  }
}

TEST_CASE("reduce_mean basics") {
  const std::vector<double> four{1, 2, 3, 4};
  CHECK(reduce_mean(four, AccumulationStrategy::naive_serial(), Precision::fp64) == 2.5);
  const std::vector<double> constant(1000, 0.375);
  for (const auto& s : all_strategies()) CHECK(reduce_mean(constant, s, Precision::fp64) == 0.375);
  CHECK_THROWS_AS(reduce_mean({}, AccumulationStrategy::naive_serial(), Precision::fp64), ParameterError);
  CHECK_THROWS_AS(reduce_sum({}, AccumulationStrategy::compensated(), Precision::fp32), ParameterError);
}

TEST_CASE("strategy tokens") {
  for (const auto& s : all_strategies()) CHECK(AccumulationStrategy::parse(s.to_string()) == s);
  CHECK(AccumulationStrategy::parse("blocked_parallel:256").to_string() == "blocked_parallel:256:tree");
  for (const char* bad : {"", "naive", "compensated:1", "randomized_order", "randomized_order:x",
                          "blocked_parallel:0:tree", "blocked_parallel:8:zigzag", "blocked_parallel:-1"})
    CHECK_THROWS_AS(AccumulationStrategy::parse(bad), ParameterError);
  CHECK(parse_precision("fp32") == Precision::fp32);
  CHECK_THROWS_AS(parse_precision("fp16"), ParameterError);
}

TEST_CASE("pairwise_tree follows recursive halving with a base case of 8") {
  Xoshiro256ss rng(31);
  for (std::size_t n : {1u, 7u, 8u, 9u, 17u, 100u, 1023u, 4097u}) {
    std::vector<double> xs(n);
    for (auto& x : xs) x = static_cast<float>(1e4 * rng.uniform01());
    const std::vector<float> fs(xs.begin(), xs.end());
    CHECK(reduce_sum(xs, AccumulationStrategy::pairwise_tree(), Precision::fp32) ==
          static_cast<double>(pairwise_oracle(fs, 0, n)));
  }
}

TEST_CASE("blocked_parallel depends only on order, block size and combine") {
  Xoshiro256ss rng(4);
  std::vector<double> xs(10000);
  for (auto& x : xs) x = 1e6 + rng.normal();
  const auto naive = reduce_sum(xs, AccumulationStrategy::naive_serial(), Precision::fp32);
  CHECK(reduce_sum(xs, AccumulationStrategy::blocked_parallel(xs.size()), Precision::fp32) == naive);
  CHECK(reduce_sum(xs, AccumulationStrategy::blocked_parallel(1, strategy::Combine::serial),
                   Precision::fp32) == naive);

  // Hand-built oracle for block 256 with tree combine.
  std::vector<float> partials;
  for (std::size_t b = 0; b < xs.size(); b += 256) {
    float s = 0;
    for (std::size_t i = b; i < std::min(xs.size(), b + 256); ++i) s += static_cast<float>(xs[i]);
    partials.push_back(s);
  }
  std::vector<double> as_double(partials.begin(), partials.end());
  const std::vector<float> pf(partials.begin(), partials.end());
  auto tree = [&](auto&& self, std::size_t lo, std::size_t hi) -> float {
    if (hi - lo == 1) return pf[lo];
    const std::size_t mid = lo + (hi - lo) / 2;
    const float a = self(self, lo, mid);
    const float b = self(self, mid, hi);
    return a + b;
  };
  CHECK(reduce_sum(xs, AccumulationStrategy::blocked_parallel(256), Precision::fp32) ==
        static_cast<double>(tree(tree, 0, pf.size())));
  CHECK(reduce_sum(xs, AccumulationStrategy::blocked_parallel(256), Precision::fp32) ==
        reduce_sum(xs, AccumulationStrategy::blocked_parallel(256), Precision::fp32));
}

TEST_CASE("randomized_order is naive summation over a seeded shuffle") {
  Xoshiro256ss rng(12);
  std::vector<double> xs(5000);
  for (auto& x : xs) x = 1e6 + rng.normal();
  const auto a = reduce_sum(xs, AccumulationStrategy::randomized_order(1), Precision::fp32);
  CHECK(a == reduce_sum(xs, AccumulationStrategy::randomized_order(1), Precision::fp32));

  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Xoshiro256ss shuffle(1);
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[shuffle.bounded(i)]);
  std::vector<double> permuted;
  for (auto i : order) permuted.push_back(xs[i]);
  CHECK(a == reduce_sum(permuted, AccumulationStrategy::naive_serial(), Precision::fp32));
}

TEST_CASE("property: integer inputs below 2^53 give identical exact sums in fp64") {
  Xoshiro256ss rng(2718);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.bounded(2000);
    std::vector<double> xs(n);
    std::int64_t exact = 0;
    for (auto& x : xs) {
      const auto v = static_cast<std::int64_t>(rng.bounded(1u << 21)) - (1 << 20);
      x = static_cast<double>(v);
      exact += v;
    }
    for (const auto& s : all_strategies())
      REQUIRE(reduce_sum(xs, s, Precision::fp64) == static_cast<double>(exact));
  }
}

TEST_CASE("compensated fp64 is order-insensitive on well-scaled data") {
  Xoshiro256ss rng(99);
  std::vector<double> xs(100000);
  for (auto& x : xs) x = 100.0 * rng.uniform01();
  double lo = INFINITY, hi = -INFINITY;
  for (int k = 0; k < 100; ++k) {
    Xoshiro256ss shuffle(derive_seed(5, k));
    for (std::size_t i = xs.size(); i > 1; --i) std::swap(xs[i - 1], xs[shuffle.bounded(i)]);
    const double m = reduce_mean(xs, AccumulationStrategy::compensated(), Precision::fp64);
    lo = std::min(lo, m);
    hi = std::max(hi, m);
  }
  CHECK(hi - lo <= 1e-12);
}

TEST_CASE("error ordering on ill-conditioned data") {
  std::vector<double> e32, e64, ecomp;
  for (std::uint64_t seed = 1; seed <= 21; ++seed) {
    const auto pop = generate_population({100000, IllConditionedParams{1e6, 1.0}, seed});
    const auto xs = pop.values();
    const double ref = static_cast<double>(oracle::long_double_mean(xs));
    e32.push_back(std::abs(reduce_mean(xs, AccumulationStrategy::naive_serial(), Precision::fp32) - ref));
    e64.push_back(std::abs(reduce_mean(xs, AccumulationStrategy::naive_serial(), Precision::fp64) - ref));
    ecomp.push_back(std::abs(reduce_mean(xs, AccumulationStrategy::compensated(), Precision::fp64) - ref));
  }
  const double m32 = median(e32), m64 = median(e64), mc = median(ecomp);
  MESSAGE("median |error|: fp32 naive " << m32 << ", fp64 naive " << m64 << ", fp64 compensated " << mc);
  CHECK(m32 > 1e3 * m64);
  CHECK(m64 > 1e3 * mc);
}

TEST_CASE("fp32 pairwise beats fp32 naive on uniform data") {
  int wins = 0;
  std::vector<double> xs(1000000);
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    Xoshiro256ss rng(derive_seed(404, trial));
    for (auto& x : xs) x = rng.uniform01();
    long double exact = 0;
    for (double x : xs) exact += x;
    const double pairwise = reduce_sum(xs, AccumulationStrategy::pairwise_tree(), Precision::fp32);
    const double naive = reduce_sum(xs, AccumulationStrategy::naive_serial(), Precision::fp32);
    if (std::abs(pairwise - exact) < std::abs(naive - exact)) ++wins;
  }
  CHECK(wins >= 95);
}

TEST_CASE("reference_mean") {
  const std::vector<double> ints{3, 5, 8, -2, 11};
  const auto r = reference_mean(ints);
  CHECK(r.exact);
  CHECK(r.mean == 25.0 / 5.0);

  // Sum beyond 2^53 still gives the exact rational mean.
  const std::vector<double> big(4, 9007199254740990.0);
  CHECK(reference_mean(big).mean == 9007199254740990.0);
  CHECK(reference_mean(big).exact);

  Xoshiro256ss rng(3);
  std::vector<double> xs(100000);
  for (auto& x : xs) x = 1e6 + rng.normal();
  const auto approx = reference_mean(xs);
  CHECK_FALSE(approx.exact);
  CHECK(std::abs(approx.mean - static_cast<double>(oracle::long_double_mean(xs))) <= 2.4e-10);
}

TEST_CASE("spread_of_reductions") {
  const std::vector<double> constant(5000, 12.5);
  for (const auto& s : all_strategies())
    for (auto p : {Precision::fp64, Precision::fp32})
      CHECK(spread_of_reductions(constant, s, p, 10, 1).observed_var == 0.0);

  const auto ill = generate_population({100000, IllConditionedParams{1e6, 1.0}, 9});
  const auto fp32 = spread_of_reductions(ill.values(), AccumulationStrategy::naive_serial(), Precision::fp32, 100, 3);
  const auto fp64 = spread_of_reductions(ill.values(), AccumulationStrategy::naive_serial(), Precision::fp64, 100, 3);
  CHECK(fp32.observed_var > fp64.observed_var);
  CHECK(fp32.reference == fp64.reference);

  const auto ints = generate_population({50000, DiscreteUniformParams{-1000, 1000}, 2});
  const auto exact = spread_of_reductions(ints.values(), AccumulationStrategy::compensated(), Precision::fp64, 20, 3);
  CHECK(exact.max_abs_dev == 0.0);
  CHECK(exact.observed_var == 0.0);

  CHECK_THROWS_AS(spread_of_reductions(constant, AccumulationStrategy::compensated(), Precision::fp64, 1, 1),
                  ParameterError);
}

TEST_CASE("spread_of_reductions does not depend on worker count") {
  const auto ill = generate_population({20000, IllConditionedParams{1e6, 1.0}, 9});
  const auto one = spread_of_reductions(ill.values(), AccumulationStrategy::naive_serial(), Precision::fp32, 16, 3, 1);
  const auto four = spread_of_reductions(ill.values(), AccumulationStrategy::naive_serial(), Precision::fp32, 16, 3, 4);
  CHECK(one.observed_var == four.observed_var);
  CHECK(one.max_abs_dev == four.max_abs_dev);
}

TEST_CASE("sample_variance") {
  const std::vector<double> xs{1, 2, 3, 4};
  CHECK(sample_variance(xs) == 5.0 / 3.0);
  const std::vector<double> same(7, 0.1);
  CHECK(sample_variance(same) == 0.0);
  const std::vector<double> one{1.0};
  CHECK_THROWS_AS(sample_variance(one), ParameterError);
}
