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

// Test-only oracles. None of these call into the code paths they check.

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace oracle {

/// Exact variance of the sample mean under SRSWOR by listing every size-n
/// subset of `values` (N <= 20). Long double throughout.
inline long double subset_mean_variance(std::span<const double> values, unsigned n) {
  const unsigned N = static_cast<unsigned>(values.size());
  long double mu = 0;
  for (double v : values) mu += v;
  mu /= N;
  long double acc = 0;
  std::uint64_t count = 0;
  for (std::uint32_t mask = 0; mask < (1u << N); ++mask) {
    if (static_cast<unsigned>(std::popcount(mask)) != n) continue;
    long double s = 0;
    for (unsigned i = 0; i < N; ++i)
      if (mask & (1u << i)) s += values[i];
    const long double d = s / n - mu;
    acc += d * d;
    ++count;
  }
  return acc / count;
}

/// Two-pass population variance (divisor N) in long double.
inline long double two_pass_var_pop(std::span<const double> values) {
  long double mean = 0;
  for (double v : values) mean += v;
  mean /= values.size();
  long double ss = 0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return ss / values.size();
}

inline long double long_double_mean(std::span<const double> values) {
  long double s = 0;
  for (double v : values) s += v;
  return s / values.size();
}

/// Upper critical value of chi-square with `df` degrees of freedom at level alpha.
inline double chi_square_critical(double df, double alpha) {
  return boost::math::quantile(boost::math::complement(boost::math::chi_squared(df), alpha));
}

/// Pearson statistic against the uniform distribution over `cells` outcomes.
inline double chi_square_uniform(const std::map<std::uint64_t, std::uint64_t>& counts,
                                 std::uint64_t cells, std::uint64_t trials) {
  const double expected = static_cast<double>(trials) / static_cast<double>(cells);
  double stat = 0;
  std::uint64_t seen = 0;
  for (const auto& [key, count] : counts) {
    const double d = static_cast<double>(count) - expected;
    stat += d * d / expected;
    ++seen;
  }
  stat += static_cast<double>(cells - seen) * expected;  // empty cells
  return stat;
}

inline std::uint64_t binomial(unsigned n, unsigned k) {
  std::uint64_t r = 1;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

inline std::uint64_t subset_mask(std::span<const std::uint64_t> indices) {
  std::uint64_t mask = 0;
  for (auto i : indices) mask |= std::uint64_t{1} << i;
  return mask;
}

}  // namespace oracle
