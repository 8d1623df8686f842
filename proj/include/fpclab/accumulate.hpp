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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>

namespace fpclab {

enum class Precision { fp64, fp32 };

std::string_view to_string(Precision precision);
Precision parse_precision(std::string_view token);

namespace strategy {

struct NaiveSerial {};
struct Compensated {};
struct PairwiseTree {};
struct RandomizedOrder {
  std::uint64_t order_seed = 0;
};

enum class Combine { serial, tree };

struct BlockedParallel {
  std::size_t block_size = 256;
  Combine combine = Combine::tree;
};

}  // namespace strategy

/// How a sum is ordered and compensated. Tokens (see to_string / parse):
///   naive_serial | compensated | pairwise_tree | randomized_order:<seed>
///   | blocked_parallel:<block_size>:<serial|tree>
class AccumulationStrategy {
 public:
  using Variant = std::variant<strategy::NaiveSerial, strategy::Compensated, strategy::PairwiseTree,
                               strategy::RandomizedOrder, strategy::BlockedParallel>;

  AccumulationStrategy() = default;
  AccumulationStrategy(Variant v);  // NOLINT(google-explicit-constructor)

  static AccumulationStrategy naive_serial() { return {strategy::NaiveSerial{}}; }
  static AccumulationStrategy compensated() { return {strategy::Compensated{}}; }
  static AccumulationStrategy pairwise_tree() { return {strategy::PairwiseTree{}}; }
  static AccumulationStrategy randomized_order(std::uint64_t seed) {
    return {strategy::RandomizedOrder{seed}};
  }
  static AccumulationStrategy blocked_parallel(std::size_t block_size,
                                               strategy::Combine combine = strategy::Combine::tree) {
    return {strategy::BlockedParallel{block_size, combine}};
  }

  static AccumulationStrategy parse(std::string_view token);
  std::string to_string() const;

  const Variant& variant() const noexcept { return v_; }

  bool operator==(const AccumulationStrategy& other) const { return to_string() == other.to_string(); }

 private:
  Variant v_{strategy::NaiveSerial{}};
};

/// Serial sums up to this length inside pairwise_tree.
inline constexpr std::size_t kPairwiseBaseCase = 8;

/// Running Kahan sum. In T = float every operation rounds to binary32.
template <class T>
class KahanAccumulator {
 public:
  void add(T x) noexcept {
    const T y = x - compensation_;
    const T t = sum_ + y;
    compensation_ = (t - sum_) - y;
    sum_ = t;
  }
  T sum() const noexcept { return sum_; }

 private:
  T sum_ = 0;
  T compensation_ = 0;
};

double reduce_sum(std::span<const double> values, const AccumulationStrategy& strategy,
                  Precision precision);

double reduce_mean(std::span<const double> values, const AccumulationStrategy& strategy,
                   Precision precision);

/// High-accuracy mean used as the reference for every numerical error
/// measurement. Integer-valued inputs (|x| < 2^53) are summed exactly in
/// 128-bit integers and the mean is the correctly rounded quotient; all
/// other inputs use second-order (Kahan-Babuska) compensated summation.
struct ReferenceMean {
  double mean = 0.0;
  bool exact = false;  // true when computed from the exact integer sum
};

ReferenceMean reference_mean(std::span<const double> values);

struct ReductionSpread {
  double observed_var = 0.0;  // variance of the K means, divisor K - 1
  double max_abs_dev = 0.0;   // max |mean_k - reference|
  double reference = 0.0;
};

/// Reduces `values` K times, each time after an independent seeded shuffle
/// (shuffle k uses derive_seed(seed, k)), and summarizes the spread.
/// `workers` only changes speed.
ReductionSpread spread_of_reductions(std::span<const double> values,
                                     const AccumulationStrategy& strategy, Precision precision,
                                     std::size_t K, std::uint64_t seed, unsigned workers = 1);

/// Sample variance with divisor n - 1, by compensated two-pass; exactly 0
/// when all entries are equal.
double sample_variance(std::span<const double> xs);

}  // namespace fpclab
