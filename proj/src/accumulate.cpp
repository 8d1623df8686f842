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

#include "fpclab/accumulate.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <vector>

#include "fpclab/error.hpp"
#include "fpclab/rng.hpp"
#include "parallel.hpp"

namespace fpclab {

namespace {

std::vector<std::string_view> split(std::string_view token, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = token.find(sep, start);
    parts.push_back(token.substr(start, pos - start));
    if (pos == std::string_view::npos) return parts;
    start = pos + 1;
  }
}

template <class Int>
Int parse_integer(std::string_view text, std::string_view what) {
  Int value{};
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size())
    throw ParameterError("invalid " + std::string(what) + ": '" + std::string(text) + "'");
  return value;
}

template <class T>
T naive_range(std::span<const double> values) {
  T sum = 0;
  for (double v : values) sum += static_cast<T>(v);
  return sum;
}

template <class T>
T pairwise_range(std::span<const double> values) {
  if (values.size() <= kPairwiseBaseCase) return naive_range<T>(values);
  const std::size_t half = values.size() / 2;
  const T left = pairwise_range<T>(values.first(half));
  const T right = pairwise_range<T>(values.subspan(half));
  return left + right;
}

template <class T>
T tree_combine(std::span<const T> partials) {
  if (partials.size() == 1) return partials[0];
  const std::size_t half = partials.size() / 2;
  const T left = tree_combine<T>(partials.first(half));
  const T right = tree_combine<T>(partials.subspan(half));
  return left + right;
}

std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Xoshiro256ss rng(seed);
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.bounded(i)]);
  return order;
}

template <class T>
T sum_as(std::span<const double> values, const AccumulationStrategy::Variant& v) {
  using namespace strategy;
  if (std::holds_alternative<NaiveSerial>(v)) return naive_range<T>(values);
  if (std::holds_alternative<Compensated>(v)) {
    KahanAccumulator<T> acc;
    for (double x : values) acc.add(static_cast<T>(x));
    return acc.sum();
  }
  if (std::holds_alternative<PairwiseTree>(v)) return pairwise_range<T>(values);
  if (const auto* r = std::get_if<RandomizedOrder>(&v)) {
    T sum = 0;
    for (std::size_t i : seeded_permutation(values.size(), r->order_seed))
      sum += static_cast<T>(values[i]);
    return sum;
  }
  const auto& b = std::get<BlockedParallel>(v);
  std::vector<T> partials;
  partials.reserve((values.size() + b.block_size - 1) / b.block_size);
  for (std::size_t start = 0; start < values.size(); start += b.block_size)
    partials.push_back(naive_range<T>(values.subspan(start, std::min(b.block_size, values.size() - start))));
  if (b.combine == Combine::tree) return tree_combine<T>(partials);
  T sum = 0;
  for (T p : partials) sum += p;
  return sum;
}

void require_nonempty(std::span<const double> values) {
  if (values.empty()) throw ParameterError("cannot reduce an empty sequence");
}

// Second-order compensated sum (Klein's iterative Kahan-Babuska).
double second_order_sum(std::span<const double> values) {
  double s = 0.0, cs = 0.0, ccs = 0.0;
  for (double x : values) {
    double t = s + x;
    const double c = std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
    s = t;
    t = cs + c;
    const double cc = std::abs(cs) >= std::abs(c) ? (cs - t) + c : (c - t) + cs;
    cs = t;
    ccs += cc;
  }
  return s + (cs + ccs);
}

}  // namespace

std::string_view to_string(Precision precision) {
  return precision == Precision::fp64 ? "fp64" : "fp32";
}

Precision parse_precision(std::string_view token) {
  if (token == "fp64") return Precision::fp64;
  if (token == "fp32") return Precision::fp32;
  throw ParameterError("unknown precision: '" + std::string(token) + "'");
}

AccumulationStrategy::AccumulationStrategy(Variant v) : v_(v) {
  if (const auto* b = std::get_if<strategy::BlockedParallel>(&v_); b && b->block_size == 0)
    throw ParameterError("blocked_parallel block_size must be >= 1");
}

AccumulationStrategy AccumulationStrategy::parse(std::string_view token) {
  const auto parts = split(token, ':');
  const auto name = parts[0];
  auto arity = [&](std::size_t n) {
    if (parts.size() != n) throw ParameterError("malformed strategy token: '" + std::string(token) + "'");
  };
  if (name == "naive_serial" || name == "compensated" || name == "pairwise_tree") {
    arity(1);
    if (name == "naive_serial") return naive_serial();
    if (name == "compensated") return compensated();
    return pairwise_tree();
  }
  if (name == "randomized_order") {
    arity(2);
    return randomized_order(parse_integer<std::uint64_t>(parts[1], "order seed"));
  }
  if (name == "blocked_parallel") {
    if (parts.size() < 2 || parts.size() > 3)
      throw ParameterError("malformed strategy token: '" + std::string(token) + "'");
    const auto block = parse_integer<std::size_t>(parts[1], "block size");
    strategy::Combine combine = strategy::Combine::tree;
    if (parts.size() == 3) {
      if (parts[2] == "serial") combine = strategy::Combine::serial;
      else if (parts[2] != "tree") throw ParameterError("unknown combine order: '" + std::string(parts[2]) + "'");
    }
    return blocked_parallel(block, combine);
  }
  throw ParameterError("unknown accumulation strategy: '" + std::string(token) + "'");
}

std::string AccumulationStrategy::to_string() const {
  using namespace strategy;
  if (std::holds_alternative<NaiveSerial>(v_)) return "naive_serial";
  if (std::holds_alternative<Compensated>(v_)) return "compensated";
  if (std::holds_alternative<PairwiseTree>(v_)) return "pairwise_tree";
  if (const auto* r = std::get_if<RandomizedOrder>(&v_))
    return "randomized_order:" + std::to_string(r->order_seed);
  const auto& b = std::get<BlockedParallel>(v_);
  return "blocked_parallel:" + std::to_string(b.block_size) + ":" +
         (b.combine == Combine::tree ? "tree" : "serial");
}

double reduce_sum(std::span<const double> values, const AccumulationStrategy& strategy,
                  Precision precision) {
  require_nonempty(values);
  if (precision == Precision::fp32) return sum_as<float>(values, strategy.variant());
  return sum_as<double>(values, strategy.variant());
}

double reduce_mean(std::span<const double> values, const AccumulationStrategy& strategy,
                   Precision precision) {
  require_nonempty(values);
  if (precision == Precision::fp32) {
    const float sum = sum_as<float>(values, strategy.variant());
    return sum / static_cast<float>(values.size());
  }
  return sum_as<double>(values, strategy.variant()) / static_cast<double>(values.size());
}

ReferenceMean reference_mean(std::span<const double> values) {
  require_nonempty(values);
  constexpr double kLimit = 9007199254740992.0;  // 2^53
  const bool integral = std::all_of(values.begin(), values.end(), [](double v) {
    return std::isfinite(v) && std::trunc(v) == v && std::abs(v) < kLimit;
  });
  const auto n = static_cast<std::int64_t>(values.size());
  if (!integral) return {second_order_sum(values) / static_cast<double>(n), false};

  __int128 total = 0;
  for (double v : values) total += static_cast<std::int64_t>(v);
  const __int128 limit = static_cast<__int128>(1) << 53;
  if (total <= limit && total >= -limit)
    return {static_cast<double>(static_cast<std::int64_t>(total)) / static_cast<double>(n), true};
  // |mean| < 2^53 so the integer quotient is exact; only the fraction rounds.
  const auto quotient = static_cast<std::int64_t>(total / n);
  const auto remainder = static_cast<std::int64_t>(total % n);
  return {static_cast<double>(quotient) + static_cast<double>(remainder) / static_cast<double>(n), true};
}

ReductionSpread spread_of_reductions(std::span<const double> values,
                                     const AccumulationStrategy& strategy, Precision precision,
                                     std::size_t K, std::uint64_t seed, unsigned workers) {
  require_nonempty(values);
  if (K < 2) throw ParameterError("spread_of_reductions needs K >= 2");
  std::vector<double> means(K);
  detail::parallel_for(K, workers, [&](std::size_t k) {
    std::vector<double> shuffled(values.begin(), values.end());
    Xoshiro256ss rng(derive_seed(seed, k));
    for (std::size_t i = shuffled.size(); i > 1; --i) std::swap(shuffled[i - 1], shuffled[rng.bounded(i)]);
    means[k] = reduce_mean(shuffled, strategy, precision);
  });
  ReductionSpread spread;
  spread.reference = reference_mean(values).mean;
  spread.observed_var = sample_variance(means);
  for (double m : means) spread.max_abs_dev = std::max(spread.max_abs_dev, std::abs(m - spread.reference));
  return spread;
}

double sample_variance(std::span<const double> xs) {
  if (xs.size() < 2) throw ParameterError("sample variance needs at least two values");
  if (std::all_of(xs.begin(), xs.end(), [&](double x) { return x == xs[0]; })) return 0.0;
  KahanAccumulator<double> sum;
  for (double x : xs) sum.add(x);
  const double mean = sum.sum() / static_cast<double>(xs.size());
  KahanAccumulator<double> squares;
  for (double x : xs) squares.add((x - mean) * (x - mean));
  return squares.sum() / static_cast<double>(xs.size() - 1);
}

}  // namespace fpclab
