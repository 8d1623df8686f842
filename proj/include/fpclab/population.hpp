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
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace fpclab {

enum class PopulationKind : std::uint8_t {
  discrete_uniform = 0,
  normal = 1,
  student_t = 2,
  synthetic_empirical = 3,
  ill_conditioned = 4,
};

std::string_view to_string(PopulationKind kind);
PopulationKind parse_population_kind(std::string_view token);

// Every integer in [lo, hi] appears once per cycle; the cycled sequence is
// then shuffled with the population seed.
struct DiscreteUniformParams {
  std::int64_t lo = 42;
  std::int64_t hi = 58;
};

struct NormalParams {
  double mu = 0.0;
  double sigma = 1.0;
};

struct StudentTParams {
  double df = 3.0;
  double location = 0.0;
  double scale = 1.0;
};

struct MixtureComponent {
  double weight = 1.0;
  double mu = 0.0;
  double sigma = 1.0;
};

struct SyntheticEmpiricalParams {
  std::vector<MixtureComponent> components{{0.9, 50.0, 5.0}, {0.1, 49.8, 3.0}};
  double clamp_lo = 0.0;
  double clamp_hi = 100.0;
};

struct IllConditionedParams {
  double offset = 1.0e6;
  double noise_sigma = 1.0;
};

using PopulationParams = std::variant<DiscreteUniformParams, NormalParams, StudentTParams,
                                      SyntheticEmpiricalParams, IllConditionedParams>;

struct PopulationSpec {
  std::uint64_t size_N = 0;
  PopulationParams params;
  std::uint64_t seed = 0;

  PopulationKind kind() const noexcept { return static_cast<PopulationKind>(params.index()); }
  void validate() const;

  // Flat encoding used by the population file trailer.
  std::vector<double> params_as_doubles() const;
  static PopulationParams params_from_doubles(PopulationKind kind, std::span<const double> flat);

  bool operator==(const PopulationSpec&) const = default;
};

inline bool operator==(const MixtureComponent& a, const MixtureComponent& b) {
  return a.weight == b.weight && a.mu == b.mu && a.sigma == b.sigma;
}
inline bool operator==(const DiscreteUniformParams& a, const DiscreteUniformParams& b) {
  return a.lo == b.lo && a.hi == b.hi;
}
inline bool operator==(const NormalParams& a, const NormalParams& b) {
  return a.mu == b.mu && a.sigma == b.sigma;
}
inline bool operator==(const StudentTParams& a, const StudentTParams& b) {
  return a.df == b.df && a.location == b.location && a.scale == b.scale;
}
inline bool operator==(const SyntheticEmpiricalParams& a, const SyntheticEmpiricalParams& b) {
  return a.components == b.components && a.clamp_lo == b.clamp_lo && a.clamp_hi == b.clamp_hi;
}
inline bool operator==(const IllConditionedParams& a, const IllConditionedParams& b) {
  return a.offset == b.offset && a.noise_sigma == b.noise_sigma;
}

/// Named presets: "pop_a" (discrete uniform 42..58), "pop_b" (normal mixture
/// clamped to [0, 100]), "ill_conditioned" (offset 1e6, unit noise),
/// "student_t" (df 3, location 50, scale 5).
PopulationSpec preset_spec(std::string_view name, std::uint64_t size_N, std::uint64_t seed);

struct Truth {
  double mean_mu = 0.0;
  double var_pop = 0.0;
  std::optional<double> var_srs;  // absent when N == 1
  std::uint64_t size_N = 0;

  /// S^2; throws ParameterError when N == 1.
  double require_var_srs() const;

  bool operator==(const Truth&) const = default;
};

/// Mean and both variances of `values` from a full compensated binary64 pass.
Truth enumerate_truth(std::span<const double> values);

class Population {
 public:
  Population(PopulationSpec spec, std::vector<double> values);

  const PopulationSpec& spec() const noexcept { return spec_; }
  const Truth& truth() const noexcept { return truth_; }
  std::span<const double> values() const noexcept { return values_; }
  std::uint64_t size() const noexcept { return values_.size(); }
  /// CRC-32 of the little-endian value payload; identifies the population in
  /// sample provenance and in the population file header.
  std::uint32_t checksum() const noexcept { return checksum_; }

  bool operator==(const Population& other) const {
    return spec_ == other.spec_ && truth_ == other.truth_ && values_ == other.values_;
  }

 private:
  friend Population load_population(const std::filesystem::path& path);
  Population(PopulationSpec spec, std::vector<double> values, Truth truth);

  PopulationSpec spec_;
  std::vector<double> values_;
  Truth truth_;
  std::uint32_t checksum_ = 0;
};

Population generate_population(const PopulationSpec& spec);

std::uint32_t payload_crc32(std::span<const double> values);

void save_population(const Population& population, const std::filesystem::path& path);
Population load_population(const std::filesystem::path& path);

}  // namespace fpclab
