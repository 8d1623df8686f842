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
#include <span>
#include <vector>

#include "fpclab/population.hpp"

namespace fpclab {

struct SampleDraw {
  std::vector<std::uint64_t> indices;
  std::uint64_t n = 0;
  double f = 0.0;
  std::uint64_t seed = 0;
  std::uint32_t population_id = 0;

  bool operator==(const SampleDraw&) const = default;
};

/// n = floor(f * N). A product within 1e-9 relative of an integer is taken as
/// that integer, so f = 0.29, N = 100 gives 29 rather than 28.
std::uint64_t sample_size_for(double f, std::uint64_t N);

/// Partial Fisher-Yates sampler over an explicit [0, N) index array. Step i
/// swaps slot i with a uniform slot in [i, N); the first n slots are the
/// sample. The swaps are undone afterwards so the buffer is reused across
/// draws without an O(N) re-initialisation. One sampler per thread.
class SrsworSampler {
 public:
  explicit SrsworSampler(std::uint64_t N);

  std::uint64_t population_size() const noexcept { return slots_.size(); }
  void draw(std::uint64_t n, std::uint64_t seed, std::vector<std::uint64_t>& out);

 private:
  std::vector<std::uint64_t> slots_;
  std::vector<std::uint64_t> swapped_with_;
};

std::vector<std::uint64_t> srswor_indices(std::uint64_t N, std::uint64_t n, std::uint64_t seed);

SampleDraw draw_sample(const Population& population, double f, std::uint64_t seed);

std::vector<double> gather_values(const Population& population, const SampleDraw& draw);

struct DrawLogRow {
  std::uint64_t replicate = 0;
  std::uint64_t seed = 0;
  std::uint64_t n = 0;
  double f = 0.0;
};

/// CSV with header "replicate,seed,n,f".
void write_draw_log(const std::filesystem::path& path, std::span<const DrawLogRow> rows);

}  // namespace fpclab
