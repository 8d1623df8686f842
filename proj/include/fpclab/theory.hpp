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
#include <string_view>

namespace fpclab {

enum class RegimeLabel { classical, finite_population, near_enumeration };

std::string_view to_string(RegimeLabel label);
RegimeLabel parse_regime(std::string_view token);

struct RegimeThresholds {
  double classical_max_f = 0.1;
  double floor_margin = 10.0;

  void validate() const;
};

/// Exact variance of the SRSWOR sample mean: (1 - n/N) * S^2 / n.
double fpc_variance(double var_srs, std::uint64_t n, std::uint64_t N);

/// S^2 / n, the with-replacement / infinite-population approximation.
double srs_variance_infinite(double var_srs, std::uint64_t n);

/// near_enumeration when f == 1 or the predicted sampling variance is within
/// floor_margin of the pathway's numerical floor; otherwise classical up to
/// classical_max_f and finite_population beyond it.
RegimeLabel classify_regime(double f, double fpc_var, double numerical_floor,
                            const RegimeThresholds& thresholds = {});

}  // namespace fpclab
