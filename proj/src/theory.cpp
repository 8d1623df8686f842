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

#include "fpclab/theory.hpp"

#include <cmath>
#include <string>

#include "fpclab/error.hpp"

namespace fpclab {

std::string_view to_string(RegimeLabel label) {
  switch (label) {
    case RegimeLabel::classical: return "classical";
    case RegimeLabel::finite_population: return "finite_population";
    case RegimeLabel::near_enumeration: return "near_enumeration";
  }
  return "unknown";
}

RegimeLabel parse_regime(std::string_view token) {
  if (token == "classical") return RegimeLabel::classical;
  if (token == "finite_population") return RegimeLabel::finite_population;
  if (token == "near_enumeration") return RegimeLabel::near_enumeration;
  throw ParameterError("unknown regime label: '" + std::string(token) + "'");
}

void RegimeThresholds::validate() const {
  if (!(classical_max_f > 0.0 && classical_max_f < 1.0))
    throw ValidationError("thresholds.classical_max_f must lie in (0, 1)");
  if (!(floor_margin > 1.0) || !std::isfinite(floor_margin))
    throw ValidationError("thresholds.floor_margin must be a finite value > 1");
}

double fpc_variance(double var_srs, std::uint64_t n, std::uint64_t N) {
  if (n == 0 || n > N) throw ParameterError("fpc_variance requires 1 <= n <= N");
  if (!(var_srs >= 0.0)) throw ParameterError("fpc_variance requires var_srs >= 0");
  // (N - n) is exact, so the factor is exactly zero at n == N.
  const double unsampled = static_cast<double>(N - n);
  return var_srs * unsampled / (static_cast<double>(N) * static_cast<double>(n));
}

double srs_variance_infinite(double var_srs, std::uint64_t n) {
  if (n == 0) throw ParameterError("srs_variance_infinite requires n >= 1");
  if (!(var_srs >= 0.0)) throw ParameterError("srs_variance_infinite requires var_srs >= 0");
  return var_srs / static_cast<double>(n);
}

RegimeLabel classify_regime(double f, double fpc_var, double numerical_floor,
                            const RegimeThresholds& thresholds) {
  if (!(f > 0.0) || f > 1.0) throw ParameterError("classify_regime requires f in (0, 1]");
  if (!(fpc_var >= 0.0)) throw ParameterError("classify_regime requires fpc_var >= 0");
  if (!(numerical_floor >= 0.0)) throw ParameterError("classify_regime requires numerical_floor >= 0");
  if (f == 1.0 || fpc_var <= thresholds.floor_margin * numerical_floor)
    return RegimeLabel::near_enumeration;
  return f <= thresholds.classical_max_f ? RegimeLabel::classical : RegimeLabel::finite_population;
}

}  // namespace fpclab
