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

#include "fpclab/population.hpp"

#include <zlib.h>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>

#include "fpclab/accumulate.hpp"
#include "fpclab/error.hpp"
#include "fpclab/rng.hpp"

namespace fpclab {

namespace {

constexpr std::array<char, 4> kMagic{'F', 'P', 'O', 'P'};
constexpr std::uint16_t kFormatVersion = 1;
constexpr std::size_t kFooterBytes = 3 * 8;
constexpr double kMaxExactInteger = 9007199254740992.0;  // 2^53

template <class... Fs>
struct Visitor : Fs... {
  using Fs::operator()...;
};

class ByteWriter {
 public:
  void u8(std::uint8_t v) { bytes_.push_back(v); }
  void u16(std::uint16_t v) { put(v, 2); }
  void u32(std::uint32_t v) { put(v, 4); }
  void u64(std::uint64_t v) { put(v, 8); }
  void f64(double v) { put(std::bit_cast<std::uint64_t>(v), 8); }
  void raw(std::span<const char> chars) {
    for (char c : chars) bytes_.push_back(static_cast<std::uint8_t>(c));
  }
  const std::vector<std::uint8_t>& bytes() const { return bytes_; }

 private:
  void put(std::uint64_t v, int width) {
    for (int i = 0; i < width; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  std::vector<std::uint8_t> bytes_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t remaining() const { return bytes_.size() - pos_; }
  std::uint8_t u8() { return static_cast<std::uint8_t>(take(1)); }
  std::uint16_t u16() { return static_cast<std::uint16_t>(take(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(take(4)); }
  std::uint64_t u64() { return take(8); }
  double f64() { return std::bit_cast<double>(take(8)); }

 private:
  std::uint64_t take(int width) {
    if (remaining() < static_cast<std::size_t>(width))
      throw CorruptFileError("population file is truncated");
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) v |= static_cast<std::uint64_t>(bytes_[pos_ + i]) << (8 * i);
    pos_ += width;
    return v;
  }
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

void require(bool ok, const std::string& message) {
  if (!ok) throw ParameterError(message);
}

std::vector<double> generate_values(const PopulationSpec& spec) {
  const std::uint64_t n = spec.size_N;
  std::vector<double> values(n);
  Xoshiro256ss rng(spec.seed);
  std::visit(
      Visitor{[&](const DiscreteUniformParams& p) {
                const auto support = static_cast<std::uint64_t>(p.hi - p.lo) + 1;
                for (std::uint64_t i = 0; i < n; ++i)
                  values[i] = static_cast<double>(p.lo + static_cast<std::int64_t>(i % support));
                for (std::uint64_t i = n; i > 1; --i) std::swap(values[i - 1], values[rng.bounded(i)]);
              },
              [&](const NormalParams& p) {
                for (auto& v : values) v = p.mu + p.sigma * rng.normal();
              },
              [&](const StudentTParams& p) {
                for (auto& v : values) v = p.location + p.scale * rng.student_t(p.df);
              },
              [&](const SyntheticEmpiricalParams& p) {
                double total = 0.0;
                for (const auto& c : p.components) total += c.weight;
                std::vector<double> cumulative;
                double running = 0.0;
                for (const auto& c : p.components) cumulative.push_back(running += c.weight / total);
                cumulative.back() = 1.0;
                for (auto& v : values) {
                  const double u = rng.uniform01();
                  const auto pick = static_cast<std::size_t>(
                      std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
                  const auto& c = p.components[std::min(pick, p.components.size() - 1)];
                  v = std::clamp(c.mu + c.sigma * rng.normal(), p.clamp_lo, p.clamp_hi);
                }
              },
              [&](const IllConditionedParams& p) {
                for (auto& v : values) v = p.offset + p.noise_sigma * rng.normal();
              }},
      spec.params);
  return values;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open population file: " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed: " + path.string());
  return bytes;
}

}  // namespace

std::string_view to_string(PopulationKind kind) {
  switch (kind) {
    case PopulationKind::discrete_uniform: return "discrete_uniform";
    case PopulationKind::normal: return "normal";
    case PopulationKind::student_t: return "student_t";
    case PopulationKind::synthetic_empirical: return "synthetic_empirical";
    case PopulationKind::ill_conditioned: return "ill_conditioned";
  }
  return "unknown";
}

PopulationKind parse_population_kind(std::string_view token) {
  for (int k = 0; k <= 4; ++k) {
    const auto kind = static_cast<PopulationKind>(k);
    if (token == to_string(kind)) return kind;
  }
  throw ParameterError("unknown population kind: " + std::string(token));
}

void PopulationSpec::validate() const {
  require(size_N >= 1, "population size N must be >= 1");
  std::visit(
      Visitor{[](const DiscreteUniformParams& p) {
                require(p.lo <= p.hi, "discrete_uniform requires lo <= hi");
                require(std::abs(static_cast<double>(p.lo)) < kMaxExactInteger &&
                            std::abs(static_cast<double>(p.hi)) < kMaxExactInteger,
                        "discrete_uniform bounds must be exactly representable");
              },
              [](const NormalParams& p) {
                require(std::isfinite(p.mu) && std::isfinite(p.sigma), "normal params must be finite");
                require(p.sigma >= 0.0, "normal requires sigma >= 0");
              },
              [](const StudentTParams& p) {
                require(std::isfinite(p.df) && p.df > 0.0, "student_t requires df > 0");
                require(std::isfinite(p.location) && std::isfinite(p.scale) && p.scale >= 0.0,
                        "student_t requires finite location and scale >= 0");
              },
              [](const SyntheticEmpiricalParams& p) {
                require(!p.components.empty(), "synthetic_empirical needs at least one component");
                double total = 0.0;
                for (const auto& c : p.components) {
                  require(std::isfinite(c.weight) && c.weight >= 0.0, "mixture weights must be >= 0");
                  require(std::isfinite(c.mu) && std::isfinite(c.sigma) && c.sigma >= 0.0,
                          "mixture components need finite mu and sigma >= 0");
                  total += c.weight;
                }
                require(total > 0.0, "mixture weights must not all be zero");
                require(p.clamp_lo <= p.clamp_hi, "synthetic_empirical requires clamp_lo <= clamp_hi");
              },
              [](const IllConditionedParams& p) {
                require(std::isfinite(p.offset) && std::isfinite(p.noise_sigma),
                        "ill_conditioned params must be finite");
                require(p.noise_sigma >= 0.0, "ill_conditioned requires noise_sigma >= 0");
              }},
      params);
}

std::vector<double> PopulationSpec::params_as_doubles() const {
  return std::visit(
      Visitor{[](const DiscreteUniformParams& p) {
                return std::vector<double>{static_cast<double>(p.lo), static_cast<double>(p.hi)};
              },
              [](const NormalParams& p) { return std::vector<double>{p.mu, p.sigma}; },
              [](const StudentTParams& p) { return std::vector<double>{p.df, p.location, p.scale}; },
              [](const SyntheticEmpiricalParams& p) {
                std::vector<double> flat{p.clamp_lo, p.clamp_hi};
                for (const auto& c : p.components) flat.insert(flat.end(), {c.weight, c.mu, c.sigma});
                return flat;
              },
              [](const IllConditionedParams& p) {
                return std::vector<double>{p.offset, p.noise_sigma};
              }},
      params);
}

PopulationParams PopulationSpec::params_from_doubles(PopulationKind kind,
                                                     std::span<const double> flat) {
  auto need = [&](std::size_t count) {
    if (flat.size() != count) throw FormatError("wrong parameter count for population kind");
  };
  switch (kind) {
    case PopulationKind::discrete_uniform:
      need(2);
      return DiscreteUniformParams{static_cast<std::int64_t>(flat[0]),
                                   static_cast<std::int64_t>(flat[1])};
    case PopulationKind::normal:
      need(2);
      return NormalParams{flat[0], flat[1]};
    case PopulationKind::student_t:
      need(3);
      return StudentTParams{flat[0], flat[1], flat[2]};
    case PopulationKind::synthetic_empirical: {
      if (flat.size() < 2 || (flat.size() - 2) % 3 != 0)
        throw FormatError("malformed synthetic_empirical parameters");
      SyntheticEmpiricalParams p{{}, flat[0], flat[1]};
      for (std::size_t i = 2; i < flat.size(); i += 3)
        p.components.push_back({flat[i], flat[i + 1], flat[i + 2]});
      return p;
    }
    case PopulationKind::ill_conditioned:
      need(2);
      return IllConditionedParams{flat[0], flat[1]};
  }
  throw FormatError("unknown population kind tag");
}

PopulationSpec preset_spec(std::string_view name, std::uint64_t size_N, std::uint64_t seed) {
  PopulationSpec spec{size_N, {}, seed};
  if (name == "pop_a") {
    spec.params = DiscreteUniformParams{42, 58};
  } else if (name == "pop_b") {
    spec.params = SyntheticEmpiricalParams{};
  } else if (name == "ill_conditioned") {
    spec.params = IllConditionedParams{};
  } else if (name == "student_t") {
    spec.params = StudentTParams{3.0, 50.0, 5.0};
  } else {
    throw ParameterError("unknown population preset: " + std::string(name));
  }
  return spec;
}

double Truth::require_var_srs() const {
  if (!var_srs) throw ParameterError("S^2 is undefined for a population of size 1");
  return *var_srs;
}

Truth enumerate_truth(std::span<const double> values) {
  if (values.empty()) throw ParameterError("cannot enumerate truth of an empty population");
  const std::uint64_t n = values.size();
  Truth truth;
  truth.size_N = n;
  if (std::all_of(values.begin(), values.end(), [&](double v) { return v == values[0]; })) {
    truth.mean_mu = values[0];
    truth.var_pop = 0.0;
    if (n >= 2) truth.var_srs = 0.0;
    return truth;
  }
  KahanAccumulator<double> sum;
  for (double v : values) sum.add(v);
  const double mean = sum.sum() / static_cast<double>(n);
  KahanAccumulator<double> squares;
  for (double v : values) {
    const double d = v - mean;
    squares.add(d * d);
  }
  truth.mean_mu = mean;
  truth.var_pop = squares.sum() / static_cast<double>(n);
  if (n >= 2) truth.var_srs = squares.sum() / static_cast<double>(n - 1);
  return truth;
}

std::uint32_t payload_crc32(std::span<const double> values) {
  uLong crc = crc32(0L, Z_NULL, 0);
  constexpr std::size_t kChunk = 1 << 16;
  for (std::size_t start = 0; start < values.size(); start += kChunk) {
    ByteWriter chunk;
    const std::size_t end = std::min(values.size(), start + kChunk);
    for (std::size_t i = start; i < end; ++i) chunk.f64(values[i]);
    crc = crc32(crc, chunk.bytes().data(), static_cast<uInt>(chunk.bytes().size()));
  }
  return static_cast<std::uint32_t>(crc);
}

Population::Population(PopulationSpec spec, std::vector<double> values)
    : spec_(std::move(spec)), values_(std::move(values)), truth_(enumerate_truth(values_)),
      checksum_(payload_crc32(values_)) {}

Population::Population(PopulationSpec spec, std::vector<double> values, Truth truth)
    : spec_(std::move(spec)), values_(std::move(values)), truth_(truth),
      checksum_(payload_crc32(values_)) {}

Population generate_population(const PopulationSpec& spec) {
  spec.validate();
  return Population(spec, generate_values(spec));
}

// Layout (all little-endian):
//   header  "FPOP" | version u16 | N u64 | kind u8 | seed u64 | crc32(payload) u32
//   payload N x f64
//   footer  mean, var_pop, var_srs (NaN when N == 1) as f64
//   trailer param count u16 | params f64...
void save_population(const Population& population, const std::filesystem::path& path) {
  const auto& spec = population.spec();
  ByteWriter w;
  w.raw(kMagic);
  w.u16(kFormatVersion);
  w.u64(population.size());
  w.u8(static_cast<std::uint8_t>(spec.kind()));
  w.u64(spec.seed);
  w.u32(population.checksum());
  for (double v : population.values()) w.f64(v);
  const auto& truth = population.truth();
  w.f64(truth.mean_mu);
  w.f64(truth.var_pop);
  w.f64(truth.var_srs.value_or(std::numeric_limits<double>::quiet_NaN()));
  const auto flat = spec.params_as_doubles();
  w.u16(static_cast<std::uint16_t>(flat.size()));
  for (double p : flat) w.f64(p);

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out.write(reinterpret_cast<const char*>(w.bytes().data()),
            static_cast<std::streamsize>(w.bytes().size()));
  if (!out) throw IoError("write failed: " + path.string());
}

Population load_population(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  if (bytes.size() < kMagic.size() || !std::equal(kMagic.begin(), kMagic.end(), bytes.begin()))
    throw FormatError("not a population file (bad magic): " + path.string());
  ByteReader r(std::span<const std::uint8_t>(bytes).subspan(kMagic.size()));
  const std::uint16_t version = r.u16();
  if (version != kFormatVersion)
    throw FormatError("unsupported population file version " + std::to_string(version));
  const std::uint64_t n = r.u64();
  const std::uint8_t kind_tag = r.u8();
  const std::uint64_t seed = r.u64();
  const std::uint32_t stored_crc = r.u32();
  if (kind_tag > static_cast<std::uint8_t>(PopulationKind::ill_conditioned))
    throw FormatError("unknown population kind tag " + std::to_string(kind_tag));
  if (n == 0) throw CorruptFileError("population file declares N = 0");
  if (r.remaining() < kFooterBytes || (r.remaining() - kFooterBytes) / 8 < n)
    throw CorruptFileError("population file is truncated");

  std::vector<double> values(n);
  for (auto& v : values) v = r.f64();
  if (payload_crc32(values) != stored_crc)
    throw CorruptFileError("population payload checksum mismatch");

  Truth truth;
  truth.size_N = n;
  truth.mean_mu = r.f64();
  truth.var_pop = r.f64();
  const double var_srs = r.f64();
  if (!std::isnan(var_srs)) truth.var_srs = var_srs;

  const std::uint16_t param_count = r.u16();
  std::vector<double> flat(param_count);
  for (auto& p : flat) p = r.f64();
  if (r.remaining() != 0) throw CorruptFileError("trailing bytes after population trailer");

  PopulationSpec spec{n, PopulationSpec::params_from_doubles(static_cast<PopulationKind>(kind_tag), flat),
                      seed};
  if (!(enumerate_truth(values) == truth))
    throw CorruptFileError("stored truth does not match the enumerated payload");
  return Population(std::move(spec), std::move(values), truth);
}

}  // namespace fpclab
