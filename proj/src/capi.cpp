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

#include "fpclab/fpclab.h"

#include <memory>
#include <string>
#include <vector>

#include "fpclab/accumulate.hpp"
#include "fpclab/error.hpp"
#include "fpclab/population.hpp"
#include "fpclab/report.hpp"
#include "fpclab/theory.hpp"
#include "json.hpp"
#include "json_io.hpp"

struct fpc_population {
  fpclab::Population population;
};

struct fpc_config {
  fpclab::ExperimentConfig config;
  mutable std::string output_dir;
};

struct fpc_report {
  fpclab::Report report;
  std::vector<std::string> precisions;
  std::vector<std::string> strategies;
  std::vector<std::string> regimes;

  explicit fpc_report(fpclab::Report r) : report(std::move(r)) {
    for (const auto& row : report.table3) {
      precisions.emplace_back(fpclab::to_string(row.pathway.precision));
      strategies.push_back(row.pathway.strategy.to_string());
    }
    for (const auto& e : report.regimes) regimes.emplace_back(fpclab::to_string(e.label));
  }
};

namespace {

thread_local std::string g_last_error;

fpc_status status_for(fpclab::ErrorKind kind) {
  using fpclab::ErrorKind;
  switch (kind) {
    case ErrorKind::parameter: return FPC_ERR_PARAMETER;
    case ErrorKind::validation: return FPC_ERR_VALIDATION;
    case ErrorKind::io: return FPC_ERR_IO;
    case ErrorKind::format: return FPC_ERR_FORMAT;
    case ErrorKind::corrupt: return FPC_ERR_CORRUPT;
    case ErrorKind::provenance: return FPC_ERR_PROVENANCE;
    case ErrorKind::precondition: return FPC_ERR_PRECONDITION;
  }
  return FPC_ERR_INTERNAL;
}

fpc_status fail(fpc_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

template <class Fn>
fpc_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const fpclab::Error& e) {
    return fail(status_for(e.kind()), e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(FPC_ERR_VALIDATION, e.what());
  } catch (const std::bad_alloc&) {
    return fail(FPC_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(FPC_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(FPC_ERR_INTERNAL, "unknown error");
  }
}

#define FPC_REQUIRE(ptr)                                                    \
  do {                                                                      \
    if ((ptr) == nullptr) return fail(FPC_ERR_NULL_ARGUMENT, #ptr " is null"); \
  } while (0)

}  // namespace

extern "C" {

const char* fpc_version(void) { return fpclab::kVersion.data(); }

const char* fpc_last_error(void) { return g_last_error.c_str(); }

const char* fpc_status_name(fpc_status status) {
  switch (status) {
    case FPC_OK: return "ok";
    case FPC_ERR_PARAMETER: return "parameter error";
    case FPC_ERR_VALIDATION: return "validation error";
    case FPC_ERR_IO: return "I/O error";
    case FPC_ERR_FORMAT: return "format error";
    case FPC_ERR_CORRUPT: return "corrupt file";
    case FPC_ERR_PROVENANCE: return "provenance error";
    case FPC_ERR_PRECONDITION: return "precondition error";
    case FPC_ERR_CHECK_FAILED: return "check failed";
    case FPC_ERR_NULL_ARGUMENT: return "null argument";
    case FPC_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

fpc_status fpc_population_generate(const char* spec_json, fpc_population** out) {
  FPC_REQUIRE(spec_json);
  FPC_REQUIRE(out);
  return guarded([&] {
    const auto source = fpclab::detail::population_from_json(nlohmann::json::parse(spec_json));
    *out = new fpc_population{fpclab::materialize_population(source)};
    return FPC_OK;
  });
}

fpc_status fpc_population_preset(const char* name, uint64_t size_N, uint64_t seed, fpc_population** out) {
  FPC_REQUIRE(name);
  FPC_REQUIRE(out);
  return guarded([&] {
    *out = new fpc_population{fpclab::generate_population(fpclab::preset_spec(name, size_N, seed))};
    return FPC_OK;
  });
}

fpc_status fpc_population_load(const char* path, fpc_population** out) {
  FPC_REQUIRE(path);
  FPC_REQUIRE(out);
  return guarded([&] {
    *out = new fpc_population{fpclab::load_population(path)};
    return FPC_OK;
  });
}

fpc_status fpc_population_save(const fpc_population* population, const char* path) {
  FPC_REQUIRE(population);
  FPC_REQUIRE(path);
  return guarded([&] {
    fpclab::save_population(population->population, path);
    return FPC_OK;
  });
}

void fpc_population_free(fpc_population* population) { delete population; }

fpc_status fpc_population_truth(const fpc_population* population, fpc_truth* out) {
  FPC_REQUIRE(population);
  FPC_REQUIRE(out);
  const auto& t = population->population.truth();
  *out = {t.mean_mu, t.var_pop, t.var_srs.value_or(0.0), t.var_srs ? 1 : 0, t.size_N};
  return FPC_OK;
}

uint64_t fpc_population_size(const fpc_population* population) {
  return population ? population->population.size() : 0;
}

const double* fpc_population_values(const fpc_population* population) {
  return population ? population->population.values().data() : nullptr;
}

uint32_t fpc_population_checksum(const fpc_population* population) {
  return population ? population->population.checksum() : 0;
}

const char* fpc_population_kind(const fpc_population* population) {
  return population ? fpclab::to_string(population->population.spec().kind()).data() : nullptr;
}

fpc_status fpc_reduce_sum(const double* values, size_t count, const char* strategy,
                          const char* precision, double* out) {
  FPC_REQUIRE(strategy);
  FPC_REQUIRE(precision);
  FPC_REQUIRE(out);
  if (count > 0) FPC_REQUIRE(values);
  return guarded([&] {
    *out = fpclab::reduce_sum({values, count}, fpclab::AccumulationStrategy::parse(strategy),
                              fpclab::parse_precision(precision));
    return FPC_OK;
  });
}

fpc_status fpc_reduce_mean(const double* values, size_t count, const char* strategy,
                           const char* precision, double* out) {
  FPC_REQUIRE(strategy);
  FPC_REQUIRE(precision);
  FPC_REQUIRE(out);
  if (count > 0) FPC_REQUIRE(values);
  return guarded([&] {
    *out = fpclab::reduce_mean({values, count}, fpclab::AccumulationStrategy::parse(strategy),
                               fpclab::parse_precision(precision));
    return FPC_OK;
  });
}

fpc_status fpc_fpc_variance(double var_srs, uint64_t n, uint64_t N, double* out) {
  FPC_REQUIRE(out);
  return guarded([&] {
    *out = fpclab::fpc_variance(var_srs, n, N);
    return FPC_OK;
  });
}

fpc_status fpc_config_default(fpc_config** out) {
  FPC_REQUIRE(out);
  return guarded([&] {
    *out = new fpc_config{};
    return FPC_OK;
  });
}

fpc_status fpc_config_parse(const char* json, fpc_config** out) {
  FPC_REQUIRE(json);
  FPC_REQUIRE(out);
  return guarded([&] {
    *out = new fpc_config{fpclab::parse_config_json(json), {}};
    return FPC_OK;
  });
}

fpc_status fpc_config_load(const char* path, fpc_config** out) {
  FPC_REQUIRE(path);
  FPC_REQUIRE(out);
  return guarded([&] {
    *out = new fpc_config{fpclab::load_config(path), {}};
    return FPC_OK;
  });
}

fpc_status fpc_config_set_seed(fpc_config* config, uint64_t base_seed) {
  FPC_REQUIRE(config);
  config->config.base_seed = base_seed;
  return FPC_OK;
}

fpc_status fpc_config_set_workers(fpc_config* config, unsigned workers) {
  FPC_REQUIRE(config);
  if (workers == 0) return fail(FPC_ERR_VALIDATION, "workers must be >= 1");
  config->config.workers = workers;
  return FPC_OK;
}

fpc_status fpc_config_set_output_dir(fpc_config* config, const char* dir) {
  FPC_REQUIRE(config);
  FPC_REQUIRE(dir);
  config->config.output_dir = dir;
  return FPC_OK;
}

fpc_status fpc_config_set_population_file(fpc_config* config, const char* path) {
  FPC_REQUIRE(config);
  FPC_REQUIRE(path);
  const std::filesystem::path p = path;
  config->config.population = {p, p.stem().string()};
  return FPC_OK;
}

const char* fpc_config_output_dir(const fpc_config* config) {
  if (!config) return nullptr;
  config->output_dir = config->config.output_dir.string();
  return config->output_dir.c_str();
}

void fpc_config_free(fpc_config* config) { delete config; }

fpc_status fpc_run(const fpc_config* config, fpc_phases phases, fpc_report** out) {
  FPC_REQUIRE(config);
  FPC_REQUIRE(out);
  return guarded([&] {
    const auto which = phases == FPC_PHASES_SWEEP       ? fpclab::RunPhases::sweep
                       : phases == FPC_PHASES_NUMERICAL ? fpclab::RunPhases::numerical
                                                        : fpclab::RunPhases::all;
    *out = new fpc_report(fpclab::run_all(config->config, which));
    return FPC_OK;
  });
}

fpc_status fpc_report_load(const char* path, fpc_report** out) {
  FPC_REQUIRE(path);
  FPC_REQUIRE(out);
  return guarded([&] {
    *out = new fpc_report(fpclab::load_report(path));
    return FPC_OK;
  });
}

fpc_status fpc_report_write(const fpc_report* report, const char* dir, unsigned what) {
  FPC_REQUIRE(report);
  FPC_REQUIRE(dir);
  return guarded([&] {
    if (what & FPC_WRITE_CSV) fpclab::render_csv(report->report, dir);
    if (what & FPC_WRITE_JSON) fpclab::render_json(report->report, dir);
    if (what & FPC_WRITE_SVG) fpclab::render_plots(report->report, dir);
    return FPC_OK;
  });
}

fpc_status fpc_report_check(const fpc_report* report) {
  FPC_REQUIRE(report);
  return guarded([&] {
    const auto failures = fpclab::check_report(report->report);
    if (failures.empty()) return FPC_OK;
    std::string joined;
    for (const auto& f : failures) joined += f + "\n";
    return fail(FPC_ERR_CHECK_FAILED, joined);
  });
}

size_t fpc_report_table2_size(const fpc_report* report) { return report ? report->report.table2.size() : 0; }

fpc_status fpc_report_table2_row(const fpc_report* report, size_t i, fpc_variance_row* out) {
  FPC_REQUIRE(report);
  FPC_REQUIRE(out);
  if (i >= report->report.table2.size()) return fail(FPC_ERR_PARAMETER, "table2 row index out of range");
  const auto& row = report->report.table2[i];
  *out = {row.f, row.n, row.empirical_var, row.fpc_var, row.ratio.value_or(0.0), row.ratio ? 1 : 0};
  return FPC_OK;
}

size_t fpc_report_table3_size(const fpc_report* report) { return report ? report->report.table3.size() : 0; }

fpc_status fpc_report_table3_row(const fpc_report* report, size_t i, fpc_numerical_row* out) {
  FPC_REQUIRE(report);
  FPC_REQUIRE(out);
  if (i >= report->report.table3.size()) return fail(FPC_ERR_PARAMETER, "table3 row index out of range");
  const auto& row = report->report.table3[i];
  *out = {report->precisions[i].c_str(), report->strategies[i].c_str(), row.f, row.observed_var,
          row.max_abs_dev, row.expected_var};
  return FPC_OK;
}

const char* fpc_report_regime(const fpc_report* report, size_t i) {
  if (!report || i >= report->regimes.size()) return nullptr;
  return report->regimes[i].c_str();
}

fpc_status fpc_report_numerical_floor(const fpc_report* report, double* out) {
  FPC_REQUIRE(report);
  FPC_REQUIRE(out);
  if (!report->report.numerical_floor) return fail(FPC_ERR_PRECONDITION, "report has no numerical floor");
  *out = *report->report.numerical_floor;
  return FPC_OK;
}

fpc_status fpc_report_means(const fpc_report* report, size_t i, const double** means, size_t* count) {
  FPC_REQUIRE(report);
  FPC_REQUIRE(means);
  FPC_REQUIRE(count);
  if (i >= report->report.distributions.size())
    return fail(FPC_ERR_PARAMETER, "distribution index out of range");
  const auto& d = report->report.distributions[i];
  *means = d.means.data();
  *count = d.means.size();
  return FPC_OK;
}

void fpc_report_free(fpc_report* report) { delete report; }

}  // extern "C"
