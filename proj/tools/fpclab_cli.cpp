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

// fpclab command-line front end. Talks to the library only through the C API.

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "fpclab/fpclab.h"

namespace {

enum ExitCode { kOk = 0, kValidation = 1, kIo = 2, kCheckFailed = 3 };

int exit_code_for(fpc_status status) {
  switch (status) {
    case FPC_OK: return kOk;
    case FPC_ERR_IO:
    case FPC_ERR_FORMAT:
    case FPC_ERR_CORRUPT: return kIo;
    case FPC_ERR_CHECK_FAILED: return kCheckFailed;
    default: return kValidation;
  }
}

struct Failure {
  int code;
};

void ok_or_throw(fpc_status status, const char* what) {
  if (status == FPC_OK) return;
  std::fprintf(stderr, "fpclab: %s: %s: %s\n", what, fpc_status_name(status), fpc_last_error());
  throw Failure{exit_code_for(status)};
}

struct Globals {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  unsigned workers = 1;
  std::string population_file;
};

template <class T, void (*Free)(T*)>
struct Handle {
  T* ptr = nullptr;
  ~Handle() { Free(ptr); }
};

using ConfigHandle = Handle<fpc_config, fpc_config_free>;
using ReportHandle = Handle<fpc_report, fpc_report_free>;
using PopulationHandle = Handle<fpc_population, fpc_population_free>;

std::string read_file(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) {
    std::fprintf(stderr, "fpclab: cannot open %s\n", path.c_str());
    throw Failure{kIo};
  }
  std::string text;
  char buf[4096];
  std::size_t got = 0;
  while ((got = std::fread(buf, 1, sizeof buf, f)) > 0) text.append(buf, got);
  std::fclose(f);
  return text;
}

void load_config(const Globals& g, ConfigHandle& config) {
  if (g.config_path.empty())
    ok_or_throw(fpc_config_default(&config.ptr), "default config");
  else
    ok_or_throw(fpc_config_load(g.config_path.c_str(), &config.ptr), "config");
  if (g.seed) ok_or_throw(fpc_config_set_seed(config.ptr, *g.seed), "--seed");
  if (!g.out_dir.empty()) ok_or_throw(fpc_config_set_output_dir(config.ptr, g.out_dir.c_str()), "--out");
  if (!g.population_file.empty())
    ok_or_throw(fpc_config_set_population_file(config.ptr, g.population_file.c_str()), "--population");
  ok_or_throw(fpc_config_set_workers(config.ptr, g.workers), "--workers");
}

void print_truth(const fpc_population* population) {
  fpc_truth t{};
  ok_or_throw(fpc_population_truth(population, &t), "truth");
  std::printf("{\n  \"kind\": \"%s\",\n  \"N\": %" PRIu64 ",\n  \"mean\": %.17g,\n  \"var_pop\": %.17g,\n",
              fpc_population_kind(population), t.size_N, t.mean_mu, t.var_pop);
  if (t.has_var_srs)
    std::printf("  \"var_srs\": %.17g,\n", t.var_srs);
  else
    std::printf("  \"var_srs\": null,\n");
  std::printf("  \"checksum\": \"%08x\"\n}\n", fpc_population_checksum(population));
}

void print_report_summary(const fpc_report* report) {
  const std::size_t rows2 = fpc_report_table2_size(report);
  if (rows2 > 0) std::printf("%-8s %-10s %-14s %-14s %-8s %s\n", "f", "n", "empirical_var", "fpc_var", "ratio", "regime");
  for (std::size_t i = 0; i < rows2; ++i) {
    fpc_variance_row row{};
    ok_or_throw(fpc_report_table2_row(report, i, &row), "table2");
    char ratio[32] = "-";
    if (row.has_ratio) std::snprintf(ratio, sizeof ratio, "%.4f", row.ratio);
    const char* regime = fpc_report_regime(report, i);
    std::printf("%-8g %-10" PRIu64 " %-14.4e %-14.4e %-8s %s\n", row.f, row.n, row.empirical_var, row.fpc_var,
                ratio, regime ? regime : "");
  }
  const std::size_t rows3 = fpc_report_table3_size(report);
  if (rows3 > 0) std::printf("\n%-10s %-26s %-14s %s\n", "precision", "strategy", "observed_var", "max_abs_dev");
  for (std::size_t i = 0; i < rows3; ++i) {
    fpc_numerical_row row{};
    ok_or_throw(fpc_report_table3_row(report, i, &row), "table3");
    std::printf("%-10s %-26s %-14.4e %.4e\n", row.precision, row.strategy, row.observed_var, row.max_abs_dev);
  }
}

int run_experiment(const Globals& g, fpc_phases phases, bool check, unsigned outputs) {
  ConfigHandle config;
  load_config(g, config);
  ReportHandle report;
  ok_or_throw(fpc_run(config.ptr, phases, &report.ptr), "run");
  const char* out = fpc_config_output_dir(config.ptr);
  ok_or_throw(fpc_report_write(report.ptr, out, outputs), "write");
  print_report_summary(report.ptr);
  std::printf("\nwrote outputs to %s\n", out);
  if (check) {
    const fpc_status status = fpc_report_check(report.ptr);
    if (status == FPC_ERR_CHECK_FAILED) {
      std::fprintf(stderr, "fpclab: check failed:\n%s", fpc_last_error());
      return kCheckFailed;
    }
    ok_or_throw(status, "check");
    std::printf("check passed\n");
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fpclab: finite population sampling and numerical precision laboratory"};
  app.fallthrough();
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config_path, "Experiment config (JSON)");
  app.add_option("--seed", g.seed, "Base seed (population seed for gen)");
  app.add_option("--out", g.out_dir, "Output directory");
  app.add_option("--workers", g.workers, "Worker threads (speed only)")->check(CLI::PositiveNumber);
  app.add_option("--population", g.population_file, "Use a saved population file");

  auto* gen = app.add_subcommand("gen", "Generate a population file");
  std::string preset = "pop_a", spec_path, output_path;
  std::uint64_t size_N = 100000;
  gen->add_option("--preset", preset, "pop_a | pop_b | ill_conditioned | student_t");
  gen->add_option("--N", size_N, "Population size");
  gen->add_option("--spec", spec_path, "Population spec JSON (overrides --preset/--N)");
  gen->add_option("-o,--output", output_path, "Output file (default <out>/population.fpop)");

  auto* truth = app.add_subcommand("truth", "Print the enumerated truth of a population");
  std::string truth_file;
  truth->add_option("file", truth_file, "Population file");
  truth->add_option("--preset", preset, "Preset to generate instead of reading a file");
  truth->add_option("--N", size_N, "Population size for --preset");

  bool check = false;
  auto* sweep = app.add_subcommand("sweep", "Variance vs sampling fraction (phases 1-3)");
  sweep->add_flag("--check", check, "Exit 3 if any invariant fails");
  auto* numerical = app.add_subcommand("numerical", "Full-enumeration numerical study (phase 4)");
  auto* all = app.add_subcommand("all", "Run every phase and write the full report");
  all->add_flag("--check", check, "Exit 3 if any invariant fails");
  auto* plot = app.add_subcommand("plot", "Re-render plots from a saved report.json");
  std::string report_path;
  plot->add_option("--report", report_path, "Saved report.json")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (gen->parsed()) {
      PopulationHandle population;
      if (!spec_path.empty()) {
        ok_or_throw(fpc_population_generate(read_file(spec_path).c_str(), &population.ptr), "gen");
      } else {
        ok_or_throw(fpc_population_preset(preset.c_str(), size_N, g.seed.value_or(1), &population.ptr), "gen");
      }
      if (output_path.empty()) {
        const std::filesystem::path dir = g.out_dir.empty() ? "." : g.out_dir;
        std::filesystem::create_directories(dir);
        output_path = (dir / "population.fpop").string();
      }
      ok_or_throw(fpc_population_save(population.ptr, output_path.c_str()), "save");
      print_truth(population.ptr);
      std::fprintf(stderr, "wrote %s\n", output_path.c_str());
      return kOk;
    }
    if (truth->parsed()) {
      PopulationHandle population;
      if (!truth_file.empty())
        ok_or_throw(fpc_population_load(truth_file.c_str(), &population.ptr), "load");
      else
        ok_or_throw(fpc_population_preset(preset.c_str(), size_N, g.seed.value_or(1), &population.ptr), "truth");
      print_truth(population.ptr);
      return kOk;
    }
    if (sweep->parsed()) return run_experiment(g, FPC_PHASES_SWEEP, check, FPC_WRITE_ALL);
    if (numerical->parsed()) return run_experiment(g, FPC_PHASES_NUMERICAL, false, FPC_WRITE_CSV | FPC_WRITE_JSON);
    if (all->parsed()) return run_experiment(g, FPC_PHASES_ALL, check, FPC_WRITE_ALL);
    if (plot->parsed()) {
      ReportHandle report;
      ok_or_throw(fpc_report_load(report_path.c_str(), &report.ptr), "load report");
      const std::string out = g.out_dir.empty() ? std::filesystem::path(report_path).parent_path().string() : g.out_dir;
      ok_or_throw(fpc_report_write(report.ptr, out.empty() ? "." : out.c_str(), FPC_WRITE_SVG), "plot");
      std::printf("wrote plots to %s\n", out.empty() ? "." : out.c_str());
      return kOk;
    }
  } catch (const Failure& f) {
    return f.code;
  } catch (const std::filesystem::filesystem_error& e) {
    std::fprintf(stderr, "fpclab: %s\n", e.what());
    return kIo;
  }
  return kValidation;
}
