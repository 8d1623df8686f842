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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "fpclab/fpclab.h"

namespace fs = std::filesystem;

TEST_CASE("version and status names") {
  CHECK(std::string(fpc_version()) == "1.0.0");
  CHECK(std::string(fpc_status_name(FPC_OK)) == "ok");
  CHECK(std::string(fpc_status_name(FPC_ERR_CORRUPT)) == "corrupt file");
}

TEST_CASE("populations through the C interface") {
  fpc_population* pop = nullptr;
  REQUIRE(fpc_population_preset("pop_a", 1700, 3, &pop) == FPC_OK);
  CHECK(fpc_population_size(pop) == 1700);
  CHECK(std::string(fpc_population_kind(pop)) == "discrete_uniform");
  fpc_truth t{};
  REQUIRE(fpc_population_truth(pop, &t) == FPC_OK);
  CHECK(t.mean_mu == 50.0);
  CHECK(t.has_var_srs == 1);
  CHECK(t.var_pop == doctest::Approx(24.0).epsilon(1e-12));

  const auto path = (fs::temp_directory_path() / "fpclab_capi.fpop").string();
  REQUIRE(fpc_population_save(pop, path.c_str()) == FPC_OK);
  fpc_population* back = nullptr;
  REQUIRE(fpc_population_load(path.c_str(), &back) == FPC_OK);
  CHECK(fpc_population_checksum(back) == fpc_population_checksum(pop));
  CHECK(fpc_population_values(back)[17] == fpc_population_values(pop)[17]);
  fpc_population_free(back);
  fpc_population_free(pop);

  CHECK(fpc_population_load("/nonexistent.fpop", &back) == FPC_ERR_IO);
  CHECK(std::string(fpc_last_error()).find("nonexistent") != std::string::npos);
  CHECK(fpc_population_preset("pop_z", 10, 1, &back) == FPC_ERR_PARAMETER);
  CHECK(fpc_population_preset("pop_a", 10, 1, nullptr) == FPC_ERR_NULL_ARGUMENT);

  REQUIRE(fpc_population_generate(R"({"kind": "normal", "size_N": 50, "params": {"mu": 1, "sigma": 2}})",
                                  &pop) == FPC_OK);
  CHECK(fpc_population_size(pop) == 50);
  fpc_population_free(pop);
  CHECK(fpc_population_generate(R"({"kind": "normal", "size_N": 50, "extra": 1})", &pop) ==
        FPC_ERR_VALIDATION);
  fpc_population_free(nullptr);
}

TEST_CASE("numerics through the C interface") {
  const double values[] = {16777216.0, 1.0};
  double out = 0;
  REQUIRE(fpc_reduce_sum(values, 2, "naive_serial", "fp32", &out) == FPC_OK);
  CHECK(out == 16777216.0);
  REQUIRE(fpc_reduce_sum(values, 2, "compensated", "fp64", &out) == FPC_OK);
  CHECK(out == 16777217.0);
  REQUIRE(fpc_reduce_mean(values, 2, "pairwise_tree", "fp64", &out) == FPC_OK);
  CHECK(out == 8388608.5);
  CHECK(fpc_reduce_sum(values, 2, "bogus", "fp64", &out) == FPC_ERR_PARAMETER);
  CHECK(fpc_reduce_mean(values, 0, "naive_serial", "fp64", &out) == FPC_ERR_PARAMETER);
  REQUIRE(fpc_fpc_variance(5.0 / 3.0, 2, 4, &out) == FPC_OK);
  CHECK(std::abs(out - 5.0 / 12.0) < 1e-15);
  CHECK(fpc_fpc_variance(1.0, 5, 4, &out) == FPC_ERR_PARAMETER);
}

TEST_CASE("run, inspect, write and check a report") {
  fpc_config* config = nullptr;
  REQUIRE(fpc_config_parse(R"({"population": {"preset": "pop_a", "size_N": 3000}, "R": 200, "K": 8})",
                           &config) == FPC_OK);
  const auto dir = (fs::temp_directory_path() / "fpclab_capi_out").string();
  fs::remove_all(dir);
  REQUIRE(fpc_config_set_output_dir(config, dir.c_str()) == FPC_OK);
  CHECK(std::string(fpc_config_output_dir(config)) == dir);
  REQUIRE(fpc_config_set_workers(config, 2) == FPC_OK);
  CHECK(fpc_config_set_workers(config, 0) == FPC_ERR_VALIDATION);

  fpc_report* report = nullptr;
  REQUIRE(fpc_run(config, FPC_PHASES_ALL, &report) == FPC_OK);
  REQUIRE(fpc_report_table2_size(report) == 5);
  fpc_variance_row row{};
  REQUIRE(fpc_report_table2_row(report, 4, &row) == FPC_OK);
  CHECK(row.f == 1.0);
  CHECK(row.has_ratio == 0);
  CHECK(row.empirical_var == 0.0);
  CHECK(fpc_report_table2_row(report, 5, &row) == FPC_ERR_PARAMETER);
  CHECK(std::string(fpc_report_regime(report, 4)) == "near_enumeration");
  CHECK(fpc_report_regime(report, 99) == nullptr);

  REQUIRE(fpc_report_table3_size(report) == 5);
  fpc_numerical_row nrow{};
  REQUIRE(fpc_report_table3_row(report, 2, &nrow) == FPC_OK);
  CHECK(std::string(nrow.precision) == "fp32");
  CHECK(std::string(nrow.strategy) == "naive_serial");

  const double* means = nullptr;
  size_t count = 0;
  REQUIRE(fpc_report_means(report, 0, &means, &count) == FPC_OK);
  CHECK(count == 200);
  double floor = -1;
  REQUIRE(fpc_report_numerical_floor(report, &floor) == FPC_OK);
  CHECK(floor == 0.0);
  CHECK(fpc_report_check(report) == FPC_OK);

  REQUIRE(fpc_report_write(report, dir.c_str(), FPC_WRITE_ALL) == FPC_OK);
  CHECK(fs::exists(fs::path(dir) / "table2.csv"));
  CHECK(fs::exists(fs::path(dir) / "variance_vs_f.svg"));

  fpc_report* loaded = nullptr;
  REQUIRE(fpc_report_load((fs::path(dir) / "report.json").string().c_str(), &loaded) == FPC_OK);
  fpc_variance_row lrow{};
  REQUIRE(fpc_report_table2_row(loaded, 1, &lrow) == FPC_OK);
  REQUIRE(fpc_report_table2_row(report, 1, &row) == FPC_OK);
  CHECK(lrow.empirical_var == row.empirical_var);
  fpc_report_free(loaded);
  fpc_report_free(report);

  REQUIRE(fpc_config_set_population_file(config, "/nonexistent/pop.fpop") == FPC_OK);
  CHECK(fpc_run(config, FPC_PHASES_SWEEP, &report) == FPC_ERR_IO);
  CHECK(std::string(fpc_last_error()).rfind("phase 1: ", 0) == 0);
  fpc_config_free(config);

  CHECK(fpc_config_parse(R"({"f_grid": []})", &config) == FPC_ERR_VALIDATION);
  CHECK(fpc_config_load("/nonexistent.json", &config) == FPC_ERR_IO);
}
