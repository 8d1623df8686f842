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

#include <charconv>
#include <cmath>
#include <sstream>

#include "fpclab/error.hpp"
#include "fpclab/report.hpp"
#include "fpclab/rng.hpp"
#include "fpclab/sampling.hpp"
#include "format.hpp"
#include "json.hpp"
#include "json_io.hpp"

namespace fpclab {

using nlohmann::json;

namespace {

template <class Fn>
auto in_phase(int phase, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const PhaseError&) {
    throw;
  } catch (const Error& e) {
    throw PhaseError(phase, e);
  }
}

double finite(double v) {
  if (!std::isfinite(v)) throw PreconditionError("non-finite value reached the report");
  return v;
}

json optional_number(const std::optional<double>& v) { return v ? json(finite(*v)) : json(nullptr); }

std::optional<double> optional_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

std::string optional_cell(const std::optional<double>& v) { return v ? detail::shortest(*v) : ""; }

double parse_double(std::string_view cell) {
  double v = 0.0;
  const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc{} || end != cell.data() + cell.size())
    throw FormatError("bad numeric cell '" + std::string(cell) + "'");
  return v;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) return out;
    start = comma + 1;
  }
}

json table1_json(const Report& r) {
  json rows = json::array();
  for (const auto& row : r.table1)
    rows.push_back({{"population", row.population},
                    {"N", row.N},
                    {"mean", finite(row.mean)},
                    {"var_pop", finite(row.var_pop)},
                    {"var_srs", optional_number(row.var_srs)},
                    {"kind", std::string(to_string(row.kind))}});
  return rows;
}

json table2_json(const Report& r) {
  json rows = json::array();
  for (const auto& row : r.table2)
    rows.push_back({{"f", finite(row.f)},
                    {"n", row.n},
                    {"empirical_var", finite(row.empirical_var)},
                    {"fpc_var", finite(row.fpc_var)},
                    {"ratio", optional_number(row.ratio)}});
  return rows;
}

json table3_json(const Report& r) {
  json rows = json::array();
  for (const auto& row : r.table3)
    rows.push_back({{"precision", std::string(to_string(row.pathway.precision))},
                    {"strategy", row.pathway.strategy.to_string()},
                    {"f", finite(row.f)},
                    {"observed_var", finite(row.observed_var)},
                    {"max_abs_dev", finite(row.max_abs_dev)}});
  return rows;
}

json report_json_value(const Report& r) {
  json regimes = json::array();
  for (const auto& e : r.regimes) regimes.push_back({{"f", e.f}, {"label", std::string(to_string(e.label))}});
  json deviations = json::array();
  for (const auto& d : r.deviations)
    deviations.push_back({{"f", finite(d.f)},
                          {"n", d.n},
                          {"seed", d.seed},
                          {"sample_mean", finite(d.sample_mean)},
                          {"deviation", finite(d.deviation_from_mu)}});
  json distributions = json::array();
  for (const auto& d : r.distributions) {
    for (double m : d.means) finite(m);
    distributions.push_back(
        {{"f", d.f}, {"n", d.n}, {"mean_of_means", finite(d.mean_of_means)}, {"means", d.means}});
  }
  return {{"version", r.version},
          {"config", detail::config_to_json_value(r.config)},
          {"population_checksum", r.population_checksum},
          {"mean_mu", finite(r.mean_mu)},
          {"table1", table1_json(r)},
          {"table2", table2_json(r)},
          {"table3", table3_json(r)},
          {"regimes", regimes},
          {"numerical_floor", optional_number(r.numerical_floor)},
          {"deviations", deviations},
          {"distributions", distributions}};
}

}  // namespace

Report run_all(const ExperimentConfig& config, RunPhases phases) {
  config.validate();
  Report report;
  report.config = config;
  const unsigned workers = config.workers;
  const bool sweep = phases != RunPhases::numerical;
  const bool numerical = phases != RunPhases::sweep;

  const Population population = in_phase(1, [&] { return materialize_population(config.population); });
  const Truth& truth = population.truth();
  report.population_checksum = population.checksum();
  report.mean_mu = truth.mean_mu;
  report.table1.push_back(
      {config.population.name, truth.size_N, truth.mean_mu, truth.var_pop, truth.var_srs,
       population.spec().kind()});

  const auto& sweep_path = config.sweep_pathway;
  if (sweep) {
    in_phase(2, [&] {
      const std::uint64_t seed = derive_seed(config.base_seed, 0);
      for (double f : config.f_grid)
        report.deviations.push_back(
            run_phase2(population, f, seed, sweep_path.strategy, sweep_path.precision));
    });
    in_phase(3, [&] {
      const auto dists =
          sweep_distributions(population, config.f_grid, config.R, sweep_path, config.base_seed, workers);
      for (const auto& d : dists) {
        report.table2.push_back(make_variance_row(d, truth));
        report.distributions.push_back({d.f, d.n, d.mean_of_means, d.means});
      }
    });
  }

  in_phase(4, [&] {
    if (numerical)
      report.table3 = run_numerical_study(population, config.strategies, config.K, config.base_seed, workers);
    for (const auto& row : report.table3)
      if (row.pathway == sweep_path) report.numerical_floor = row.observed_var;
    if (!report.numerical_floor)
      report.numerical_floor = estimate_numerical_floor(population, sweep_path.strategy,
                                                        sweep_path.precision, config.K,
                                                        config.base_seed, workers);
    for (const auto& row : report.table2)
      report.regimes.push_back(
          {row.f, classify_regime(row.f, row.fpc_var, *report.numerical_floor, config.thresholds)});
  });
  return report;
}

std::string table1_csv(const Report& report) {
  std::ostringstream out;
  out << "population,N,mean,var_pop,var_srs,kind\n";
  for (const auto& row : report.table1)
    out << row.population << ',' << row.N << ',' << detail::shortest(row.mean) << ','
        << detail::shortest(row.var_pop) << ',' << optional_cell(row.var_srs) << ','
        << to_string(row.kind) << '\n';
  return out.str();
}

std::string table2_csv(const Report& report) {
  std::ostringstream out;
  out << "f,n,empirical_var,fpc_var,ratio\n";
  for (const auto& row : report.table2)
    out << detail::shortest(row.f) << ',' << row.n << ',' << detail::shortest(row.empirical_var) << ','
        << detail::shortest(row.fpc_var) << ',' << optional_cell(row.ratio) << '\n';
  return out.str();
}

std::string table3_csv(const Report& report) {
  std::ostringstream out;
  out << "precision,strategy,f,observed_var,max_abs_dev\n";
  for (const auto& row : report.table3)
    out << to_string(row.pathway.precision) << ',' << row.pathway.strategy.to_string() << ','
        << detail::shortest(row.f) << ',' << detail::shortest(row.observed_var) << ','
        << detail::shortest(row.max_abs_dev) << '\n';
  return out.str();
}

std::vector<VarianceRow> parse_table2_csv(std::string_view text) {
  std::vector<VarianceRow> rows;
  bool header = true;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    const auto line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    if (header) {
      if (line != "f,n,empirical_var,fpc_var,ratio") throw FormatError("unexpected table2.csv header");
      header = false;
      continue;
    }
    if (line.empty()) continue;
    const auto cells = split_fields(line);
    if (cells.size() != 5) throw FormatError("table2.csv row must have 5 fields");
    VarianceRow row;
    row.f = parse_double(cells[0]);
    const auto [end, ec] = std::from_chars(cells[1].data(), cells[1].data() + cells[1].size(), row.n);
    if (ec != std::errc{} || end != cells[1].data() + cells[1].size()) throw FormatError("bad n cell");
    row.empirical_var = parse_double(cells[2]);
    row.fpc_var = parse_double(cells[3]);
    if (!cells[4].empty()) row.ratio = parse_double(cells[4]);
    rows.push_back(row);
  }
  if (header) throw FormatError("table2.csv is empty");
  return rows;
}

std::string report_to_json(const Report& report) { return report_json_value(report).dump(2) + "\n"; }

Report parse_report_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    Report r;
    r.version = j.at("version").get<std::string>();
    r.config = detail::config_from_json_value(j.at("config"));
    r.population_checksum = j.at("population_checksum").get<std::uint32_t>();
    r.mean_mu = j.at("mean_mu").get<double>();
    for (const auto& row : j.at("table1"))
      r.table1.push_back({row.at("population").get<std::string>(), row.at("N").get<std::uint64_t>(),
                          row.at("mean").get<double>(), row.at("var_pop").get<double>(),
                          optional_from(row.at("var_srs")),
                          parse_population_kind(row.at("kind").get<std::string>())});
    for (const auto& row : j.at("table2"))
      r.table2.push_back({row.at("f").get<double>(), row.at("n").get<std::uint64_t>(),
                          row.at("empirical_var").get<double>(), row.at("fpc_var").get<double>(),
                          optional_from(row.at("ratio"))});
    for (const auto& row : j.at("table3")) {
      NumericalRow n;
      n.pathway = detail::pathway_from_json(
          {{"strategy", row.at("strategy")}, {"precision", row.at("precision")}});
      n.f = row.at("f").get<double>();
      n.observed_var = row.at("observed_var").get<double>();
      n.max_abs_dev = row.at("max_abs_dev").get<double>();
      r.table3.push_back(n);
    }
    for (const auto& e : j.at("regimes"))
      r.regimes.push_back({e.at("f").get<double>(), parse_regime(e.at("label").get<std::string>())});
    r.numerical_floor = optional_from(j.at("numerical_floor"));
    for (const auto& d : j.at("deviations"))
      r.deviations.push_back({d.at("f").get<double>(), d.at("n").get<std::uint64_t>(),
                              d.at("seed").get<std::uint64_t>(), d.at("sample_mean").get<double>(),
                              d.at("deviation").get<double>()});
    for (const auto& d : j.at("distributions"))
      r.distributions.push_back({d.at("f").get<double>(), d.at("n").get<std::uint64_t>(),
                                 d.at("mean_of_means").get<double>(),
                                 d.at("means").get<std::vector<double>>()});
    return r;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed report JSON: ") + e.what());
  } catch (const ParameterError& e) {
    throw FormatError(std::string("malformed report JSON: ") + e.what());
  }
}

Report load_report(const std::filesystem::path& path) { return parse_report_json(detail::read_text(path)); }

void render_csv(const Report& report, const std::filesystem::path& output_dir) {
  std::error_code ec;
  std::filesystem::create_directories(output_dir, ec);
  if (ec) throw IoError("cannot create output directory " + output_dir.string() + ": " + ec.message());
  detail::write_text(output_dir / "table1.csv", table1_csv(report));
  detail::write_text(output_dir / "table2.csv", table2_csv(report));
  detail::write_text(output_dir / "table3.csv", table3_csv(report));
  if (report.config.dump_draws) {
    std::vector<DrawLogRow> rows;
    for (const auto& d : report.distributions)
      for (std::uint64_t r = 0; r < d.means.size(); ++r)
        rows.push_back({r, derive_seed(report.config.base_seed, r), d.n, d.f});
    write_draw_log(output_dir / "draws.csv", rows);
  }
}

void render_json(const Report& report, const std::filesystem::path& output_dir) {
  std::error_code ec;
  std::filesystem::create_directories(output_dir, ec);
  if (ec) throw IoError("cannot create output directory " + output_dir.string() + ": " + ec.message());
  detail::write_text(output_dir / "table1.json", table1_json(report).dump(2) + "\n");
  detail::write_text(output_dir / "table2.json", table2_json(report).dump(2) + "\n");
  detail::write_text(output_dir / "table3.json", table3_json(report).dump(2) + "\n");
  detail::write_text(output_dir / "report.json", report_to_json(report));
}

std::vector<std::string> check_report(const Report& report) {
  constexpr double kRatioLo = 0.85;
  constexpr double kRatioHi = 1.15;
  constexpr double kBiasSigmas = 4.0;
  std::vector<std::string> failures;
  auto fail = [&](const std::string& msg) { failures.push_back(msg); };
  const auto& t = report.config.thresholds;

  for (std::size_t i = 0; i < report.table2.size(); ++i) {
    const auto& row = report.table2[i];
    const std::string at = "f=" + detail::shortest(row.f) + ": ";
    if (row.fpc_var > 0.0) {
      if (!row.ratio || *row.ratio < kRatioLo || *row.ratio > kRatioHi)
        fail(at + "empirical/FPC variance ratio " + (row.ratio ? detail::shortest(*row.ratio) : "missing") +
             " outside [0.85, 1.15]");
    } else if (report.numerical_floor &&
               row.empirical_var > t.floor_margin * *report.numerical_floor) {
      fail(at + "empirical variance " + detail::shortest(row.empirical_var) +
           " exceeds the numerical floor margin");
    }
    if (i < report.distributions.size() && row.fpc_var > 0.0) {
      const auto& d = report.distributions[i];
      const double bound = kBiasSigmas * std::sqrt(row.fpc_var / static_cast<double>(d.means.size()));
      if (std::abs(d.mean_of_means - report.mean_mu) > bound)
        fail(at + "mean of means deviates from mu by more than 4 standard errors");
    }
    if (i > 0 && row.empirical_var > report.table2[i - 1].empirical_var)
      fail(at + "empirical variance increased with f");
  }
  for (std::size_t i = 0; i < report.regimes.size(); ++i) {
    const auto& e = report.regimes[i];
    if (e.f == 1.0 && e.label != RegimeLabel::near_enumeration)
      fail("f=1 is not labelled near_enumeration");
    if (i > 0 && static_cast<int>(e.label) < static_cast<int>(report.regimes[i - 1].label))
      fail("regime labels move backwards at f=" + detail::shortest(e.f));
  }
  return failures;
}

}  // namespace fpclab
