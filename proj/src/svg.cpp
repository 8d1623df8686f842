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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <limits>
#include <sstream>

#include "fpclab/error.hpp"
#include "fpclab/report.hpp"
#include "format.hpp"
#include "json_io.hpp"

namespace fpclab {

namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 80, kRight = 20, kTop = 40, kBottom = 60;

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

std::string escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct Series {
  std::string label;
  std::string color;
  std::vector<std::pair<double, double>> points;
  bool dashed = false;
};

// Minimal line chart: linear x, linear or log10 y. Non-positive values on a
// log axis are pinned to the bottom edge.
class Chart {
 public:
  Chart(std::string title, std::string x_label, std::string y_label, bool log_y)
      : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)),
        log_y_(log_y) {}

  void add(Series s) { series_.push_back(std::move(s)); }
  void hline(double y, std::string label, std::string color) {
    hlines_.push_back({std::move(label), std::move(color), {{0, y}}, true});
  }

  std::string render() const {
    double x_lo = 0, x_hi = 1;
    double y_lo = std::numeric_limits<double>::infinity(), y_hi = -y_lo;
    bool first = true;
    auto take_y = [&](double y) {
      if (log_y_ && !(y > 0)) return;
      const double t = log_y_ ? std::log10(y) : y;
      y_lo = std::min(y_lo, t);
      y_hi = std::max(y_hi, t);
    };
    for (const auto& s : series_)
      for (auto [x, y] : s.points) {
        if (first) x_lo = x_hi = x, first = false;
        x_lo = std::min(x_lo, x);
        x_hi = std::max(x_hi, x);
        take_y(y);
      }
    for (const auto& h : hlines_) take_y(h.points[0].second);
    if (!std::isfinite(y_lo)) y_lo = log_y_ ? -1 : 0, y_hi = log_y_ ? 1 : 1;
    if (log_y_) y_lo = std::floor(y_lo) - 1, y_hi = std::ceil(y_hi);
    if (y_hi <= y_lo) y_hi = y_lo + 1;
    if (x_hi <= x_lo) x_hi = x_lo + 1;

    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * pw; };
    auto py = [&](double y) {
      double t = log_y_ ? (y > 0 ? std::log10(y) : y_lo) : y;
      t = std::clamp(t, y_lo, y_hi);
      return kTop + (y_hi - t) / (y_hi - y_lo) * ph;
    };

    std::ostringstream o;
    o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
      << "<!-- rendered " << utc_timestamp() << " -->\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"15\">" << escape(title_) << "</text>\n"
      << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";

    // y ticks: decades on log axes, five steps otherwise
    if (log_y_) {
      const int step = std::max(1, static_cast<int>((y_hi - y_lo) / 8));
      for (int e = static_cast<int>(y_lo); e <= static_cast<int>(y_hi); e += step) {
        const double y = kTop + (y_hi - e) / (y_hi - y_lo) * ph;
        o << "<line x1=\"" << kLeft - 4 << "\" y1=\"" << fmt(y) << "\" x2=\"" << kLeft << "\" y2=\""
          << fmt(y) << "\" stroke=\"black\"/>\n"
          << "<text x=\"" << kLeft - 6 << "\" y=\"" << fmt(y + 4)
          << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">1e" << e << "</text>\n";
      }
    } else {
      for (int i = 0; i <= 5; ++i) {
        const double v = y_lo + (y_hi - y_lo) * i / 5;
        const double y = py(v);
        o << "<text x=\"" << kLeft - 6 << "\" y=\"" << fmt(y + 4)
          << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(v) << "</text>\n";
      }
    }
    for (int i = 0; i <= 5; ++i) {
      const double v = x_lo + (x_hi - x_lo) * i / 5;
      o << "<text x=\"" << fmt(px(v)) << "\" y=\"" << kTop + ph + 16
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(v) << "</text>\n";
    }
    o << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 18
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << escape(x_label_)
      << "</text>\n"
      << "<text x=\"16\" y=\"" << kTop + ph / 2 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"12\" transform=\"rotate(-90 16 " << kTop + ph / 2 << ")\">" << escape(y_label_)
      << "</text>\n";

    int legend_row = 0;
    auto legend = [&](const Series& s) {
      const double ly = kTop + 14 + 16 * legend_row++;
      o << "<line x1=\"" << kLeft + pw - 170 << "\" y1=\"" << ly << "\" x2=\"" << kLeft + pw - 150
        << "\" y2=\"" << ly << "\" stroke=\"" << s.color << "\" stroke-width=\"2\""
        << (s.dashed ? " stroke-dasharray=\"5,3\"" : "") << "/>\n"
        << "<text x=\"" << kLeft + pw - 145 << "\" y=\"" << ly + 4
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape(s.label) << "</text>\n";
    };
    for (const auto& s : series_) {
      o << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"2\" points=\"";
      for (auto [x, y] : s.points) o << fmt(px(x)) << ',' << fmt(py(y)) << ' ';
      o << "\"/>\n";
      for (auto [x, y] : s.points)
        o << "<circle cx=\"" << fmt(px(x)) << "\" cy=\"" << fmt(py(y)) << "\" r=\"3\" fill=\"" << s.color
          << "\"/>\n";
      legend(s);
    }
    for (const auto& h : hlines_) {
      const double y = py(h.points[0].second);
      o << "<line x1=\"" << kLeft << "\" y1=\"" << fmt(y) << "\" x2=\"" << kLeft + pw << "\" y2=\""
        << fmt(y) << "\" stroke=\"" << h.color << "\" stroke-dasharray=\"5,3\"/>\n";
      legend(h);
    }
    o << "</svg>\n";
    return o.str();
  }

 private:
  std::string title_, x_label_, y_label_;
  bool log_y_;
  std::vector<Series> series_;
  std::vector<Series> hlines_;
};

std::string histogram_svg(const DistributionRecord& d, double mu) {
  constexpr int kBins = 30;
  const auto [lo_it, hi_it] = std::minmax_element(d.means.begin(), d.means.end());
  double lo = *lo_it, hi = *hi_it;
  if (hi <= lo) {
    const double pad = std::max(std::abs(lo) * 1e-12, 1e-300);
    lo -= pad, hi += pad;
  }
  std::vector<int> counts(kBins, 0);
  for (double m : d.means) {
    const int b = std::min(kBins - 1, static_cast<int>((m - lo) / (hi - lo) * kBins));
    ++counts[std::max(0, b)];
  }
  const int peak = *std::max_element(counts.begin(), counts.end());
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
    << "<!-- rendered " << utc_timestamp() << " -->\n"
    << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n"
    << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
    << "font-size=\"15\">Sample means, f = " << fmt(d.f) << ", n = " << d.n << ", R = " << d.means.size()
    << "</text>\n"
    << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  const double bw = pw / kBins;
  for (int b = 0; b < kBins; ++b) {
    const double h = peak ? ph * counts[b] / peak : 0.0;
    o << "<rect x=\"" << fmt(kLeft + b * bw) << "\" y=\"" << fmt(kTop + ph - h) << "\" width=\""
      << fmt(bw - 1) << "\" height=\"" << fmt(h) << "\" fill=\"steelblue\"/>\n";
  }
  if (mu >= lo && mu <= hi) {
    const double x = kLeft + (mu - lo) / (hi - lo) * pw;
    o << "<line x1=\"" << fmt(x) << "\" y1=\"" << kTop << "\" x2=\"" << fmt(x) << "\" y2=\"" << kTop + ph
      << "\" stroke=\"firebrick\" stroke-dasharray=\"5,3\"/>\n";
  }
  o << "<text x=\"" << kLeft << "\" y=\"" << kTop + ph + 16 << "\" font-family=\"sans-serif\" font-size=\"11\">"
    << fmt(lo) << "</text>\n"
    << "<text x=\"" << kLeft + pw << "\" y=\"" << kTop + ph + 16
    << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(hi) << "</text>\n"
    << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 18
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">sample mean (dashed: mu)</text>\n"
    << "</svg>\n";
  return o.str();
}

}  // namespace

void render_plots(const Report& report, const std::filesystem::path& output_dir) {
  if (report.table2.empty()) throw PreconditionError("render_plots needs a non-empty table2");
  std::error_code ec;
  std::filesystem::create_directories(output_dir, ec);
  if (ec) throw IoError("cannot create output directory " + output_dir.string() + ": " + ec.message());

  Chart variance("Variance of the sample mean vs sampling fraction", "sampling fraction f = n/N",
                 "Var(mean)", true);
  Series empirical{"empirical", "steelblue", {}};
  Series predicted{"finite population theory", "firebrick", {}};
  for (const auto& row : report.table2) {
    empirical.points.emplace_back(row.f, row.empirical_var);
    predicted.points.emplace_back(row.f, row.fpc_var);
  }
  variance.add(std::move(empirical));
  variance.add(std::move(predicted));
  detail::write_text(output_dir / "variance_vs_f.svg", variance.render());

  Chart deviation("Estimator deviation vs sampling fraction", "sampling fraction f = n/N",
                  "|sample mean - mu|", true);
  Series dev{"single seeded draw", "steelblue", {}};
  for (const auto& d : report.deviations) dev.points.emplace_back(d.f, std::abs(d.deviation_from_mu));
  deviation.add(std::move(dev));
  if (report.numerical_floor)
    deviation.hline(std::sqrt(*report.numerical_floor), "numerical floor (sd)", "gray");
  detail::write_text(output_dir / "deviation_vs_f.svg", deviation.render());

  for (const auto& d : report.distributions) {
    if (d.means.empty()) continue;
    detail::write_text(output_dir / ("histogram_f" + detail::shortest(d.f) + ".svg"),
                       histogram_svg(d, report.mean_mu));
  }
}

}  // namespace fpclab
