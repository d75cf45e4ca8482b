/* Copyright 2026 The Echotrain Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#include "echotrain/cli/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace echotrain::cli {

namespace {

constexpr double kWidth = 820, kHeight = 520;
constexpr double kLeft = 80, kRight = 790, kTop = 50, kBottom = 460;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                          "#9467bd", "#ff7f0e", "#8c564b"};

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

// Round-number ticks (1-2-5 ladder) covering [lo, hi].
std::vector<double> linear_ticks(double lo, double hi) {
  const double span = hi - lo;
  if (!(span > 0.0)) return {lo};
  const double raw = span / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (mag * m >= raw) {
      step = mag * m;
      break;
    }
  std::vector<double> ticks;
  for (double v = std::ceil(lo / step) * step; v <= hi + 0.5 * step; v += step)
    ticks.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
  return ticks;
}

std::vector<double> log_ticks(double lo, double hi) {
  std::vector<double> ticks;
  for (int e = static_cast<int>(std::floor(std::log10(lo)));
       e <= static_cast<int>(std::ceil(std::log10(hi))); ++e)
    ticks.push_back(std::pow(10.0, e));
  return ticks;
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<')
      out += "&lt;";
    else if (c == '>')
      out += "&gt;";
    else if (c == '&')
      out += "&amp;";
    else
      out += c;
  }
  return out;
}

}  // namespace

std::string render_line_plot(const std::vector<PlotSeries>& series,
                             const PlotOptions& options) {
  double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
  double y_min = x_min, y_max = -x_min;
  for (const PlotSeries& s : series)
    for (const auto& [x, y] : s.points) {
      if (options.log_y && !(y > 0.0)) continue;
      x_min = std::min(x_min, x);
      x_max = std::max(x_max, x);
      y_min = std::min(y_min, y);
      y_max = std::max(y_max, y);
    }
  if (!(x_min <= x_max)) throw std::invalid_argument("plot has no points");
  if (x_min == x_max) {
    x_min -= 1.0;
    x_max += 1.0;
  }
  if (y_min == y_max) {
    y_min -= 1.0;
    y_max += 1.0;
    if (options.log_y) {
      y_min = std::max(y_min, y_max / 100.0);
    }
  }
  if (!options.log_y) {
    const double pad = 0.05 * (y_max - y_min);
    y_min -= pad;
    y_max += pad;
  }

  auto sx = [&](double x) {
    return kLeft + (x - x_min) / (x_max - x_min) * (kRight - kLeft);
  };
  auto sy = [&](double y) {
    const double v = options.log_y ? std::log10(y) : y;
    const double lo = options.log_y ? std::log10(y_min) : y_min;
    const double hi = options.log_y ? std::log10(y_max) : y_max;
    return kBottom - (v - lo) / (hi - lo) * (kBottom - kTop);
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' '
      << kHeight << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << (kLeft + kRight) / 2 << "\" y=\"28\" font-size=\"17\""
      << " text-anchor=\"middle\" font-family=\"sans-serif\">"
      << escape_xml(options.title) << "</text>\n";

  for (double t : options.log_y ? log_ticks(y_min, y_max)
                                : linear_ticks(y_min, y_max)) {
    if (t < y_min || t > y_max) continue;
    const double y = sy(t);
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << fmt(y) << "\" x2=\""
        << kRight << "\" y2=\"" << fmt(y)
        << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    svg << "<text x=\"" << kLeft - 8 << "\" y=\"" << fmt(y + 4)
        << "\" font-size=\"12\" text-anchor=\"end\" font-family=\"sans-serif\">"
        << fmt(t) << "</text>\n";
  }
  for (double t : linear_ticks(x_min, x_max)) {
    if (t < x_min || t > x_max) continue;
    const double x = sx(t);
    svg << "<line x1=\"" << fmt(x) << "\" y1=\"" << kTop << "\" x2=\""
        << fmt(x) << "\" y2=\"" << kBottom
        << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    svg << "<text x=\"" << fmt(x) << "\" y=\"" << kBottom + 18
        << "\" font-size=\"12\" text-anchor=\"middle\""
        << " font-family=\"sans-serif\">" << fmt(t) << "</text>\n";
  }
  svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\""
      << kRight - kLeft << "\" height=\"" << kBottom - kTop
      << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
  svg << "<text x=\"" << (kLeft + kRight) / 2 << "\" y=\"" << kHeight - 14
      << "\" font-size=\"14\" text-anchor=\"middle\""
      << " font-family=\"sans-serif\">" << escape_xml(options.x_label)
      << "</text>\n";
  svg << "<text x=\"22\" y=\"" << (kTop + kBottom) / 2
      << "\" font-size=\"14\" text-anchor=\"middle\""
      << " font-family=\"sans-serif\" transform=\"rotate(-90 22 "
      << (kTop + kBottom) / 2 << ")\">" << escape_xml(options.y_label)
      << "</text>\n";

  for (std::size_t si = 0; si < series.size(); ++si) {
    const char* color = kPalette[si % (sizeof kPalette / sizeof *kPalette)];
    std::ostringstream pts;
    for (const auto& [x, y] : series[si].points) {
      if (options.log_y && !(y > 0.0)) continue;
      pts << fmt(sx(x)) << ',' << fmt(sy(y)) << ' ';
    }
    svg << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.6\" points=\"" << pts.str() << "\"/>\n";
    if (series[si].markers)
      for (const auto& [x, y] : series[si].points) {
        if (options.log_y && !(y > 0.0)) continue;
        svg << "<circle cx=\"" << fmt(sx(x)) << "\" cy=\"" << fmt(sy(y))
            << "\" r=\"2.6\" fill=\"" << color << "\"/>\n";
      }
    svg << "<rect x=\"" << kRight - 180 << "\" y=\""
        << kTop + 10 + 18 * static_cast<double>(si)
        << "\" width=\"12\" height=\"4\" fill=\"" << color << "\"/>\n";
    svg << "<text x=\"" << kRight - 162 << "\" y=\""
        << kTop + 17 + 18 * static_cast<double>(si)
        << "\" font-size=\"12\" font-family=\"sans-serif\">"
        << escape_xml(series[si].label) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void write_line_plot(const std::string& path,
                     const std::vector<PlotSeries>& series,
                     const PlotOptions& options) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << render_line_plot(series, options);
}

}  // namespace echotrain::cli
