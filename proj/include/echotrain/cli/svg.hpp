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
#pragma once

#include <string>
#include <utility>
#include <vector>

namespace echotrain::cli {

struct PlotSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;
  bool markers = false;  // draw point markers on top of the line
};

struct PlotOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;  // positive y values only; others are dropped
};

// Self-contained line plot, no external renderer. Returns the SVG text.
std::string render_line_plot(const std::vector<PlotSeries>& series,
                             const PlotOptions& options);

void write_line_plot(const std::string& path,
                     const std::vector<PlotSeries>& series,
                     const PlotOptions& options);

}  // namespace echotrain::cli
