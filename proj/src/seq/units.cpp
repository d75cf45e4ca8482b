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
#include "echotrain/seq/units.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace echotrain::seq {

double parse_duration(const std::string& text) {
  const char* p = text.c_str();
  char* end = nullptr;
  const double value = std::strtod(p, &end);
  if (end == p || !std::isfinite(value))
    throw std::invalid_argument("bad duration: '" + text + "'");
  std::string unit(end);
  double scale;
  if (unit == "us")
    scale = 1e-6;
  else if (unit == "ms")
    scale = 1e-3;
  else if (unit == "s")
    scale = 1.0;
  else
    throw std::invalid_argument("bad duration unit in '" + text +
                                "' (expected us, ms or s)");
  return value * scale;
}

std::string format_double(double v) {
  char buf[40];
  if (std::nearbyint(v) == v && std::fabs(v) < 1e15) {
    std::snprintf(buf, sizeof(buf), "%.0f", v);
    return buf;
  }
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

std::string format_duration(double seconds) {
  // Prefer us/ms when the rescaled mantissa still round-trips exactly
  // through the parser (value * scale must reproduce the double).
  struct Unit {
    double scale;
    const char* suffix;
  };
  static const Unit units[] = {{1e-6, "us"}, {1e-3, "ms"}, {1.0, "s"}};
  const double a = std::fabs(seconds);
  int pick = 2;
  if (a > 0 && a < 1e-3)
    pick = 0;
  else if (a < 1.0)
    pick = 1;
  for (int i = pick; i < 3; ++i) {
    const double mant = seconds / units[i].scale;
    const double snapped = std::nearbyint(mant);
    if (snapped * units[i].scale == seconds)
      return format_double(snapped) + units[i].suffix;
    const std::string text = format_double(mant);
    if (mant * units[i].scale == seconds && text.size() <= 10)
      return text + units[i].suffix;
  }
  return format_double(seconds) + "s";
}

}  // namespace echotrain::seq
