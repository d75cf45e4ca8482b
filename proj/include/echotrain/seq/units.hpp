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

namespace echotrain::seq {

// "200us", "1.5ms", "2s" -> seconds. Throws std::invalid_argument on
// malformed input. Config files and the pulse-program grammar share this.
double parse_duration(const std::string& text);

// Seconds -> canonical text with the largest unit that keeps the mantissa
// exact under round-trip (value printed with shortest exact decimal).
std::string format_duration(double seconds);

// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double v);

}  // namespace echotrain::seq
