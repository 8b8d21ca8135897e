// Copyright 2026 The dflearn Authors.
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

// Small text helpers shared by the file formats.

#ifndef DFL_TEXT_HPP_
#define DFL_TEXT_HPP_

#include <string>
#include <string_view>
#include <vector>

namespace dfl {

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

/// Strict parse of a whole token; throws ParseError on failure.
double parse_double(std::string_view token, std::string_view context);
long parse_long(std::string_view token, std::string_view context);

std::vector<std::string> split(std::string_view line, char delimiter);
std::vector<std::string> split_whitespace(std::string_view line);
std::string_view trim(std::string_view s);

}  // namespace dfl

#endif  // DFL_TEXT_HPP_
