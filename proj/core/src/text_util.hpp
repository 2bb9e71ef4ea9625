// Copyright 2026 The foresttune Authors.
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

#ifndef FORESTTUNE_SRC_TEXT_UTIL_HPP_
#define FORESTTUNE_SRC_TEXT_UTIL_HPP_

#include <optional>
#include <string>
#include <vector>

namespace foresttune::internal {

std::vector<std::string> split_record(const std::string& line);
// Finite decimal number spanning the whole string.
std::optional<double> parse_number(const std::string& text);
// Shortest representation that parses back to the same double.
std::string format_number(double value);
std::string quote_if_needed(const std::string& text);

}  // namespace foresttune::internal

#endif  // FORESTTUNE_SRC_TEXT_UTIL_HPP_
