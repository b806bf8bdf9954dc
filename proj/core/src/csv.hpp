// Copyright 2026 The lagscope Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LAGSCOPE_SRC_CSV_HPP_
#define LAGSCOPE_SRC_CSV_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace lagscope::detail {

std::string_view trim(std::string_view s);

// Comma-separated fields, each trimmed. No quoting support.
std::vector<std::string_view> split_fields(std::string_view line);

// Strict parses: the whole field must be consumed. `what` is used in the
// ParseError message.
std::int64_t parse_int(std::string_view field, std::string_view what);
double parse_double(std::string_view field, std::string_view what);

bool looks_numeric(std::string_view field);

}  // namespace lagscope::detail

#endif  // LAGSCOPE_SRC_CSV_HPP_
