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

#ifndef LAGSCOPE_TEXT_HPP_
#define LAGSCOPE_TEXT_HPP_

#include <string>

namespace lagscope {

// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

}  // namespace lagscope

#endif  // LAGSCOPE_TEXT_HPP_
