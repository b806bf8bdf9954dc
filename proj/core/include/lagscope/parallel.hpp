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

#ifndef LAGSCOPE_PARALLEL_HPP_
#define LAGSCOPE_PARALLEL_HPP_

#include <cstddef>
#include <functional>

namespace lagscope {

// Worker count: LAGSCOPE_THREADS if set to a positive integer, otherwise the
// hardware concurrency (at least 1).
std::size_t max_threads();

// Calls body(i) for i in [0, n) across up to max_threads() workers. Each index
// is visited exactly once; callers write results by index, so output does not
// depend on the thread count. The first exception thrown is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace lagscope

#endif  // LAGSCOPE_PARALLEL_HPP_
