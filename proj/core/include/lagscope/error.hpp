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

#ifndef LAGSCOPE_ERROR_HPP_
#define LAGSCOPE_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lagscope {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input: malformed files, violated preconditions, degenerate priors.
// The CLI maps this family to exit code 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class ParseError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class RangeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class PriorConfigError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// A block whose height is not determined by the data (singular Gram matrix).
class UnconstrainedBlockError : public ValidationError {
 public:
  UnconstrainedBlockError(std::size_t block, const std::string& what)
      : ValidationError(what), block_(block) {}

  std::size_t block() const noexcept { return block_; }

 private:
  std::size_t block_;
};

// Internal numerical-consistency failure (e.g. an FFT result that is not
// integral for integer inputs, or coincidence counts that cannot exist).
// The CLI maps this to exit code 3.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace lagscope

#endif  // LAGSCOPE_ERROR_HPP_
