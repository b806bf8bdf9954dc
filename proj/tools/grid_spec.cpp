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

#include "grid_spec.hpp"

#include <charconv>
#include <cmath>
#include <set>

#include "lagscope/error.hpp"

namespace lagscope::cli {
namespace {

std::vector<std::string> split_colon(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(':', start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return parts;
}

template <typename T>
T parse_number(const std::string& field, const std::string& whole) {
  T value{};
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc() || ptr != end) {
    throw ParseError("bad grid spec '" + whole + "': '" + field + "' is not a number");
  }
  return value;
}

struct Triple {
  double lo;
  double hi;
  std::size_t n;
};

Triple parse_triple(const std::string& text) {
  const auto parts = split_colon(text);
  if (parts.size() != 3) {
    throw ParseError("bad grid spec '" + text + "': expected lo:hi:n");
  }
  const double lo = parse_number<double>(parts[0], text);
  const double hi = parse_number<double>(parts[1], text);
  const auto n = parse_number<std::size_t>(parts[2], text);
  if (n == 0) throw ValidationError("grid '" + text + "' has no points");
  if (hi < lo) throw ValidationError("grid '" + text + "' has hi < lo");
  if (n == 1 && hi != lo) {
    throw ValidationError("grid '" + text + "' has one point but lo != hi");
  }
  return {lo, hi, n};
}

}  // namespace

std::vector<double> parse_a_grid(const std::string& text, bool linear) {
  const auto t = parse_triple(text);
  if (!(t.lo > 0.0)) {
    throw ValidationError("scale-factor grid '" + text + "' must be positive");
  }
  return linear ? linear_grid(t.lo, t.hi, t.n) : log_grid(t.lo, t.hi, t.n);
}

std::vector<double> parse_linear_grid(const std::string& text) {
  const auto t = parse_triple(text);
  return linear_grid(t.lo, t.hi, t.n);
}

LagSelection parse_tau_window(const std::string& text) {
  const auto parts = split_colon(text);
  if (parts.size() != 2 && parts.size() != 3) {
    throw ParseError("bad lag window '" + text + "': expected lo:hi or lo:hi:n");
  }
  LagSelection sel;
  sel.window.lo = parse_number<Tick>(parts[0], text);
  sel.window.hi = parse_number<Tick>(parts[1], text);
  if (sel.window.hi < sel.window.lo) {
    throw ValidationError("lag window '" + text + "' has hi < lo");
  }
  if (parts.size() == 2) {
    for (Tick t = sel.window.lo; t <= sel.window.hi; ++t) sel.lags.push_back(t);
    return sel;
  }
  const auto n = parse_number<std::size_t>(parts[2], text);
  if (n == 0) throw ValidationError("lag grid '" + text + "' has no points");
  std::set<Tick> seen;
  for (double v : linear_grid(static_cast<double>(sel.window.lo),
                              static_cast<double>(sel.window.hi), n)) {
    const auto lag = static_cast<Tick>(std::llround(v));
    if (!seen.insert(lag).second) {
      throw ValidationError("lag grid '" + text + "' repeats lag " +
                            std::to_string(lag) + " after rounding");
    }
    sel.lags.push_back(lag);
  }
  return sel;
}

}  // namespace lagscope::cli
