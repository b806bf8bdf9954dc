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

#include "synth_spec.hpp"

#include <string>

#include "lagscope/error.hpp"

namespace lagscope::cli {
namespace {

using nlohmann::json;

void require_object(const json& doc, const std::string& what) {
  if (!doc.is_object()) throw ParseError(what + " must be a JSON object");
}

template <typename T>
T field(const json& doc, const char* key, T fallback) {
  if (!doc.contains(key)) return fallback;
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception&) {
    throw ParseError(std::string("spec field '") + key + "' has the wrong type");
  }
}

SignalSpec parse_signal(const json& doc, const SignalSpec& fallback) {
  if (!doc.contains("signal")) return fallback;
  const json& s = doc.at("signal");
  require_object(s, "signal");
  const auto kind = field<std::string>(s, "kind", "");
  if (kind == "constant") return ConstantSignal{field(s, "level", 0.0)};
  if (kind == "gaussian_pulse") {
    return GaussianPulse{field(s, "center", 0.0), field(s, "width", 1.0),
                         field(s, "amplitude", 1.0)};
  }
  if (kind == "table") {
    return TableSignal{field(s, "values", std::vector<double>{})};
  }
  throw ParseError("signal kind must be constant, gaussian_pulse or table, got '" +
                   kind + "'");
}

GenConfig parse_gen(const json& doc, GenConfig cfg) {
  cfg.m = field(doc, "m", cfg.m);
  cfg.tau_true = field(doc, "tau", cfg.tau_true);
  cfg.a_true = field(doc, "a", cfg.a_true);
  cfg.b_x = field(doc, "bx", cfg.b_x);
  cfg.b_y = field(doc, "by", cfg.b_y);
  return cfg;
}

WeightFunction parse_weight(const json& w) {
  require_object(w, "weight");
  const auto kind = field<std::string>(w, "kind", "");
  if (kind == "delta") return WeightFunction::delta(field(w, "center", 0.0));
  if (kind == "boxcar") {
    return WeightFunction::boxcar(field(w, "lo", 0.0), field(w, "hi", 0.0));
  }
  if (kind == "gaussian") {
    return WeightFunction::gaussian(field(w, "center", 0.0), field(w, "width", 0.0));
  }
  throw ParseError("weight kind must be delta, boxcar or gaussian, got '" + kind + "'");
}

std::vector<WeightFunction> weight_grid(const json& g) {
  const auto kind = field<std::string>(g, "kind", "delta");
  const auto n = field<std::size_t>(g, "n", 100);
  const double lo = field(g, "lo", 0.0);
  const double hi = field(g, "hi", 1.0);
  if (n == 0 || !(hi > lo)) {
    throw ValidationError("weight grid needs n >= 1 and hi > lo");
  }
  const double width = field(g, "width", (hi - lo) / static_cast<double>(n));
  std::vector<WeightFunction> out;
  for (std::size_t i = 0; i < n; ++i) {
    const double c = lo + (hi - lo) * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    if (kind == "delta") {
      out.push_back(WeightFunction::delta(c));
    } else if (kind == "boxcar") {
      out.push_back(WeightFunction::boxcar(c - width / 2, c + width / 2));
    } else if (kind == "gaussian") {
      out.push_back(WeightFunction::gaussian(c, width));
    } else {
      throw ParseError("weight grid kind must be delta, boxcar or gaussian, got '" +
                       kind + "'");
    }
  }
  return out;
}

}  // namespace

TteSpec parse_tte_spec(const json& doc) {
  require_object(doc, "spec");
  GenConfig defaults;
  defaults.m = 1024;
  defaults.tau_true = 10;
  defaults.b_x = 0.01;
  defaults.b_y = 0.01;
  const auto cfg = parse_gen(doc, defaults);
  const SignalSpec pulse =
      GaussianPulse{static_cast<double>(cfg.m) / 2, 8.0, 1.0};
  return {parse_signal(doc, pulse), cfg};
}

GaussSpec parse_gauss_spec(const json& doc) {
  require_object(doc, "spec");
  GenConfig defaults;
  defaults.m = 256;
  defaults.tau_true = 7;
  const auto cfg = parse_gen(doc, defaults);
  const SignalSpec pulse =
      GaussianPulse{static_cast<double>(cfg.m) / 2, 3.0, 5.0};
  return {parse_signal(doc, pulse), cfg, field(doc, "sigma_x", 1.0),
          field(doc, "sigma_y", 1.0)};
}

BlocksSpec parse_blocks_spec(const json& doc) {
  require_object(doc, "spec");
  BlockModel model(field(doc, "changepoints", std::vector<double>{1.0 / 3, 2.0 / 3}),
                   field(doc, "heights", std::vector<double>{1.0, 5.0, 2.0}));
  std::vector<WeightFunction> weights;
  if (!doc.contains("weights")) {
    weights = weight_grid(json::object());
  } else if (doc.at("weights").is_array()) {
    for (const auto& w : doc.at("weights")) weights.push_back(parse_weight(w));
  } else {
    require_object(doc.at("weights"), "weights");
    weights = weight_grid(doc.at("weights"));
  }
  std::vector<double> sigmas;
  if (doc.contains("sigma") && doc.at("sigma").is_array()) {
    sigmas = field(doc, "sigma", std::vector<double>{});
    if (sigmas.size() != weights.size()) {
      throw ValidationError("spec has " + std::to_string(sigmas.size()) + " sigmas for " +
                            std::to_string(weights.size()) + " weights");
    }
  } else {
    sigmas.assign(weights.size(), field(doc, "sigma", 0.1));
  }
  return {std::move(model), std::move(weights), std::move(sigmas)};
}

}  // namespace lagscope::cli
