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

#include "lagscope/series.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <utility>

#include "json.hpp"

#include "csv.hpp"
#include "lagscope/error.hpp"
#include "lagscope/text.hpp"

namespace lagscope {
namespace {

using detail::parse_double;
using detail::parse_int;
using detail::split_fields;
using detail::trim;

std::string at_line(std::size_t line) {
  return "line " + std::to_string(line);
}

// Recognizes `# M=<int>` (whitespace tolerant). Returns nullopt for any other
// comment.
std::optional<Tick> parse_span_header(std::string_view comment,
                                      std::size_t line) {
  comment.remove_prefix(1);  // '#'
  comment = trim(comment);
  if (comment.size() < 2 || comment[0] != 'M') return std::nullopt;
  comment.remove_prefix(1);
  comment = trim(comment);
  if (comment.empty() || comment[0] != '=') return std::nullopt;
  comment.remove_prefix(1);
  return parse_int(comment, at_line(line) + ": M header");
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  return in;
}

}  // namespace

EventSeries::EventSeries(std::vector<Tick> ticks, Tick span)
    : ticks_(std::move(ticks)), span_(span) {
  if (span_ < 1) {
    throw RangeError("event span M must be at least 1, got " +
                     std::to_string(span_));
  }
  for (std::size_t i = 0; i < ticks_.size(); ++i) {
    const Tick t = ticks_[i];
    if (t < 0 || t >= span_) {
      throw RangeError("tick " + std::to_string(t) + " outside [0, " +
                       std::to_string(span_) + ")");
    }
    if (i > 0 && t == ticks_[i - 1]) {
      throw ValidationError("duplicate tick " + std::to_string(t));
    }
    if (i > 0 && t < ticks_[i - 1]) {
      throw ValidationError("ticks not increasing at index " +
                            std::to_string(i));
    }
  }
}

std::size_t IndicatorVector::count() const noexcept {
  return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), 1));
}

std::vector<double> IndicatorVector::as_real() const {
  return {bits.begin(), bits.end()};
}

IndicatorVector to_indicator(const EventSeries& events) {
  IndicatorVector out;
  out.bits.assign(static_cast<std::size_t>(events.span()), 0);
  for (Tick t : events.ticks()) out.bits[static_cast<std::size_t>(t)] = 1;
  return out;
}

EventSeries from_indicator(const IndicatorVector& indicator) {
  std::vector<Tick> ticks;
  for (std::size_t m = 0; m < indicator.bits.size(); ++m) {
    if (indicator.bits[m] > 1) {
      throw ValidationError("indicator entries must be 0 or 1");
    }
    if (indicator.bits[m] == 1) ticks.push_back(static_cast<Tick>(m));
  }
  return EventSeries(std::move(ticks), static_cast<Tick>(indicator.size()));
}

EventSeries load_events(std::istream& in, EventFormat format,
                        std::optional<Tick> span_override) {
  std::optional<Tick> header_span;
  std::vector<std::pair<std::size_t, Tick>> entries;
  std::string raw;
  std::size_t line = 0;
  bool first_row = true;
  while (std::getline(in, raw)) {
    ++line;
    const std::string_view text = trim(raw);
    if (text.empty()) continue;
    if (text.front() == '#') {
      if (auto m = parse_span_header(text, line)) header_span = m;
      continue;
    }
    std::string_view field = text;
    if (format == EventFormat::kCsv) {
      field = split_fields(text).front();
      if (first_row && !detail::looks_numeric(field)) {
        first_row = false;
        continue;
      }
    }
    first_row = false;
    entries.emplace_back(line, parse_int(field, at_line(line)));
  }

  const std::optional<Tick> span = span_override ? span_override : header_span;
  if (!span) {
    throw ValidationError(
        "event span M missing: add a '# M=<int>' header or pass it explicitly");
  }
  if (*span < 1) {
    throw RangeError("event span M must be at least 1, got " +
                     std::to_string(*span));
  }

  std::vector<Tick> ticks;
  ticks.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto [where, tick] = entries[i];
    if (tick < 0 || tick >= *span) {
      throw RangeError(at_line(where) + ": tick " + std::to_string(tick) +
                       " outside [0, " + std::to_string(*span) + ")");
    }
    if (i > 0 && tick == entries[i - 1].second) {
      throw ValidationError(at_line(where) + ": duplicate tick " +
                            std::to_string(tick));
    }
    if (i > 0 && tick < entries[i - 1].second) {
      throw ValidationError(at_line(where) + ": tick " + std::to_string(tick) +
                            " is smaller than the previous tick " +
                            std::to_string(entries[i - 1].second) +
                            " (input must be sorted)");
    }
    ticks.push_back(tick);
  }
  return EventSeries(std::move(ticks), *span);
}

EventSeries load_events_file(const std::filesystem::path& path,
                             EventFormat format,
                             std::optional<Tick> span_override) {
  auto in = open_or_throw(path);
  return load_events(in, format, span_override);
}

void write_events(std::ostream& out, const EventSeries& events) {
  out << "# M=" << events.span() << '\n';
  for (Tick t : events.ticks()) out << t << '\n';
}

SampledSeries::SampledSeries(std::vector<double> values,
                             std::vector<double> sigmas, double dt)
    : values_(std::move(values)), sigmas_(std::move(sigmas)), dt_(dt) {
  if (values_.size() != sigmas_.size()) {
    throw ValidationError("values and sigmas differ in length (" +
                          std::to_string(values_.size()) + " vs " +
                          std::to_string(sigmas_.size()) + ")");
  }
  if (values_.empty()) throw ValidationError("sampled series is empty");
  if (!(dt_ > 0.0) || !std::isfinite(dt_)) {
    throw ValidationError("sample spacing dt must be positive");
  }
  for (std::size_t i = 0; i < sigmas_.size(); ++i) {
    if (!(sigmas_[i] > 0.0) || !std::isfinite(sigmas_[i])) {
      throw ValidationError("sigma at sample " + std::to_string(i) +
                            " must be positive, got " +
                            format_double(sigmas_[i]));
    }
    if (!std::isfinite(values_[i])) {
      throw ValidationError("value at sample " + std::to_string(i) +
                            " is not finite");
    }
  }
}

bool SampledSeries::constant_sigma() const noexcept {
  return std::all_of(sigmas_.begin(), sigmas_.end(),
                     [&](double s) { return s == sigmas_.front(); });
}

SampledSeries load_sampled(std::istream& in) {
  std::string raw;
  std::size_t line = 0;
  bool have_header = false;
  std::vector<double> t;
  std::vector<double> values;
  std::vector<double> sigmas;
  while (std::getline(in, raw)) {
    ++line;
    const std::string_view text = trim(raw);
    if (text.empty() || text.front() == '#') continue;
    const auto fields = split_fields(text);
    if (!have_header) {
      if (fields.size() != 3 || fields[0] != "t" || fields[1] != "y" ||
          fields[2] != "sigma") {
        throw ParseError(at_line(line) + ": expected header 't,y,sigma'");
      }
      have_header = true;
      continue;
    }
    if (fields.size() != 3) {
      throw ParseError(at_line(line) + ": expected 3 fields, got " +
                       std::to_string(fields.size()));
    }
    t.push_back(parse_double(fields[0], at_line(line) + " t"));
    values.push_back(parse_double(fields[1], at_line(line) + " y"));
    const double sigma = parse_double(fields[2], at_line(line) + " sigma");
    if (!(sigma > 0.0)) {
      throw ValidationError(at_line(line) + ": sigma must be positive, got " +
                            format_double(sigma));
    }
    sigmas.push_back(sigma);
  }
  if (!have_header) throw ParseError("sampled file has no header");
  if (t.empty()) throw ValidationError("sampled file has no rows");

  double dt = 1.0;
  if (t.size() > 1) {
    dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
    if (!(dt > 0.0)) {
      throw ValidationError("t column must be increasing");
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double expected = t.front() + static_cast<double>(i) * dt;
      worst = std::max(worst, std::abs(t[i] - expected) / dt);
    }
    if (worst > 1e-9) {
      throw ValidationError(
          "t column is not evenly spaced: max deviation " +
          format_double(worst) + " of the mean spacing " + format_double(dt));
    }
  }
  return SampledSeries(std::move(values), std::move(sigmas), dt);
}

SampledSeries load_sampled_file(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return load_sampled(in);
}

void write_sampled(std::ostream& out, const SampledSeries& series, double t0) {
  out << "t,y,sigma\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    out << format_double(t0 + static_cast<double>(i) * series.dt()) << ','
        << format_double(series.values()[i]) << ','
        << format_double(series.sigmas()[i]) << '\n';
  }
}

namespace {

WeightFunction load_tabulated_sidecar(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("tabulated weight '" + path.string() + "': " + e.what());
  }
  if (!doc.is_object() || !doc.contains("x") || !doc.contains("density")) {
    throw ParseError("tabulated weight '" + path.string() +
                     "' needs arrays 'x' and 'density'");
  }
  try {
    return WeightFunction::tabulated(doc.at("x").get<std::vector<double>>(),
                                     doc.at("density").get<std::vector<double>>());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("tabulated weight '" + path.string() + "': " + e.what());
  }
}

}  // namespace

std::vector<WeightedDatum> load_weighted(std::istream& in,
                                         const std::filesystem::path& base_dir) {
  std::string raw;
  std::size_t line = 0;
  bool have_header = false;
  std::vector<WeightedDatum> data;
  while (std::getline(in, raw)) {
    ++line;
    const std::string_view text = trim(raw);
    if (text.empty() || text.front() == '#') continue;
    const auto fields = split_fields(text);
    if (!have_header) {
      const std::vector<std::string_view> expected{"x",     "y",  "sigma",
                                                   "wkind", "w1", "w2"};
      if (fields != expected) {
        throw ParseError(at_line(line) +
                         ": expected header 'x,y,sigma,wkind,w1,w2'");
      }
      have_header = true;
      continue;
    }
    if (fields.size() != 6) {
      throw ParseError(at_line(line) + ": expected 6 fields, got " +
                       std::to_string(fields.size()));
    }
    const std::string where = at_line(line);
    const double x = parse_double(fields[0], where + " x");
    const double y = parse_double(fields[1], where + " y");
    const double sigma = parse_double(fields[2], where + " sigma");
    if (!(sigma > 0.0)) {
      throw ValidationError(where + ": sigma must be positive, got " +
                            format_double(sigma));
    }
    const std::string_view kind = fields[3];
    try {
      if (kind == "delta") {
        const double center =
            fields[4].empty() ? x : parse_double(fields[4], where + " w1");
        data.push_back({x, y, sigma, WeightFunction::delta(center)});
      } else if (kind == "boxcar") {
        data.push_back({x, y, sigma,
                        WeightFunction::boxcar(
                            parse_double(fields[4], where + " w1"),
                            parse_double(fields[5], where + " w2"))});
      } else if (kind == "gaussian") {
        data.push_back({x, y, sigma,
                        WeightFunction::gaussian(
                            parse_double(fields[4], where + " w1"),
                            parse_double(fields[5], where + " w2"))});
      } else if (kind == "tabulated") {
        if (fields[4].empty()) {
          throw ParseError(where + ": tabulated weight needs a sidecar path");
        }
        data.push_back({x, y, sigma,
                        load_tabulated_sidecar(base_dir /
                                               std::string(fields[4]))});
      } else {
        throw ParseError(where + ": unknown weight kind '" +
                         std::string(kind) + "'");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const ValidationError& e) {
      throw ValidationError(where + ": " + e.what());
    }
  }
  if (!have_header) throw ParseError("weighted-datum file has no header");
  return data;
}

std::vector<WeightedDatum> load_weighted_file(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return load_weighted(in, path.parent_path());
}

void write_weighted(std::ostream& out, std::span<const WeightedDatum> data) {
  struct Row {
    std::string kind;
    std::string w1;
    std::string w2;
  };
  out << "x,y,sigma,wkind,w1,w2\n";
  for (const auto& d : data) {
    const Row row = std::visit(
        [](const auto& w) -> Row {
          using W = std::decay_t<decltype(w)>;
          if constexpr (std::is_same_v<W, DeltaWeight>) {
            return {"delta", format_double(w.center), ""};
          } else if constexpr (std::is_same_v<W, BoxcarWeight>) {
            return {"boxcar", format_double(w.lo), format_double(w.hi)};
          } else if constexpr (std::is_same_v<W, GaussianWeight>) {
            return {"gaussian", format_double(w.center), format_double(w.width)};
          } else {
            throw ValidationError(
                "tabulated weights cannot be written inline; write a sidecar");
          }
        },
        d.weight.kind());
    out << format_double(d.x) << ',' << format_double(d.y) << ','
        << format_double(d.sigma) << ',' << row.kind << ',' << row.w1 << ','
        << row.w2 << '\n';
  }
}

}  // namespace lagscope
