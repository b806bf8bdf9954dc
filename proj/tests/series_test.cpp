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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "lagscope/error.hpp"
#include "lagscope/series.hpp"
#include "lagscope/synth.hpp"

namespace lagscope {
namespace {

EventSeries parse_lines(const std::string& text, std::optional<Tick> m = 10) {
  std::istringstream in(text);
  return load_events(in, EventFormat::kLines, m);
}

TEST(LoadEvents, ParsesOneTickPerLine) {
  const auto e = parse_lines("2\n5\n9");
  EXPECT_EQ(e.span(), 10);
  EXPECT_EQ(std::vector<Tick>(e.ticks().begin(), e.ticks().end()),
            (std::vector<Tick>{2, 5, 9}));
}

TEST(LoadEvents, EmptyInputIsAnEmptySeries) {
  const auto e = parse_lines("");
  EXPECT_EQ(e.count(), 0u);
  EXPECT_EQ(e.span(), 10);
}

TEST(LoadEvents, RejectsDuplicateTicks) {
  try {
    parse_lines("5\n5");
    FAIL() << "expected a duplicate-tick error";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("duplicate"), std::string::npos);
  }
}

TEST(LoadEvents, UnsortedInputNamesTheLine) {
  try {
    parse_lines("1\n7\n3\n");
    FAIL() << "expected a validation error";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(LoadEvents, NonIntegerTokenIsAParseError) {
  EXPECT_THROW(parse_lines("1\n2.5\n"), ParseError);
  EXPECT_THROW(parse_lines("abc\n"), ParseError);
}

TEST(LoadEvents, TickAtOrBeyondSpanIsARangeError) {
  EXPECT_THROW(parse_lines("3\n10\n"), RangeError);
  EXPECT_THROW(parse_lines("-1\n"), RangeError);
}

TEST(LoadEvents, SpanFromHeaderOrOverride) {
  std::istringstream in("# M=12\n# comment\n0\n11\n");
  const auto e = load_events(in, EventFormat::kLines);
  EXPECT_EQ(e.span(), 12);
  EXPECT_EQ(e.count(), 2u);
  // The override wins over the header.
  EXPECT_EQ(parse_lines("# M=12\n0\n", 20).span(), 20);
}

TEST(LoadEvents, MissingSpanIsAnError) {
  std::istringstream in("1\n2\n");
  EXPECT_THROW(load_events(in, EventFormat::kLines), ValidationError);
}

TEST(LoadEvents, CsvTakesFirstColumnAndSkipsHeader) {
  std::istringstream in("# M=8\ntick,energy\n1,3.2\n4,1.0\n");
  const auto e = load_events(in, EventFormat::kCsv);
  EXPECT_EQ(std::vector<Tick>(e.ticks().begin(), e.ticks().end()),
            (std::vector<Tick>{1, 4}));
}

TEST(EventSeries, RoundTripsThroughTheLinesFormat) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto rng = substream(seed, "series.roundtrip");
    const Tick m = 1 + static_cast<Tick>(rng() % 300);
    std::vector<Tick> ticks;
    for (Tick t = 0; t < m; ++t) {
      if (rng() % 4 == 0) ticks.push_back(t);
    }
    const EventSeries e(ticks, m);
    std::stringstream io;
    write_events(io, e);
    EXPECT_EQ(load_events(io, EventFormat::kLines), e);
    EXPECT_EQ(from_indicator(to_indicator(e)), e);
    EXPECT_EQ(to_indicator(e).count(), e.count());
  }
}

TEST(ToIndicator, Examples) {
  EXPECT_EQ(to_indicator(EventSeries({0}, 3)).bits,
            (std::vector<std::uint8_t>{1, 0, 0}));
  EXPECT_EQ(to_indicator(EventSeries({}, 2)).bits,
            (std::vector<std::uint8_t>{0, 0}));
  EXPECT_EQ(to_indicator(EventSeries({1, 2}, 4)).bits,
            (std::vector<std::uint8_t>{0, 1, 1, 0}));
}

TEST(LoadSampled, ParsesAndInfersSpacing) {
  std::istringstream in("t,y,sigma\n0,1.0,0.5\n1,2.0,0.5\n");
  const auto s = load_sampled(in);
  EXPECT_EQ(std::vector<double>(s.values().begin(), s.values().end()),
            (std::vector<double>{1.0, 2.0}));
  EXPECT_EQ(std::vector<double>(s.sigmas().begin(), s.sigmas().end()),
            (std::vector<double>{0.5, 0.5}));
  EXPECT_DOUBLE_EQ(s.dt(), 1.0);
  EXPECT_TRUE(s.constant_sigma());
}

TEST(LoadSampled, UnevenSpacingReportsDeviation) {
  std::istringstream in("t,y,sigma\n0,1,1\n1,1,1\n2.5,1,1\n");
  try {
    load_sampled(in);
    FAIL() << "expected uneven-spacing error";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("max deviation"), std::string::npos);
  }
}

TEST(LoadSampled, NonPositiveSigmaIsRejected) {
  std::istringstream in("t,y,sigma\n0,1,0\n1,1,1\n");
  EXPECT_THROW(load_sampled(in), ValidationError);
}

TEST(LoadSampled, RoundTripsThroughWrite) {
  const SampledSeries s({0.25, -1.5, 3.0}, {0.1, 0.2, 0.3}, 0.5);
  std::stringstream io;
  write_sampled(io, s);
  EXPECT_EQ(load_sampled(io), s);
}

TEST(WeightFunction, ValidatesParameters) {
  EXPECT_THROW(WeightFunction::boxcar(1.0, 1.0), ValidationError);
  EXPECT_THROW(WeightFunction::gaussian(0.0, 0.0), ValidationError);
  EXPECT_THROW(WeightFunction::tabulated({0, 1}, {1, -1}), ValidationError);
  EXPECT_THROW(WeightFunction::tabulated({0, 1}, {2, 2}), ValidationError);
}

TEST(WeightFunction, TabulatedWithinOnePercentIsNormalized) {
  const auto w = WeightFunction::tabulated({0.0, 1.0}, {1.005, 1.005});
  const auto& t = std::get<TabulatedWeight>(w.kind());
  EXPECT_NEAR(t.densities[0], 1.0, 1e-15);
  EXPECT_DOUBLE_EQ(w.nominal_position(), 0.5);
}

TEST(LoadWeighted, ParsesAllInlineKinds) {
  std::istringstream in(
      "x,y,sigma,wkind,w1,w2\n"
      "0.5,1.0,0.1,delta,,\n"
      "1.0,2.0,0.2,boxcar,0.5,1.5\n"
      "2.0,3.0,0.3,gaussian,2.0,0.25\n");
  const auto data = load_weighted(in, ".");
  ASSERT_EQ(data.size(), 3u);
  EXPECT_DOUBLE_EQ(std::get<DeltaWeight>(data[0].weight.kind()).center, 0.5);
  EXPECT_DOUBLE_EQ(std::get<BoxcarWeight>(data[1].weight.kind()).hi, 1.5);
  EXPECT_DOUBLE_EQ(std::get<GaussianWeight>(data[2].weight.kind()).width, 0.25);

  std::stringstream io;
  write_weighted(io, data);
  const auto again = load_weighted(io, ".");
  ASSERT_EQ(again.size(), 3u);
  EXPECT_DOUBLE_EQ(again[2].sigma, 0.3);
}

TEST(LoadWeighted, RejectsUnknownKindAndBadSigma) {
  std::istringstream bad_kind("x,y,sigma,wkind,w1,w2\n0,1,1,triangle,0,1\n");
  EXPECT_THROW(load_weighted(bad_kind, "."), ParseError);
  std::istringstream bad_sigma("x,y,sigma,wkind,w1,w2\n0,1,-1,delta,,\n");
  EXPECT_THROW(load_weighted(bad_sigma, "."), ValidationError);
}

TEST(LoadWeighted, ReadsTabulatedSidecarRelativeToBaseDir) {
  const auto dir = std::filesystem::temp_directory_path() / "lagscope_series_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream side(dir / "w.json");
    side << R"({"x": [0.0, 1.0, 2.0], "density": [0.0, 1.0, 0.0]})";
  }
  std::istringstream in("x,y,sigma,wkind,w1,w2\n1.0,2.0,0.5,tabulated,w.json,\n");
  const auto data = load_weighted(in, dir);
  ASSERT_EQ(data.size(), 1u);
  const auto& t = std::get<TabulatedWeight>(data[0].weight.kind());
  EXPECT_EQ(t.abscissae.size(), 3u);
  EXPECT_DOUBLE_EQ(t.densities[1], 1.0);

  std::istringstream missing("x,y,sigma,wkind,w1,w2\n1.0,2.0,0.5,tabulated,nope.json,\n");
  EXPECT_THROW(load_weighted(missing, dir), Error);
  std::stringstream io;
  EXPECT_THROW(write_weighted(io, data), ValidationError);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace lagscope
