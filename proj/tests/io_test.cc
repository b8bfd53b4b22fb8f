// Copyright 2026 The mixbound Authors
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

#include "mixbound/io.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "mixbound/bounds.h"

namespace mixbound {
namespace {

namespace fs = std::filesystem;

ErrorCode ParseCode(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no Error thrown";
  return ErrorCode::kInvalidArgument;
}

TEST(MarginalsIoTest, CsvSkipsCommentsAndBlanks) {
  const auto m = ParseMarginalsCsv("# header\n0.1\n\n0.2\n 0.3 \n");
  ASSERT_EQ(m.size(), 3u);
  EXPECT_DOUBLE_EQ(m.at(3), 0.3);
}

TEST(MarginalsIoTest, Errors) {
  EXPECT_EQ(ParseCode([] { ParseMarginalsCsv("0.1\nabc\n"); }), ErrorCode::kParse);
  EXPECT_EQ(ParseCode([] { ParseMarginalsCsv("0.1\n1.2\n"); }), ErrorCode::kParse);
  EXPECT_EQ(ParseCode([] { ParseMarginalsJson(Json{{"p", {0.1}}}); }), ErrorCode::kParse);
  try {
    ParseMarginalsCsv("x", "marg.csv");
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("marg.csv"), std::string::npos);
  }
}

TEST(MarginalsIoTest, Json) {
  const auto m = ParseMarginalsJson(Json::parse(R"({"probs": [0.25, 0.5]})"));
  EXPECT_DOUBLE_EQ(m.total(), 0.75);
}

TEST(BandIoTest, CsvAndJson) {
  const auto csv = ParseBandCsv("1,2,0.1\n2,3,0.1\n1,3,0.05\n", std::nullopt);
  EXPECT_EQ(csv.n(), 3);
  EXPECT_EQ(csv.Get(1, 3), 0.05);
  const auto json = ParseBandJson(
      Json::parse(R"({"band": {"W": 1, "entries": [[1, 2, 0.1], [2, 3, 0.1]]}})"), 3);
  EXPECT_EQ(json.n(), 3);
  EXPECT_EQ(json.bandwidth(), 1);
  EXPECT_DOUBLE_EQ(LocalOverlap(json, 2, false), 0.2);
}

TEST(BandIoTest, Errors) {
  EXPECT_EQ(ParseCode([] { ParseBandCsv("1,2,0.1\n1,2,0.2\n", std::nullopt); }),
            ErrorCode::kParse);
  EXPECT_EQ(ParseCode([] { ParseBandCsv("1;2;0.1\n", std::nullopt); }), ErrorCode::kParse);
  EXPECT_EQ(ParseCode([] { ParseBandCsv("2,1,0.1\n", std::nullopt); }), ErrorCode::kParse);
}

TEST(ProfileIoTest, RoundTrip) {
  using F = CoefficientFamily;
  for (const auto& p : {MixingProfile::Geometric(2, 0.5, F::kPhi, 7),
                        MixingProfile::Polynomial(1, 1.5, F::kAlpha),
                        MixingProfile::MDep(3, F::kPhi),
                        MixingProfile::Table({0.3, 0.1, 0.0}, F::kAlpha, 4)}) {
    const auto back = ParseProfileJson(ProfileToJson(p));
    EXPECT_EQ(back.family(), p.family());
    EXPECT_EQ(back.restriction(), p.restriction());
    for (int lag = 1; lag < 10; ++lag) EXPECT_EQ(ProfileAt(back, lag), ProfileAt(p, lag));
  }
  EXPECT_EQ(ParseCode([] { ParseProfileJson(Json{{"kind", "weird"}}); }), ErrorCode::kParse);
  EXPECT_EQ(ParseCode([] { ParseProfileJson(Json{{"kind", "geometric"}, {"rho", 2.0}}); }),
            ErrorCode::kParse);
}

TEST(JointTableIoTest, JsonAndBinaryRoundTrip) {
  std::mt19937_64 rng(21);
  const auto t = RandomJointTable(5, rng);
  const auto from_json = JointTableFromJson(JointTableToJson(t));
  const auto from_bin = JointTableFromBinary(JointTableToBinary(t));
  for (std::size_t i = 0; i < t.weights().size(); ++i) {
    EXPECT_EQ(from_json.weights()[i], t.weights()[i]);
    EXPECT_EQ(from_bin.weights()[i], t.weights()[i]);
  }
  const fs::path dir = fs::path(::testing::TempDir()) / "mixbound_io_test";
  fs::create_directories(dir);
  SaveJointTable(t, dir / "t.bin", true);
  SaveJointTable(t, dir / "t.json", false);
  EXPECT_EQ(LoadJointTable(dir / "t.bin").weights()[3], t.weights()[3]);
  EXPECT_EQ(LoadJointTable(dir / "t.json").weights()[3], t.weights()[3]);
}

TEST(JointTableIoTest, BinaryErrors) {
  std::vector<std::uint8_t> bad = {'X', 'X', 'X', 'X', 'X', 'X', 'X', 'X'};
  EXPECT_EQ(ParseCode([&] { JointTableFromBinary(bad); }), ErrorCode::kParse);
  std::vector<std::uint8_t> odd = {'B', 'C', 'J', 'T', '0', '0', '0', '1', 0, 0, 0};
  EXPECT_EQ(ParseCode([&] { JointTableFromBinary(odd); }), ErrorCode::kParse);
}

TEST(BoundReportIoTest, StableShape) {
  BoundReport r;
  r.bound = 0.5;
  r.exponent = 0.7;
  r.spacing = 2;
  r.residuals = {{"phi", 0.1}};
  r.form = "phi-main";
  const Json j = BoundReportToJson(r);
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  EXPECT_EQ(keys, (std::vector<std::string>{"bound", "exponent", "L", "residuals", "clipped",
                                            "form", "notes"}));
  EXPECT_EQ(j["residuals"]["phi"], 0.1);
}

TEST(ReadTextFileTest, MissingFileIsParseError) {
  EXPECT_EQ(ParseCode([] { ReadTextFile("/nonexistent/file.csv"); }), ErrorCode::kParse);
}

}  // namespace
}  // namespace mixbound
