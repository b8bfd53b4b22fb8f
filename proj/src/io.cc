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

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

namespace mixbound {
namespace {

constexpr char kTableMagic[8] = {'B', 'C', 'J', 'T', '0', '0', '0', '1'};

[[noreturn]] void ParseFail(std::string_view source, const std::string& detail) {
  throw Error(ErrorCode::kParse, std::string(source) + ": " + detail);
}

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T ParseNumber(std::string_view token, std::string_view source, int line) {
  token = Trim(token);
  T value{};
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end || token.empty()) {
    ParseFail(source, "line " + std::to_string(line) + ": cannot parse '" +
                          std::string(token) + "'");
  }
  return value;
}

// Non-comment, non-blank lines with their 1-based line numbers.
template <typename Fn>
void ForEachDataLine(std::string_view text, Fn&& fn) {
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view line = Trim(text.substr(0, nl));
    ++line_no;
    if (!line.empty() && line.front() != '#') fn(line, line_no);
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
}

template <typename Fn>
auto Rethrow(std::string_view source, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kParse) throw;
    ParseFail(source, e.what());
  } catch (const Json::exception& e) {
    ParseFail(source, e.what());
  }
}

bool HasJsonExtension(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".json";
}

Json ParseJsonText(const std::string& text, std::string_view source) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    ParseFail(source, e.what());
  }
}

std::vector<std::uint8_t> ReadBytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) ParseFail(path.string(), "cannot open file");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

std::string ReadTextFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) ParseFail(path.string(), "cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

MarginalSequence ParseMarginalsCsv(std::string_view text, std::string_view source) {
  std::vector<double> probs;
  ForEachDataLine(text, [&](std::string_view line, int no) {
    probs.push_back(ParseNumber<double>(line, source, no));
  });
  return Rethrow(source, [&] { return MarginalSequence(std::move(probs)); });
}

MarginalSequence ParseMarginalsJson(const Json& doc, std::string_view source) {
  return Rethrow(source, [&] {
    if (!doc.is_object() || !doc.contains("probs")) {
      ParseFail(source, "expected an object with a \"probs\" array");
    }
    return MarginalSequence(doc.at("probs").get<std::vector<double>>());
  });
}

MarginalSequence LoadMarginals(const std::filesystem::path& path) {
  const std::string text = ReadTextFile(path);
  if (HasJsonExtension(path)) {
    return ParseMarginalsJson(ParseJsonText(text, path.string()), path.string());
  }
  return ParseMarginalsCsv(text, path.string());
}

namespace {

struct RawEntry {
  int i;
  int j;
  double v;
};

IntersectionBand BuildBand(const std::vector<RawEntry>& entries,
                           std::optional<int> n, std::optional<int> bandwidth,
                           std::string_view source) {
  int max_index = 1;
  int max_gap = 1;
  for (const auto& e : entries) {
    max_index = std::max({max_index, e.i, e.j});
    max_gap = std::max(max_gap, e.j - e.i);
  }
  const int size = n.value_or(max_index);
  return Rethrow(source, [&] {
    IntersectionBand band(size, bandwidth.value_or(max_gap));
    for (const auto& e : entries) {
      if (band.Get(e.i, e.j)) {
        ParseFail(source, "duplicate pair (" + std::to_string(e.i) + ", " +
                              std::to_string(e.j) + ")");
      }
      band.Set(e.i, e.j, e.v);
    }
    return band;
  });
}

}  // namespace

IntersectionBand ParseBandCsv(std::string_view text, std::optional<int> n,
                              std::string_view source) {
  std::vector<RawEntry> entries;
  ForEachDataLine(text, [&](std::string_view line, int no) {
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string_view::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string_view::npos) {
      ParseFail(source, "line " + std::to_string(no) + ": expected i,j,value");
    }
    entries.push_back({ParseNumber<int>(line.substr(0, c1), source, no),
                       ParseNumber<int>(line.substr(c1 + 1, c2 - c1 - 1), source, no),
                       ParseNumber<double>(line.substr(c2 + 1), source, no)});
  });
  return BuildBand(entries, n, std::nullopt, source);
}

IntersectionBand ParseBandJson(const Json& doc, std::optional<int> n,
                               std::string_view source) {
  std::vector<RawEntry> entries;
  std::optional<int> bandwidth;
  std::optional<int> size = n;
  Rethrow(source, [&] {
    const Json& band = doc.at("band");
    if (band.contains("W")) bandwidth = band.at("W").get<int>();
    if (!size && band.contains("N")) size = band.at("N").get<int>();
    for (const auto& e : band.at("entries")) {
      if (!e.is_array() || e.size() != 3) ParseFail(source, "entries must be [i, j, value]");
      entries.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<double>()});
    }
    return 0;
  });
  return BuildBand(entries, size, bandwidth, source);
}

IntersectionBand LoadBand(const std::filesystem::path& path, std::optional<int> n) {
  const std::string text = ReadTextFile(path);
  if (HasJsonExtension(path)) {
    return ParseBandJson(ParseJsonText(text, path.string()), n, path.string());
  }
  return ParseBandCsv(text, n, path.string());
}

MixingProfile ParseProfileJson(const Json& doc, std::string_view source) {
  return Rethrow(source, [&] {
    const std::string kind = doc.at("kind").get<std::string>();
    const std::string family_name = doc.value("family", std::string("phi"));
    CoefficientFamily family;
    if (family_name == "phi") {
      family = CoefficientFamily::kPhi;
    } else if (family_name == "alpha") {
      family = CoefficientFamily::kAlpha;
    } else {
      ParseFail(source, "unknown family '" + family_name + "'");
    }
    std::optional<int> restriction;
    if (doc.contains("restriction") && !doc.at("restriction").is_null()) {
      restriction = doc.at("restriction").get<int>();
    }
    if (kind == "geometric") {
      return MixingProfile::Geometric(doc.value("C", 1.0), doc.at("rho").get<double>(),
                                      family, restriction);
    }
    if (kind == "polynomial") {
      return MixingProfile::Polynomial(doc.value("C", 1.0),
                                       doc.at("gamma").get<double>(), family,
                                       restriction);
    }
    if (kind == "m-dependent") {
      return MixingProfile::MDep(doc.at("m").get<int>(), family, restriction);
    }
    if (kind == "tabulated") {
      return MixingProfile::Table(doc.at("values").get<std::vector<double>>(),
                                  family, restriction);
    }
    ParseFail(source, "unknown profile kind '" + kind + "'");
  });
}

MixingProfile LoadProfile(const std::filesystem::path& path) {
  return ParseProfileJson(ParseJsonText(ReadTextFile(path), path.string()),
                          path.string());
}

Json ProfileToJson(const MixingProfile& profile) {
  Json out;
  std::visit(
      [&](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, GeometricDecay>) {
          out["kind"] = "geometric";
          out["C"] = s.c;
          out["rho"] = s.rho;
        } else if constexpr (std::is_same_v<S, PolynomialDecay>) {
          out["kind"] = "polynomial";
          out["C"] = s.c;
          out["gamma"] = s.gamma;
        } else if constexpr (std::is_same_v<S, MDependent>) {
          out["kind"] = "m-dependent";
          out["m"] = s.m;
        } else {
          out["kind"] = "tabulated";
          out["values"] = s.values;
        }
      },
      profile.shape());
  out["family"] = std::string(FamilyName(profile.family()));
  out["restriction"] =
      profile.restriction() ? Json(*profile.restriction()) : Json(nullptr);
  return out;
}

Json JointTableToJson(const JointTableModel& table) {
  Json out;
  out["N"] = table.n();
  out["weights"] = std::vector<double>(table.weights().begin(), table.weights().end());
  return out;
}

JointTableModel JointTableFromJson(const Json& doc, std::string_view source) {
  return Rethrow(source, [&] {
    return JointTableModel(doc.at("N").get<int>(),
                           doc.at("weights").get<std::vector<double>>());
  });
}

std::vector<std::uint8_t> JointTableToBinary(const JointTableModel& table) {
  const auto w = table.weights();
  std::vector<std::uint8_t> out(sizeof kTableMagic + 8 * w.size());
  std::memcpy(out.data(), kTableMagic, sizeof kTableMagic);
  std::uint8_t* dst = out.data() + sizeof kTableMagic;
  for (double v : w) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) *dst++ = static_cast<std::uint8_t>(bits >> (8 * b));
  }
  return out;
}

JointTableModel JointTableFromBinary(const std::vector<std::uint8_t>& bytes,
                                     std::string_view source) {
  if (bytes.size() < sizeof kTableMagic ||
      std::memcmp(bytes.data(), kTableMagic, sizeof kTableMagic) != 0) {
    ParseFail(source, "missing BCJT0001 header");
  }
  const std::size_t payload = bytes.size() - sizeof kTableMagic;
  if (payload % 8 != 0) ParseFail(source, "payload is not a whole number of doubles");
  const std::size_t count = payload / 8;
  if (count < 2 || !std::has_single_bit(count)) {
    ParseFail(source, "weight count " + std::to_string(count) + " is not 2^N");
  }
  std::vector<double> weights(count);
  const std::uint8_t* src = bytes.data() + sizeof kTableMagic;
  for (double& v : weights) {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(*src++) << (8 * b);
    v = std::bit_cast<double>(bits);
  }
  const int n = std::countr_zero(count);
  return Rethrow(source, [&] { return JointTableModel(n, std::move(weights)); });
}

JointTableModel LoadJointTable(const std::filesystem::path& path) {
  const auto bytes = ReadBytes(path);
  if (bytes.size() >= sizeof kTableMagic &&
      std::memcmp(bytes.data(), kTableMagic, sizeof kTableMagic) == 0) {
    return JointTableFromBinary(bytes, path.string());
  }
  const std::string text(bytes.begin(), bytes.end());
  return JointTableFromJson(ParseJsonText(text, path.string()), path.string());
}

void SaveJointTable(const JointTableModel& table, const std::filesystem::path& path,
                    bool binary) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kInvalidArgument, "cannot write " + path.string());
  if (binary) {
    const auto bytes = JointTableToBinary(table);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
  } else {
    out << JointTableToJson(table).dump() << '\n';
  }
}

Json BoundReportToJson(const BoundReport& report) {
  Json out;
  out["bound"] = report.bound;
  out["exponent"] = report.exponent ? Json(*report.exponent) : Json(nullptr);
  out["L"] = report.spacing ? Json(*report.spacing) : Json(nullptr);
  Json residuals = Json::object();
  for (const auto& [name, value] : report.residuals) residuals[name] = value;
  out["residuals"] = std::move(residuals);
  out["clipped"] = report.clipped;
  out["form"] = report.form;
  out["notes"] = report.notes;
  return out;
}

}  // namespace mixbound
