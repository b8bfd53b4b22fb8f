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

// File formats.
//
//   marginals  CSV: one probability per line.
//              JSON: {"probs": [...]}
//   band       CSV: "i,j,value" per line.
//              JSON: {"band": {"W": w, "entries": [[i, j, v], ...]}}
//   profile    JSON: {"kind": "geometric", "C": 1.0, "rho": 0.5,
//                     "family": "phi", "restriction": null}
//              kinds: geometric (C, rho), polynomial (C, gamma),
//              m-dependent (m), tabulated (values)
//   joint      JSON: {"N": n, "weights": [...]}
//   table      binary: "BCJT0001" then 2^N little-endian IEEE doubles.
//
// CSV readers skip blank lines and lines starting with '#'. All parse
// failures throw Error(kParse) naming the source.

#ifndef MIXBOUND_IO_H_
#define MIXBOUND_IO_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "mixbound/core.h"
#include "mixbound/models.h"

namespace mixbound {

using Json = nlohmann::ordered_json;

MarginalSequence ParseMarginalsCsv(std::string_view text,
                                   std::string_view source = "<csv>");
MarginalSequence ParseMarginalsJson(const Json& doc,
                                    std::string_view source = "<json>");
// Dispatches on the ".json" extension; anything else is CSV.
MarginalSequence LoadMarginals(const std::filesystem::path& path);

// N defaults to the largest index present.
IntersectionBand ParseBandCsv(std::string_view text, std::optional<int> n,
                              std::string_view source = "<csv>");
IntersectionBand ParseBandJson(const Json& doc, std::optional<int> n,
                               std::string_view source = "<json>");
IntersectionBand LoadBand(const std::filesystem::path& path,
                          std::optional<int> n = std::nullopt);

MixingProfile ParseProfileJson(const Json& doc,
                               std::string_view source = "<json>");
MixingProfile LoadProfile(const std::filesystem::path& path);
Json ProfileToJson(const MixingProfile& profile);

Json JointTableToJson(const JointTableModel& table);
JointTableModel JointTableFromJson(const Json& doc,
                                   std::string_view source = "<json>");
std::vector<std::uint8_t> JointTableToBinary(const JointTableModel& table);
JointTableModel JointTableFromBinary(const std::vector<std::uint8_t>& bytes,
                                     std::string_view source = "<binary>");
// Binary if the file starts with the "BCJT0001" magic, JSON otherwise.
JointTableModel LoadJointTable(const std::filesystem::path& path);
void SaveJointTable(const JointTableModel& table,
                    const std::filesystem::path& path, bool binary);

// {"bound", "exponent", "L", "residuals", "clipped", "form", "notes"}.
Json BoundReportToJson(const BoundReport& report);

std::string ReadTextFile(const std::filesystem::path& path);

}  // namespace mixbound

#endif  // MIXBOUND_IO_H_
