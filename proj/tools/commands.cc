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

#include "commands.h"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <optional>
#include <random>
#include <set>

#include "CLI11.hpp"
#include "mixbound/bounds.h"
#include "mixbound/io.h"
#include "mixbound/models.h"
#include "mixbound/montecarlo.h"
#include "mixbound/validity.h"

namespace mixbound::cli {
namespace {

namespace fs = std::filesystem;

// Input problem attributable to a flag or file; maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// FNV-1a, 64 bit. Only used to fingerprint inputs in reports.
class Digest {
 public:
  void Add(std::string_view bytes) {
    for (unsigned char c : bytes) {
      hash_ ^= c;
      hash_ *= 0x100000001b3ULL;
    }
    hash_ ^= 0xff;  // field separator
    hash_ *= 0x100000001b3ULL;
  }
  std::string Hex() const { return fmt::format("fnv1a64:{:016x}", hash_); }

 private:
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

struct CommonFlags {
  bool json = false;
  bool timing = false;
  std::string out_path;
};

void AddCommonFlags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_flag("--json", flags.json, "Print the full JSON report");
  cmd->add_flag("--timing", flags.timing, "Include wall-clock duration in the JSON report");
  cmd->add_option("--out", flags.out_path,
                  "Also write the JSON report to this file (relative paths resolve "
                  "against $MIXBOUND_OUTPUT_DIR when set)");
}

class ReportWriter {
 public:
  ReportWriter(std::string command, const CommonFlags& flags)
      : flags_(flags), start_(std::chrono::steady_clock::now()) {
    report_["command"] = command;
    digest_.Add(command);
  }

  void AddInput(std::string_view bytes) { digest_.Add(bytes); }
  Json& report() { return report_; }

  void Emit(std::ostream& out, const std::string& human) {
    Json full;
    full["command"] = report_["command"];
    full["inputs_digest"] = digest_.Hex();
    for (auto it = report_.begin(); it != report_.end(); ++it) {
      if (it.key() != "command") full[it.key()] = it.value();
    }
    if (flags_.timing) {
      const auto elapsed = std::chrono::steady_clock::now() - start_;
      full["duration_ms"] =
          std::chrono::duration<double, std::milli>(elapsed).count();
    }
    if (flags_.json) {
      out << full.dump(2) << '\n';
    } else {
      out << human;
    }
    if (!flags_.out_path.empty()) {
      fs::path path(flags_.out_path);
      if (path.is_relative()) {
        if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir) {
          path = fs::path(dir) / path;
        }
      }
      std::ofstream file(path);
      if (!file) throw UsageError("--out: cannot write " + path.string());
      file << full.dump(2) << '\n';
    }
  }

 private:
  const CommonFlags& flags_;
  std::chrono::steady_clock::time_point start_;
  Json report_;
  Digest digest_;
};

std::string Join(const std::vector<std::string>& args) {
  std::string s = "mixbound";
  for (const auto& a : args) s += " " + a;
  return s;
}

// Wraps library failures with the flag or file they came from.
template <typename Fn>
auto Guard(const std::string& what, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    throw UsageError(what + ": " + e.what());
  }
}

Json NamedReport(const std::string& name, const BoundReport& report) {
  Json j;
  j["name"] = name;
  const Json body = BoundReportToJson(report);
  for (auto it = body.begin(); it != body.end(); ++it) j[it.key()] = it.value();
  return j;
}

std::string Describe(const std::string& name, const BoundReport& r) {
  std::string s = fmt::format("{}: bound {:.6f}", name, r.bound);
  if (r.exponent) s += fmt::format("  exponent {:.6g}", *r.exponent);
  if (r.spacing) s += fmt::format("  L {}", *r.spacing);
  s += fmt::format("  form {}{}\n", r.form, r.clipped ? "  (clipped)" : "");
  for (const auto& [k, v] : r.residuals) s += fmt::format("  {} = {:.6g}\n", k, v);
  for (const auto& note : r.notes) s += fmt::format("  note: {}\n", note);
  return s;
}

// ---------------------------------------------------------------- bound

struct BoundFlags {
  std::string kind;
  std::string marginals;
  std::optional<double> uniform;
  std::optional<int> n;
  std::string profile;
  std::string profile_json;
  std::string band;
  std::optional<int> spacing;
  int shift = 0;
  std::optional<int> threshold;
  std::optional<int> phi_index;
  bool weighted = false;
  std::optional<double> c;
  std::optional<double> rho;
  std::optional<double> gamma;
  std::optional<double> theta;
  std::optional<double> total_mass;
  CommonFlags common;
};

const std::vector<std::string> kBoundKinds = {
    "phi",         "phi-opt",      "alpha",        "alpha-lower-mass",
    "window-phi",  "window-alpha", "second-order", "chung-erdos",
    "geom-phi",    "poly-alpha"};

void SetupBound(CLI::App& app, BoundFlags& f) {
  auto* cmd = app.add_subcommand("bound", "Compute one lower bound");
  cmd->add_option("kind", f.kind, "Bound to compute")
      ->required()
      ->check(CLI::IsMember(kBoundKinds));
  cmd->add_option("--marginals", f.marginals, "Marginals file (.csv or .json)");
  cmd->add_option("--uniform", f.uniform, "Constant marginal p (with --N)");
  cmd->add_option("--N", f.n, "Number of events");
  cmd->add_option("--profile", f.profile, "Mixing profile JSON file");
  cmd->add_option("--profile-json", f.profile_json, "Mixing profile as inline JSON");
  cmd->add_option("--band", f.band, "Pairwise intersections file (.csv or .json)");
  cmd->add_option("--L", f.spacing, "Spacing parameter L");
  cmd->add_option("--i", f.shift, "Window shift i");
  cmd->add_option("--n", f.threshold, "Window mass threshold n");
  cmd->add_option("--phi-index", f.phi_index, "Override for Phi(i + n)");
  cmd->add_flag("--weighted", f.weighted, "Use the weighted local overlap");
  cmd->add_option("--C", f.c, "Envelope constant C");
  cmd->add_option("--rho", f.rho, "Geometric rate rho");
  cmd->add_option("--gamma", f.gamma, "Polynomial rate gamma");
  cmd->add_option("--theta", f.theta, "Spacing exponent theta (default 2/(gamma+2))");
  cmd->add_option("--SN", f.total_mass, "Total mass S_N");
  AddCommonFlags(cmd, f.common);
}

template <typename T>
T Need(const std::optional<T>& v, const char* flag, const std::string& kind) {
  if (!v) throw UsageError(std::string(flag) + " is required for bound " + kind);
  return *v;
}

MarginalSequence ReadMarginals(const BoundFlags& f, ReportWriter& w) {
  if (!f.marginals.empty()) {
    const std::string what = "--marginals " + f.marginals;
    return Guard(what, [&] {
      w.AddInput(ReadTextFile(f.marginals));
      return LoadMarginals(f.marginals);
    });
  }
  if (f.uniform) {
    const int n = Need(f.n, "--N", f.kind);
    if (n < 1) throw UsageError("--N must be >= 1");
    return Guard("--uniform", [&] {
      return MarginalSequence::Uniform(*f.uniform, static_cast<std::size_t>(n));
    });
  }
  throw UsageError("--marginals or --uniform is required for bound " + f.kind);
}

MixingProfile ReadProfile(const BoundFlags& f, ReportWriter& w) {
  if (!f.profile.empty()) {
    return Guard("--profile " + f.profile, [&] {
      w.AddInput(ReadTextFile(f.profile));
      return LoadProfile(f.profile);
    });
  }
  if (!f.profile_json.empty()) {
    return Guard("--profile-json", [&] {
      w.AddInput(f.profile_json);
      Json doc;
      try {
        doc = Json::parse(f.profile_json);
      } catch (const Json::exception& e) {
        throw Error(ErrorCode::kParse, e.what());
      }
      return ParseProfileJson(doc);
    });
  }
  throw UsageError("--profile or --profile-json is required for bound " + f.kind);
}

int RunBound(const BoundFlags& f, const std::string& command, std::ostream& out) {
  ReportWriter writer(command, f.common);
  BoundReport report;
  const std::string& k = f.kind;
  const std::string context = "bound " + k;
  if (k == "poly-alpha") {
    const double c = Need(f.c, "--C", k);
    const double gamma = Need(f.gamma, "--gamma", k);
    if (f.total_mass) {
      const int n = Need(f.n, "--N", k);
      report = Guard(context, [&] {
        return f.theta ? PolyAlphaBound(*f.total_mass, n, c, gamma, *f.theta)
                       : PolyAlphaBound(*f.total_mass, n, c, gamma);
      });
    } else {
      const MarginalSequence m = ReadMarginals(f, writer);
      report = Guard(context, [&] { return PolyAlphaBound(m, c, gamma, f.theta); });
    }
  } else if (k == "geom-phi") {
    const MarginalSequence m = ReadMarginals(f, writer);
    const double c = f.c.value_or(1.0);
    const double rho = Need(f.rho, "--rho", k);
    report = Guard(context, [&] { return GeomPhiBound(m, c, rho); });
  } else if (k == "chung-erdos") {
    const MarginalSequence m = ReadMarginals(f, writer);
    if (f.band.empty()) throw UsageError("--band is required for bound " + k);
    const IntersectionBand band = Guard("--band " + f.band, [&] {
      writer.AddInput(ReadTextFile(f.band));
      auto b = LoadBand(f.band, static_cast<int>(m.size()));
      b.CheckAgainst(m);
      return b;
    });
    report = Guard(context, [&] { return ChungErdosBound(m, band); });
  } else {
    const MarginalSequence m = ReadMarginals(f, writer);
    const MixingProfile profile = ReadProfile(f, writer);
    if (k == "phi") {
      const int l = Need(f.spacing, "--L", k);
      report = Guard(context, [&] { return PhiBound(m, profile, l); });
    } else if (k == "phi-opt") {
      report = Guard(context, [&] { return PhiOptimize(m, profile); });
    } else if (k == "alpha") {
      const int l = Need(f.spacing, "--L", k);
      report = Guard(context, [&] { return AlphaBound(m, profile, l); });
    } else if (k == "alpha-lower-mass") {
      const int l = Need(f.spacing, "--L", k);
      report = Guard(context, [&] { return AlphaLowerMassBound(m, profile, l); });
    } else if (k == "window-phi" || k == "window-alpha") {
      const auto want = k == "window-phi" ? CoefficientFamily::kPhi
                                          : CoefficientFamily::kAlpha;
      if (profile.family() != want) {
        throw UsageError("--profile: bound " + k + " needs a " +
                         std::string(FamilyName(want)) + " profile");
      }
      const int l = Need(f.spacing, "--L", k);
      const int n = Need(f.threshold, "--n", k);
      report = Guard(context, [&] {
        return WindowBound(m, profile, f.shift, n, l, f.phi_index);
      });
    } else if (k == "second-order") {
      const int l = Need(f.spacing, "--L", k);
      if (f.band.empty()) throw UsageError("--band is required for bound " + k);
      const IntersectionBand band = Guard("--band " + f.band, [&] {
        writer.AddInput(ReadTextFile(f.band));
        auto b = LoadBand(f.band, static_cast<int>(m.size()));
        b.CheckAgainst(m);
        return b;
      });
      report = Guard(context, [&] {
        return SecondOrderBound(m, band, profile, l, f.weighted);
      });
    }
  }
  writer.report()["reports"] = Json::array({NamedReport(k, report)});
  writer.report()["reference"] = Json{{"exact", nullptr}, {"monte_carlo", nullptr}};
  writer.Emit(out, Describe(k, report));
  return kExitOk;
}

// --------------------------------------------------------- verify-table

struct TableRow {
  double a;
  double b;
  int n;
  int exact_digits;
  std::string exact;
  int l0;
  std::string prop;
  int l_opt;
  std::string b_opt;
};

// Two-state chain rows: (a, b, N) with the expected rounded cells.
const TableRow kPublishedRows[] = {
    {0.20, 0.30, 50, 5, "0.99999", 2, "0.964", 2, "0.990"},
    {0.05, 0.15, 100, 3, "0.995", 9, "0.713", 11, "0.779"},
};

int RunVerifyTable(const CommonFlags& flags, const std::string& command,
                   std::ostream& out) {
  ReportWriter writer(command, flags);
  Json rows = Json::array();
  Json reports = Json::array();
  std::vector<std::string> mismatches;
  std::string human =
      "(a, b, N)            exact     L0  Prop.   (L_opt, B_opt)  status\n";
  for (const TableRow& row : kPublishedRows) {
    const Markov2Model model(row.a, row.b, row.n);
    const MarginalSequence marginals = model.Marginals();
    const double rho = std::abs(model.lambda());
    const BoundReport prop = GeomPhiBound(marginals, 1.0, rho);
    const BoundReport opt = PhiOptimize(
        marginals, MixingProfile::Geometric(1.0, rho, CoefficientFamily::kPhi));
    const std::string label = fmt::format("({:.2f}, {:.2f}, {})", row.a, row.b, row.n);

    struct Cell {
      std::string name;
      std::string computed;
      std::string expected;
    };
    const std::vector<Cell> cells = {
        {"exact", RoundHalfEven(model.ExactUnion(), row.exact_digits), row.exact},
        {"L0", std::to_string(*prop.spacing), std::to_string(row.l0)},
        {"prop", RoundHalfEven(prop.bound, 3), row.prop},
        {"L_opt", std::to_string(*opt.spacing), std::to_string(row.l_opt)},
        {"B_opt", RoundHalfEven(opt.bound, 3), row.b_opt},
    };
    bool row_ok = true;
    Json cell_json = Json::array();
    for (const Cell& c : cells) {
      const bool ok = c.computed == c.expected;
      row_ok = row_ok && ok;
      if (!ok) {
        mismatches.push_back(fmt::format("{} {}: computed {} expected {}", label,
                                         c.name, c.computed, c.expected));
      }
      cell_json.push_back(Json{{"cell", c.name},
                               {"computed", c.computed},
                               {"expected", c.expected},
                               {"match", ok}});
    }
    rows.push_back(Json{{"a", row.a},
                        {"b", row.b},
                        {"N", row.n},
                        {"exact", model.ExactUnion()},
                        {"cells", cell_json}});
    reports.push_back(NamedReport(label + " geom-phi", prop));
    reports.push_back(NamedReport(label + " phi-opt", opt));
    human += fmt::format("{:<20} {:<9} {:<3} {:<7} ({}, {})       {}\n", label,
                         cells[0].computed, cells[1].computed, cells[2].computed,
                         cells[3].computed, cells[4].computed,
                         row_ok ? "match" : "MISMATCH");
  }
  for (const auto& m : mismatches) human += "mismatch: " + m + "\n";
  writer.report()["reports"] = reports;
  writer.report()["reference"] = Json{{"exact", nullptr}, {"monte_carlo", nullptr}};
  writer.report()["table"] = rows;
  writer.report()["summary"] = Json{{"matched", mismatches.empty()},
                                    {"mismatches", mismatches}};
  writer.Emit(out, human);
  return mismatches.empty() ? kExitOk : kExitVerificationFailed;
}

// ------------------------------------------------------------- validate

struct ValidateFlags {
  int models = 200;
  int n_max = 8;
  std::uint64_t seed = 42;
  int max_past = kDefaultMaxPast;
  double concentration = 1.0;
  double fault = 0.0;
  CommonFlags common;
};

constexpr int kValidateMaxEvents = 10;

int RunValidate(const ValidateFlags& f, const std::string& command,
                std::ostream& out) {
  if (f.n_max < 1 || f.n_max > kValidateMaxEvents) {
    throw UsageError(fmt::format("--n-max must lie in 1..{}, got {}",
                                 kValidateMaxEvents, f.n_max));
  }
  if (f.models < 1) throw UsageError("--models must be >= 1");
  if (!(f.concentration > 0.0)) throw UsageError("--concentration must be > 0");
  ReportWriter writer(command, f.common);
  std::mt19937_64 rng(f.seed);
  std::uniform_int_distribution<int> size(1, f.n_max);
  ValidityOptions options;
  options.max_past = f.max_past;
  options.fault = f.fault;

  std::size_t checks = 0;
  std::size_t fallbacks = 0;
  double tightest = std::numeric_limits<double>::infinity();
  std::string tightest_where;
  for (int model = 0; model < f.models; ++model) {
    const JointTableModel table = RandomJointTable(size(rng), rng, f.concentration);
    const ValidityResult r = Guard("validate", [&] { return CheckValidity(table, options); });
    checks += r.checks;
    fallbacks += r.alpha_fallback_lags;
    if (r.tightest_gap < tightest) {
      tightest = r.tightest_gap;
      tightest_where = fmt::format("model {} ({})", model, r.tightest_bound);
    }
    if (!r.violations.empty()) {
      const auto& v = r.violations.front();
      std::string human = fmt::format(
          "VIOLATION in model {} (N = {}): {} {} gives {:.17g} > exact {:.17g}\n"
          "counterexample: {}\n",
          model, table.n(), v.bound, v.setting, v.value, v.exact,
          JointTableToJson(table).dump());
      Json violations = Json::array();
      for (const auto& x : r.violations) {
        violations.push_back(Json{{"bound", x.bound},
                                  {"setting", x.setting},
                                  {"value", x.value},
                                  {"exact", x.exact}});
      }
      writer.report()["reports"] = Json::array();
      writer.report()["reference"] = Json{{"exact", v.exact}, {"monte_carlo", nullptr}};
      writer.report()["summary"] = Json{{"models_checked", model + 1},
                                        {"checks", checks},
                                        {"violations", violations},
                                        {"counterexample", JointTableToJson(table)}};
      writer.Emit(out, human);
      return kExitVerificationFailed;
    }
  }
  writer.report()["reports"] = Json::array();
  writer.report()["reference"] = Json{{"exact", nullptr}, {"monte_carlo", nullptr}};
  writer.report()["summary"] = Json{{"models_checked", f.models},
                                    {"checks", checks},
                                    {"violations", Json::array()},
                                    {"alpha_fallback_lags", fallbacks},
                                    {"tightest_gap", tightest},
                                    {"tightest_at", tightest_where}};
  writer.Emit(out, fmt::format("validated {} models, {} checks, 0 violations\n"
                               "tightest gap {:.3e} at {}\n",
                               f.models, checks, tightest, tightest_where));
  return kExitOk;
}

// -------------------------------------------------------------- compare

struct CompareFlags {
  std::string model = "markov";
  double a = 0.2;
  double b = 0.3;
  int n = 10;
  int m = 1;
  double p = 0.1;
  int q = 10;
  std::string table;
  int l_min = 0;
  int l_max = 5;
  std::uint64_t mc_trials = 0;
  std::optional<std::uint64_t> seed;
  unsigned workers = 1;
  int max_past = kDefaultMaxPast;
  CommonFlags common;
};

struct CompareInputs {
  MarginalSequence marginals;
  MixingProfile phi;
  MixingProfile alpha;
  IntersectionBand band;
  double exact;
  std::optional<McModel> mc_model;
  std::string description;
};

CompareInputs BuildCompareInputs(const CompareFlags& f, ReportWriter& writer) {
  if (f.model == "markov") {
    const Markov2Model model = Guard("--a/--b/--N", [&] { return Markov2Model(f.a, f.b, f.n); });
    const double rho = std::abs(model.lambda());
    MixingProfile phi = rho > 0.0
                            ? MixingProfile::Geometric(1.0, rho, CoefficientFamily::kPhi)
                            : MixingProfile::MDep(0, CoefficientFamily::kPhi);
    MixingProfile alpha = phi.WithFamily(CoefficientFamily::kAlpha);
    return {model.Marginals(), phi, alpha,
            model.PairIntersections(std::max(f.n - 1, 1)), model.ExactUnion(), model,
            fmt::format("Markov chain a={} b={} N={}; alpha uses the phi envelope",
                        f.a, f.b, f.n)};
  }
  if (f.model == "block") {
    const BlockFamily model = Guard("--m/--p/--q", [&] { return BlockFamily(f.m, f.p, f.q); });
    return {model.Marginals(), model.PhiEnvelope(),
            model.PhiEnvelope().WithFamily(CoefficientFamily::kAlpha),
            model.PairIntersections(), model.ExactUnion(), model,
            fmt::format("block family m={} p={} q={} (N={})", f.m, f.p, f.q, model.n())};
  }
  if (f.table.empty()) throw UsageError("--table is required for --model table");
  return Guard("--table " + f.table, [&]() -> CompareInputs {
    const JointTableModel table = LoadJointTable(f.table);
    const auto bytes = ReadTextFile(f.table);
    writer.AddInput(bytes);
    std::vector<int> all(static_cast<std::size_t>(table.n()));
    std::iota(all.begin(), all.end(), 1);
    return {TableMarginals(table),
            ExactRestrictedProfile(table, CoefficientFamily::kPhi, f.max_past),
            ExactRestrictedProfile(table, CoefficientFamily::kAlpha, f.max_past),
            PairwiseIntersections(table), JointTableUnion(table, all), std::nullopt,
            fmt::format("joint table N={} with exact restricted coefficients",
                        table.n())};
  });
}

int RunCompare(const CompareFlags& f, const std::string& command, std::ostream& out) {
  static const std::set<std::string> kModels = {"markov", "block", "table"};
  if (!kModels.count(f.model)) throw UsageError("--model must be markov, block or table");
  if (f.l_min < 0 || f.l_max < f.l_min) throw UsageError("--L-min/--L-max must satisfy 0 <= min <= max");
  if (f.mc_trials > 0 && !f.seed) throw UsageError("--seed is required with --mc-trials");
  ReportWriter writer(command, f.common);
  const CompareInputs in = BuildCompareInputs(f, writer);

  std::optional<McEstimate> mc;
  if (f.mc_trials > 0) {
    if (!in.mc_model) throw UsageError("--mc-trials needs a markov or block model");
    mc = Guard("--mc-trials", [&] {
      return EstimateUnion(*in.mc_model, McConfig{f.mc_trials, *f.seed, f.workers});
    });
  }

  const BoundReport ce = ChungErdosBound(in.marginals, in.band);
  Json rows = Json::array();
  Json reports = Json::array();
  bool all_valid = ce.bound <= in.exact + 1e-12;
  std::string human = in.description + "\n";
  human += fmt::format("exact union {:.6f}", in.exact);
  if (mc) human += fmt::format("   monte carlo {:.6f} +/- {:.2e}", mc->estimate, mc->std_error);
  human += "\n   L  phi        alpha      second     chung-erdos  largest\n";
  reports.push_back(NamedReport("chung-erdos", ce));
  for (int l = f.l_min; l <= f.l_max; ++l) {
    const BoundReport phi = PhiBound(in.marginals, in.phi, l);
    const BoundReport alpha = AlphaBound(in.marginals, in.alpha, l);
    std::optional<BoundReport> second;
    if (l >= 2) second = SecondOrderBound(in.marginals, in.band, in.phi, l, false);
    std::vector<std::pair<std::string, double>> cols = {
        {"phi", phi.bound}, {"alpha", alpha.bound}, {"chung-erdos", ce.bound}};
    if (second) cols.emplace_back("second-order", second->bound);
    const auto largest = std::max_element(
        cols.begin(), cols.end(), [](const auto& x, const auto& y) { return x.second < y.second; });
    for (const auto& [name, v] : cols) all_valid = all_valid && v <= in.exact + 1e-12;
    rows.push_back(Json{{"L", l},
                        {"phi", phi.bound},
                        {"alpha", alpha.bound},
                        {"second_order", second ? Json(second->bound) : Json(nullptr)},
                        {"chung_erdos", ce.bound},
                        {"exact", in.exact},
                        {"largest", largest->first}});
    reports.push_back(NamedReport(fmt::format("phi L={}", l), phi));
    reports.push_back(NamedReport(fmt::format("alpha L={}", l), alpha));
    if (second) reports.push_back(NamedReport(fmt::format("second-order L={}", l), *second));
    human += fmt::format("{:>4}  {:<9.6f}  {:<9.6f}  {:<9}  {:<11.6f}  {}\n", l, phi.bound,
                         alpha.bound, second ? fmt::format("{:.6f}", second->bound) : "-",
                         ce.bound, largest->first);
  }
  human += all_valid ? "all reported bounds are valid lower bounds for the exact union\n"
                     : "SOME BOUND EXCEEDS THE EXACT UNION\n";
  Json mc_json = nullptr;
  if (mc) {
    mc_json = Json{{"estimate", mc->estimate},
                   {"stderr", mc->std_error},
                   {"ci95", Json::array({mc->ci_low, mc->ci_high})},
                   {"trials", mc->trials},
                   {"seed", *f.seed}};
  }
  writer.report()["reports"] = reports;
  writer.report()["reference"] = Json{{"exact", in.exact}, {"monte_carlo", mc_json}};
  writer.report()["rows"] = rows;
  writer.report()["summary"] = Json{{"all_valid", all_valid}};
  writer.Emit(out, human);
  return all_valid ? kExitOk : kExitVerificationFailed;
}

}  // namespace

std::string RoundHalfEven(double x, int digits) {
  const double scaled = std::nearbyint(x * std::pow(10.0, digits));  // FE_TONEAREST
  const long long units = static_cast<long long>(scaled);
  if (digits == 0) return std::to_string(units);
  const long long scale = static_cast<long long>(std::llround(std::pow(10.0, digits)));
  const long long whole = units / scale;
  const long long frac = std::llabs(units % scale);
  return fmt::format("{}{}.{:0{}d}", units < 0 && whole == 0 ? "-" : "", whole, frac, digits);
}

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite-sample lower bounds for unions of weakly dependent events",
               "mixbound"};
  app.require_subcommand(1);

  BoundFlags bound;
  SetupBound(app, bound);

  CommonFlags table_flags;
  auto* verify = app.add_subcommand("verify-table",
                                    "Recompute the two-state Markov chain table");
  AddCommonFlags(verify, table_flags);

  ValidateFlags validate;
  auto* val = app.add_subcommand("validate",
                                 "Check every bound against random exact joint tables");
  val->add_option("--models", validate.models, "Number of random tables");
  val->add_option("--n-max", validate.n_max, "Largest N (<= 10)");
  val->add_option("--seed", validate.seed, "Seed for the table generator");
  val->add_option("--max-past", validate.max_past,
                  "Enumeration cap for exact alpha (2^max-past atoms)");
  val->add_option("--concentration", validate.concentration,
                  "Dirichlet concentration (1 = uniform on the simplex)");
  val->add_option("--inject-fault", validate.fault,
                  "Add this amount to every bound before checking");
  AddCommonFlags(val, validate.common);

  CompareFlags compare;
  auto* cmp = app.add_subcommand("compare", "Tabulate all bounds against the exact union");
  cmp->add_option("--model", compare.model, "markov, block or table");
  cmp->add_option("--a", compare.a, "Markov P(0 -> 1)");
  cmp->add_option("--b", compare.b, "Markov P(1 -> 0)");
  cmp->add_option("--N", compare.n, "Markov chain length");
  cmp->add_option("--m", compare.m, "Block family dependence range");
  cmp->add_option("--p", compare.p, "Block family probability");
  cmp->add_option("--q", compare.q, "Block family block count");
  cmp->add_option("--table", compare.table, "Joint table file (JSON or BCJT0001)");
  cmp->add_option("--L-min", compare.l_min, "Smallest spacing");
  cmp->add_option("--L-max", compare.l_max, "Largest spacing");
  cmp->add_option("--mc-trials", compare.mc_trials, "Monte Carlo trials (0 = off)");
  cmp->add_option("--seed", compare.seed, "Monte Carlo seed (required with --mc-trials)");
  cmp->add_option("--workers", compare.workers, "Monte Carlo worker threads");
  cmp->add_option("--max-past", compare.max_past, "Enumeration cap for exact alpha");
  AddCommonFlags(cmp, compare.common);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "mixbound: " << e.what() << '\n';
    return kExitUsage;
  }

  const std::string command = Join(args);
  try {
    if (*app.get_subcommand("bound")) return RunBound(bound, command, out);
    if (*verify) return RunVerifyTable(table_flags, command, out);
    if (*val) return RunValidate(validate, command, out);
    if (*cmp) return RunCompare(compare, command, out);
  } catch (const UsageError& e) {
    err << "mixbound: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "mixbound: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace mixbound::cli
