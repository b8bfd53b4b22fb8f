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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "mixbound/bounds.h"
#include "mixbound/models.h"
#include "mixbound/montecarlo.h"
#include "mixbound/validity.h"

namespace mixbound {
namespace {

using F = CoefficientFamily;

struct Outcome {
  bool pass;
  std::string detail;
};

double Seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Outcome TableReproduction() {
  const auto start = std::chrono::steady_clock::now();
  struct Row {
    double a, b;
    int n;
    double exact, exact_tol;
    int l0;
    double prop;
    int l_opt;
    double b_opt;
  };
  const Row rows[] = {{0.20, 0.30, 50, 0.99999, 5e-6, 2, 0.964, 2, 0.990},
                      {0.05, 0.15, 100, 0.995, 5e-4, 9, 0.713, 11, 0.779}};
  bool ok = true;
  std::string detail;
  for (const Row& row : rows) {
    const Markov2Model model(row.a, row.b, row.n);
    const auto m = model.Marginals();
    const double rho = std::abs(model.lambda());
    const auto prop = GeomPhiBound(m, 1.0, rho);
    const auto opt = PhiOptimize(m, MixingProfile::Geometric(1.0, rho, F::kPhi));
    const bool row_ok = std::abs(model.ExactUnion() - row.exact) <= row.exact_tol &&
                        prop.spacing == row.l0 && std::abs(prop.bound - row.prop) <= 5e-4 &&
                        opt.spacing == row.l_opt && std::abs(opt.bound - row.b_opt) <= 5e-4;
    ok = ok && row_ok;
    detail += fmt::format("({},{},{}): exact {:.6f} L0 {} prop {:.4f} opt ({}, {:.4f}); ",
                          row.a, row.b, row.n, model.ExactUnion(), *prop.spacing, prop.bound,
                          *opt.spacing, opt.bound);
  }
  const double t = Seconds(start);
  ok = ok && t < 1.0;
  return {ok, detail + fmt::format("{:.4f} s", t)};
}

Outcome ValiditySuite() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20260101);
  std::uniform_int_distribution<int> size(1, 8);
  std::size_t checks = 0;
  std::size_t violations = 0;
  std::string first;
  for (int model = 0; model < 200; ++model) {
    const auto r = CheckValidity(RandomJointTable(size(rng), rng));
    checks += r.checks;
    violations += r.violations.size();
    if (first.empty() && !r.violations.empty()) {
      first = " first: " + r.violations.front().bound + " " + r.violations.front().setting;
    }
  }
  const double t = Seconds(start);
  return {violations == 0 && t < 60.0,
          fmt::format("200 tables, {} checks, {} violations, {:.2f} s{}", checks, violations, t,
                      first)};
}

Outcome MDependentReduction() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> len(1, 30);
  double worst = 0.0;
  for (int seq = 0; seq < 50; ++seq) {
    std::vector<double> p(static_cast<std::size_t>(len(rng)));
    for (double& x : p) x = u(rng);
    long double s = 0.0L;
    for (double x : p) s += x;
    const MarginalSequence marginals(p);
    for (int m = 0; m <= 4; ++m) {
      std::vector<double> table(static_cast<std::size_t>(m) + 1, 1.0);
      table.back() = 0.0;  // lags 1..m carry 1, lag m+1 onward 0
      const auto r = PhiBound(marginals, MixingProfile::Table(table, F::kPhi), m);
      worst = std::max(worst, std::abs(*r.exponent - static_cast<double>(s / (m + 1))));
    }
  }
  return {worst <= 1e-14, fmt::format("max |exponent - S_N/(m+1)| = {:.2e}", worst)};
}

Outcome Sharpness() {
  const auto grid = LogSpacedGrid(1e-4, 0.5, 33);
  bool ok = grid.size() == 33;
  std::string detail;
  for (int m = 0; m <= 3; ++m) {
    const double c = 1.0 / (m + 1);
    const auto clean = SharpnessScan({m, c, grid});
    const auto witness = SharpnessScan({m, c + 0.01, grid});
    ok = ok && !clean.violated && witness.violated;
    detail += fmt::format("m={}: clean={} witness={}; ", m, !clean.violated,
                          witness.witness ? fmt::format("{:.3g}", *witness.witness) : "none");
  }
  const BlockFamily block(2, 1e-4, 10000);
  const double gap = std::abs(block.ExactUnion() - (-std::expm1(-block.TotalMass() / 3)));
  ok = ok && gap <= 1e-3;
  return {ok, detail + fmt::format("block gap {:.2e}", gap)};
}

// The cap bounds the smaller side of each split. A full sup over k for N = 8
// meets a 4-event/4-event split, so the cap must be 4 (2^16 events).
constexpr int kHierarchyMaxPast = 4;

Outcome HierarchyAndEnvelope() {
  std::mt19937_64 rng(55);
  std::uniform_int_distribution<int> size(2, 8);
  double worst_hierarchy = -1.0;
  int lags = 0;
  for (int t = 0; t < 50; ++t) {
    const auto table = RandomJointTable(size(rng), rng);
    for (int lag = 1; lag < table.n(); ++lag) {
      const double alpha = ExactRestrictedCoefficient(table, F::kAlpha, lag, kHierarchyMaxPast);
      const double phi = ExactRestrictedCoefficient(table, F::kPhi, lag, kHierarchyMaxPast);
      worst_hierarchy = std::max(worst_hierarchy, alpha - phi);
      ++lags;
    }
  }
  double worst_envelope = -1.0;
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      const double a = 0.1 + 0.2 * i;
      const double b = 0.1 + 0.2 * j;
      const Markov2Model model(a, b, 8);
      const auto table = MarkovToJointTable(model);
      for (int lag = 1; lag <= 3; ++lag) {
        worst_envelope =
            std::max(worst_envelope, ExactRestrictedCoefficient(table, F::kPhi, lag) -
                                         std::pow(std::abs(1.0 - a - b), lag));
      }
    }
  }
  // Both sides are computed in floating point; allow round-off only.
  const bool ok = worst_hierarchy <= 1e-15 && worst_envelope <= 1e-12;
  return {ok, fmt::format("{} lags (max_past {}), max(alpha - phi) = {:.2e}; max(phi - |1-a-b|^n) = {:.2e}",
                          lags, kHierarchyMaxPast, worst_hierarchy, worst_envelope)};
}

Outcome LemmaProperties() {
  int classes = 0;
  bool product_ok = true;
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      const Markov2Model model(0.1 + 0.2 * i, 0.1 + 0.2 * j, 10);
      const auto table = MarkovToJointTable(model);
      const auto marginals = model.Marginals();
      for (int l = 0; l < 10; ++l) {
        const double phi = ExactRestrictedCoefficient(table, F::kPhi, l + 1) + 1e-12;
        for (int r = 1; r <= l + 1; ++r) {
          const auto cls = SpacedPartition(10, l, r);
          double product = 1.0;
          for (int k : cls) product *= std::min(1.0, 1.0 - marginals.at(k) + phi);
          product_ok = product_ok && NonoccurrenceProbability(table, cls) <= product;
          ++classes;
        }
      }
    }
  }
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> len(1, 32);
  bool exp_ok = true;
  for (int v = 0; v < 10000; ++v) {
    double prod = 1.0;
    double sum = 0.0;
    for (int k = len(rng); k > 0; --k) {
      const double x = u(rng);
      prod *= 1.0 - x;
      sum += x;
    }
    exp_ok = exp_ok && prod <= std::exp(-sum);
  }
  return {product_ok && exp_ok,
          fmt::format("within-class product on {} classes: {}; prod <= exp on 10^4 vectors: {}",
                      classes, product_ok ? "holds" : "FAILS", exp_ok ? "holds" : "FAILS")};
}

Outcome MonteCarlo() {
  const Markov2Model model(0.2, 0.3, 50);
  const std::uint64_t seed = 20260416;
  const auto one = EstimateUnion(model, {1000000, seed, 1});
  const auto two = EstimateUnion(model, {1000000, seed, 2});
  const auto eight = EstimateUnion(model, {1000000, seed, 8});
  const double target = 0.9999915;
  const double z = std::abs(one.estimate - target) / one.std_error;
  const bool identical = one.hits == two.hits && one.hits == eight.hits &&
                         one.estimate == eight.estimate && one.std_error == eight.std_error;
  return {z <= 3.0 && identical,
          fmt::format("estimate {:.7f} se {:.2e} ({:.2f} se from {}); hits 1/2/8 workers "
                      "{}/{}/{}",
                      one.estimate, one.std_error, z, target, one.hits, two.hits, eight.hits)};
}

Outcome SecondOrderComparison() {
  const Markov2Model model(0.2, 0.3, 10);
  const auto table = MarkovToJointTable(model);
  const auto marginals = TableMarginals(table);
  const auto pairs = PairwiseIntersections(table);
  std::vector<int> all(10);
  std::iota(all.begin(), all.end(), 1);
  const double exact = JointTableUnion(table, all);
  const auto phi = ExactRestrictedProfile(table, F::kPhi);
  const auto second = SecondOrderBound(marginals, pairs, phi, 3, false);
  bool ok = second.bound <= exact + 1e-12;
  std::string detail = fmt::format("L=3 bound {:.6f} <= exact {:.6f}; ", second.bound, exact);

  const auto zero = MixingProfile::MDep(0, F::kPhi);
  const double s = marginals.total();
  int predicted = 0;
  for (int l = 2; l <= 9; ++l) {
    const double t = LocalOverlap(pairs, l, false);
    const double diff = *SecondOrderBound(marginals, pairs, zero, l, false).exponent -
                        *PhiBound(marginals, zero, l).exponent;
    const bool criterion = t < (static_cast<double>(l - 1) / (l + 1)) * s;
    if (criterion == (diff > 0.0)) ++predicted;
    if (l == 3) {
      detail += fmt::format("L=3 T={:.4f} vs {:.4f}, exponent diff {:+.4f}; ", t,
                            (2.0 / 4.0) * s, diff);
    }
  }
  ok = ok && predicted == 8;
  return {ok, detail + fmt::format("criterion predicts sign at {}/8 spacings", predicted)};
}

}  // namespace
}  // namespace mixbound

int main() {
  using mixbound::Outcome;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"table-reproduction", mixbound::TableReproduction},
      {"validity-suite", mixbound::ValiditySuite},
      {"m-dependent-reduction", mixbound::MDependentReduction},
      {"sharpness", mixbound::Sharpness},
      {"coefficient-hierarchy-and-envelope", mixbound::HierarchyAndEnvelope},
      {"lemma-properties", mixbound::LemmaProperties},
      {"monte-carlo", mixbound::MonteCarlo},
      {"second-order-comparison", mixbound::SecondOrderComparison},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    fmt::print("{} [{}] {}: {}\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
               o.detail);
  }
  fmt::print("{}/{} criteria passed\n", criteria.size() - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
