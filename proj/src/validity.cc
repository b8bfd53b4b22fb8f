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

#include "mixbound/validity.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mixbound/bounds.h"

namespace mixbound {
namespace {

class Checker {
 public:
  Checker(const ValidityOptions& options, ValidityResult& result)
      : options_(options), result_(result) {}

  void Check(const std::string& name, const std::string& setting,
             const BoundReport& report, double exact) {
    const double value = report.bound + options_.fault;
    ++result_.checks;
    const double gap = exact - value;
    if (gap < result_.tightest_gap) {
      result_.tightest_gap = gap;
      result_.tightest_bound = setting.empty() ? name : name + " " + setting;
    }
    if (value > exact + options_.tolerance) {
      result_.violations.push_back({name, setting, value, exact});
    }
  }

 private:
  const ValidityOptions& options_;
  ValidityResult& result_;
};

std::string At(int spacing) { return "L=" + std::to_string(spacing); }

// Smallest C >= 1 with coeff(lag) <= C * envelope(lag) at every lag.
template <typename Envelope>
double FitConstant(const MixingProfile& exact, int n, Envelope&& envelope) {
  double c = 1.0;
  for (int lag = 1; lag < n; ++lag) {
    c = std::max(c, ProfileAt(exact, lag) / envelope(lag));
  }
  // Round up a hair so C * envelope dominates after floating round-off.
  return c * (1.0 + 1e-12);
}

// Exact alpha where the enumeration fits under max_past; elsewhere the exact
// phi, which always dominates alpha.
MixingProfile AlphaWithFallback(const JointTableModel& table,
                                const MixingProfile& phi, int max_past,
                                std::size_t& fallbacks) {
  const int n = table.n();
  std::vector<double> values(static_cast<std::size_t>(std::max(n - 1, 1)), 0.0);
  for (int lag = 1; lag < n; ++lag) {
    try {
      values[lag - 1] = ExactRestrictedCoefficient(
          table, CoefficientFamily::kAlpha, lag, max_past);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kPastTooLarge) throw;
      values[lag - 1] = ProfileAt(phi, lag);
      ++fallbacks;
    }
  }
  for (int i = static_cast<int>(values.size()) - 2; i >= 0; --i) {
    values[i] = std::max(values[i], values[i + 1]);
  }
  return MixingProfile::Table(std::move(values), CoefficientFamily::kAlpha, n);
}

}  // namespace

ValidityResult CheckValidity(const JointTableModel& table,
                             const ValidityOptions& options) {
  ValidityResult result;
  Checker check(options, result);

  const int n = table.n();
  const MarginalSequence marginals = TableMarginals(table);
  const IntersectionBand pairs = PairwiseIntersections(table);
  std::vector<int> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), 1);
  const double exact = JointTableUnion(table, all);

  const MixingProfile phi = ExactRestrictedProfile(table, CoefficientFamily::kPhi,
                                                   options.max_past);
  const MixingProfile alpha =
      AlphaWithFallback(table, phi, options.max_past, result.alpha_fallback_lags);
  const int max_spacing = n + 1;  // past N-1 every restricted coefficient is 0
  const bool positive_mass = marginals.min() > 0.0;

  for (int spacing = 0; spacing <= max_spacing; ++spacing) {
    check.Check("phi", At(spacing), PhiBound(marginals, phi, spacing), exact);
    check.Check("alpha", At(spacing), AlphaBound(marginals, alpha, spacing), exact);
    if (positive_mass) {
      check.Check("alpha-lower-mass", At(spacing),
                  AlphaLowerMassBound(marginals, alpha, spacing), exact);
    }
    if (spacing >= 2) {
      check.Check("second-order", At(spacing),
                  SecondOrderBound(marginals, pairs, phi, spacing, false), exact);
      check.Check("second-order-weighted", At(spacing),
                  SecondOrderBound(marginals, pairs, phi, spacing, true), exact);
    }
  }
  check.Check("phi-opt", "", PhiOptimize(marginals, phi), exact);
  check.Check("chung-erdos", "", ChungErdosBound(marginals, pairs), exact);

  // Windows: every shift and every threshold the cumulative mass reaches.
  const auto prefix = marginals.prefix();
  for (int shift = 0; shift < n; ++shift) {
    for (int threshold = 1; shift + threshold <= prefix.back(); ++threshold) {
      const WindowSpec w = MakeWindow(marginals, shift, threshold);
      std::vector<int> window(static_cast<std::size_t>(w.length));
      std::iota(window.begin(), window.end(), shift + 1);
      const double window_exact = JointTableUnion(table, window);
      for (int spacing = 0; spacing <= w.length; ++spacing) {
        const std::string setting = "i=" + std::to_string(shift) +
                                    " n=" + std::to_string(threshold) + " " +
                                    At(spacing);
        check.Check("window-phi", setting,
                    WindowBound(marginals, phi, shift, threshold, spacing),
                    window_exact);
        check.Check("window-alpha", setting,
                    WindowBound(marginals, alpha, shift, threshold, spacing),
                    window_exact);
      }
    }
  }

  // Envelope-based propositions with constants fitted to the exact
  // coefficients so their hypotheses hold.
  if (positive_mass) {
    for (double rho : {0.3, 0.6, 0.9}) {
      const double c = FitConstant(phi, n, [&](int lag) { return std::pow(rho, lag); });
      check.Check("geom-phi", "rho=" + std::to_string(rho),
                  GeomPhiBound(marginals, c, rho), exact);
    }
  }
  if (n >= 2) {
    for (double gamma : {0.5, 1.0, 2.0}) {
      const double c = FitConstant(alpha, n, [&](int lag) {
        return std::pow(static_cast<double>(lag), -gamma);
      });
      for (double theta : {0.25, 0.5, 0.75, 1.0, 2.0 / (gamma + 2.0)}) {
        check.Check("poly-alpha",
                    "gamma=" + std::to_string(gamma) + " theta=" + std::to_string(theta),
                    PolyAlphaBound(marginals.total(), n, c, gamma, theta), exact);
      }
    }
  }
  return result;
}

}  // namespace mixbound
