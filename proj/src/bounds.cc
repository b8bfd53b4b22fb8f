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

#include "mixbound/bounds.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace mixbound {
namespace {

[[noreturn]] void Invalid(const std::string& detail) {
  throw Error(ErrorCode::kInvalidArgument, detail);
}

void RequireFamily(const MixingProfile& profile, CoefficientFamily want,
                   const char* op) {
  if (profile.family() != want) {
    throw Error(ErrorCode::kFamilyMismatch,
                std::string(op) + " needs a " + std::string(FamilyName(want)) +
                    " profile, got " +
                    std::string(FamilyName(profile.family())));
  }
}

void RequireSpacing(int spacing, int min_spacing = 0) {
  if (spacing < min_spacing) {
    Invalid("spacing L must be >= " + std::to_string(min_spacing) + ", got " +
            std::to_string(spacing));
  }
}

// 1 - exp(-x) without cancellation for small x.
double OneMinusExp(double x) { return -std::expm1(-x); }

long long CeilDiv(long long a, long long b) { return (a + b - 1) / b; }

// (sum_k (p_k - c)_+) / (L + 1).
double PhiExponent(const MarginalSequence& marginals, double phi, int spacing) {
  double sum = 0.0;
  for (double p : marginals.probs()) sum += std::max(p - phi, 0.0);
  return sum / static_cast<double>(spacing + 1);
}

BoundReport ExponentialReport(double exponent, int spacing, std::string form) {
  BoundReport r;
  r.exponent = exponent;
  r.bound = OneMinusExp(exponent);
  r.spacing = spacing;
  r.form = std::move(form);
  return r;
}

}  // namespace

BoundReport PhiBound(const MarginalSequence& marginals,
                     const MixingProfile& profile, int spacing) {
  RequireFamily(profile, CoefficientFamily::kPhi, "phi bound");
  RequireSpacing(spacing);
  const double phi = ProfileAt(profile, spacing + 1);
  const double exponent = PhiExponent(marginals, phi, spacing);
  const bool clean = phi <= marginals.min();
  BoundReport r = ExponentialReport(exponent, spacing, clean ? "phi-clean" : "phi-main");
  r.residuals.emplace_back("phi", phi);
  // Mass removed by the per-term positive part.
  r.residuals.emplace_back("penalty",
                           marginals.total() / (spacing + 1) - exponent);
  return r;
}

BoundReport PhiOptimize(const MarginalSequence& marginals,
                        const MixingProfile& profile) {
  RequireFamily(profile, CoefficientFamily::kPhi, "phi optimizer");
  const int n = static_cast<int>(marginals.size());
  int best_spacing = 0;
  double best = -1.0;
  for (int spacing = 0; spacing < n; ++spacing) {
    const double exponent =
        PhiExponent(marginals, ProfileAt(profile, spacing + 1), spacing);
    if (exponent > best) {
      best = exponent;
      best_spacing = spacing;
    }
  }
  BoundReport r = ExponentialReport(best, best_spacing, "phi-opt");
  r.residuals.emplace_back("phi", ProfileAt(profile, best_spacing + 1));
  r.residuals.emplace_back("psi", best);
  if (!profile.restriction()) {
    const double tail = ProfileAt(profile, n + 1);
    if (tail > 0.0) {
      r.notes.push_back("search capped at L = N - 1 = " + std::to_string(n - 1) +
                        " although the ambient profile is positive at lag N + 1");
    }
  }
  return r;
}

BoundReport AlphaBound(const MarginalSequence& marginals,
                       const MixingProfile& profile, int spacing) {
  RequireFamily(profile, CoefficientFamily::kAlpha, "alpha bound");
  RequireSpacing(spacing);
  const double alpha = ProfileAt(profile, spacing + 1);
  const double exponent = marginals.total() / static_cast<double>(spacing + 1);
  const double correction =
      static_cast<double>(CeilDiv(static_cast<long long>(marginals.size()),
                                  spacing + 1)) *
      alpha;
  const double raw = OneMinusExp(exponent) - correction;
  BoundReport r;
  r.exponent = exponent;
  r.spacing = spacing;
  r.form = "alpha-main";
  r.bound = std::max(raw, 0.0);
  r.clipped = raw < 0.0;
  r.residuals.emplace_back("alpha", alpha);
  r.residuals.emplace_back("additive_correction", correction);
  return r;
}

BoundReport AlphaLowerMassBound(const MarginalSequence& marginals,
                                const MixingProfile& profile, int spacing) {
  RequireFamily(profile, CoefficientFamily::kAlpha, "alpha lower-mass bound");
  RequireSpacing(spacing);
  const double p_min = marginals.min();
  if (!(p_min > 0.0)) {
    throw Error(ErrorCode::kZeroLowerMass,
                "alpha lower-mass bound needs min_k p_k > 0");
  }
  const double alpha = ProfileAt(profile, spacing + 1);
  const double exponent = marginals.total() / static_cast<double>(spacing + 1);
  const double correction = alpha / OneMinusExp(p_min);
  const double raw = OneMinusExp(exponent) - correction;
  BoundReport r;
  r.exponent = exponent;
  r.spacing = spacing;
  r.form = "alpha-lower-mass";
  r.bound = std::max(raw, 0.0);
  r.clipped = raw < 0.0;
  r.residuals.emplace_back("alpha", alpha);
  r.residuals.emplace_back("additive_correction", correction);
  r.residuals.emplace_back("p_min", p_min);
  return r;
}

BoundReport WindowBound(const MarginalSequence& marginals,
                        const MixingProfile& profile, int shift, int threshold,
                        int spacing, std::optional<int> phi_override) {
  RequireSpacing(spacing);
  const WindowSpec window = MakeWindow(marginals, shift, threshold, phi_override);
  const double coeff = ProfileAt(profile, spacing + 1);
  const double n = static_cast<double>(window.threshold);
  const double m = static_cast<double>(window.length);
  BoundReport r;
  r.spacing = spacing;
  if (profile.family() == CoefficientFamily::kPhi) {
    const double inner = n - m * coeff;
    r.exponent = std::max(inner, 0.0) / static_cast<double>(spacing + 1);
    r.bound = OneMinusExp(*r.exponent);
    r.clipped = inner < 0.0;
    r.form = "window-phi";
    r.residuals.emplace_back("phi", coeff);
    r.residuals.emplace_back("penalty", m * coeff);
  } else {
    const double correction =
        static_cast<double>(CeilDiv(window.length, spacing + 1)) * coeff;
    r.exponent = n / static_cast<double>(spacing + 1);
    const double raw = OneMinusExp(*r.exponent) - correction;
    r.bound = std::max(raw, 0.0);
    r.clipped = raw < 0.0;
    r.form = "window-alpha";
    r.residuals.emplace_back("alpha", coeff);
    r.residuals.emplace_back("additive_correction", correction);
  }
  r.residuals.emplace_back("Phi", window.phi_index);
  r.residuals.emplace_back("M", window.length);
  r.notes.push_back("bounds the union of A_" + std::to_string(shift + 1) +
                    "..A_" + std::to_string(window.phi_index));
  return r;
}

double LocalOverlap(const IntersectionBand& band, int spacing, bool weighted) {
  RequireSpacing(spacing, 2);
  const int max_gap = spacing - 1;
  const int needed = std::min(max_gap, band.n() - 1);
  if (needed > band.bandwidth() || !band.CoversGap(max_gap)) {
    throw Error(ErrorCode::kInsufficientBand,
                "local overlap at L = " + std::to_string(spacing) +
                    " needs every pair with gap <= " + std::to_string(needed) +
                    "; band has bandwidth " + std::to_string(band.bandwidth()) +
                    " and " + std::to_string(band.entry_count()) + " entries");
  }
  double sum = 0.0;
  band.ForEach([&](int i, int j, double v) {
    const int gap = j - i;
    if (gap > max_gap) return;
    const double w =
        weighted ? static_cast<double>(spacing - gap) / spacing : 1.0;
    sum += w * v;
  });
  return sum;
}

BoundReport SecondOrderBound(const MarginalSequence& marginals,
                             const IntersectionBand& band,
                             const MixingProfile& profile, int spacing,
                             bool weighted) {
  RequireFamily(profile, CoefficientFamily::kPhi, "second-order bound");
  RequireSpacing(spacing, 2);
  if (band.n() != static_cast<int>(marginals.size())) {
    Invalid("band has N = " + std::to_string(band.n()) +
            " but marginals have N = " + std::to_string(marginals.size()));
  }
  const double overlap = LocalOverlap(band, spacing, weighted);
  const double phi = ProfileAt(profile, spacing + 1);
  const double kappa =
      static_cast<double>(CeilDiv(static_cast<long long>(marginals.size()), spacing) + 1);
  const double inner = marginals.total() - overlap - kappa * phi;
  BoundReport r;
  r.spacing = spacing;
  r.exponent = 0.5 * std::max(inner, 0.0);
  r.bound = OneMinusExp(*r.exponent);
  r.clipped = inner < 0.0;
  r.form = weighted ? "second-order-weighted" : "second-order";
  r.residuals.emplace_back("local_overlap", overlap);
  r.residuals.emplace_back("kappa", kappa);
  r.residuals.emplace_back("phi", phi);
  return r;
}

BoundReport ChungErdosBound(const MarginalSequence& marginals,
                            const IntersectionBand& intersections) {
  const int n = static_cast<int>(marginals.size());
  if (intersections.n() != n) {
    Invalid("intersections have N = " + std::to_string(intersections.n()) +
            " but marginals have N = " + std::to_string(n));
  }
  if (!intersections.CoversGap(n - 1)) {
    throw Error(ErrorCode::kMissingPairs,
                "Chung-Erdos bound needs all " +
                    std::to_string(static_cast<long long>(n) * (n - 1) / 2) +
                    " pairs, got " + std::to_string(intersections.entry_count()));
  }
  BoundReport r;
  r.form = "chung-erdos";
  const double total = marginals.total();
  CompensatedSum pairs;
  intersections.ForEach([&](int, int, double v) { pairs.Add(v); });
  const double denominator = total + 2.0 * pairs.Value();
  r.residuals.emplace_back("first_moment", total);
  r.residuals.emplace_back("second_moment", denominator);
  if (total <= 0.0) {
    r.bound = 0.0;
    r.notes.push_back("zero first moment; bound set to 0");
    return r;
  }
  const double value = total * total / denominator;
  if (value > 1.0) {
    r.notes.push_back("ratio " + std::to_string(value) +
                      " exceeds 1; intersections are inconsistent with the "
                      "marginals; capped at 1");
  }
  r.bound = std::min(value, 1.0);
  return r;
}

BoundReport GeomPhiBound(const MarginalSequence& marginals, double c,
                         double rho) {
  if (!(c >= 1.0) || !std::isfinite(c)) Invalid("geometric bound needs C >= 1");
  if (!(rho > 0.0 && rho < 1.0)) Invalid("geometric bound needs rho in (0, 1)");
  const double p_min = marginals.min();
  if (!(p_min > 0.0)) {
    throw Error(ErrorCode::kZeroLowerMass, "geometric bound needs min_k p_k > 0");
  }
  // Start from the logarithmic estimate and settle the exact integer by
  // direct evaluation of C rho^(L0+1).
  const double target = p_min / 2.0;
  auto ok = [&](int l0) { return c * std::pow(rho, l0 + 1) <= target; };
  int l0 = std::max(
      0, static_cast<int>(std::ceil(std::log(target / c) / std::log(rho))) - 1);
  while (l0 > 0 && ok(l0 - 1)) --l0;
  while (!ok(l0)) ++l0;

  const int n = static_cast<int>(marginals.size());
  const double denom = 2.0 * static_cast<double>(l0 + 1);
  BoundReport r = ExponentialReport(marginals.total() / denom, l0, "geom-phi");
  r.residuals.emplace_back("phi_envelope", c * std::pow(rho, l0 + 1));
  r.residuals.emplace_back("p_min", p_min);
  r.residuals.emplace_back("weak_bound", OneMinusExp(p_min * n / denom));
  return r;
}

BoundReport PolyAlphaBound(double total_mass, int n, double c, double gamma,
                           double theta) {
  if (n < 2) Invalid("polynomial alpha bound needs N >= 2");
  if (!(theta > 0.0 && theta <= 1.0)) Invalid("theta must lie in (0, 1]");
  if (!(c >= 1.0) || !std::isfinite(c)) Invalid("polynomial alpha bound needs C >= 1");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) Invalid("polynomial alpha bound needs gamma > 0");
  if (!(total_mass >= 0.0) || total_mass > n) Invalid("S_N must lie in [0, N]");
  const double nd = static_cast<double>(n);
  const double exponent = 0.5 * total_mass * std::pow(nd, -theta);
  const double correction = 2.0 * c * std::pow(nd, 1.0 - theta * (gamma + 1.0));
  const double raw = OneMinusExp(exponent) - correction;
  BoundReport r;
  r.exponent = exponent;
  r.spacing = static_cast<int>(std::ceil(std::pow(nd, theta))) - 1;
  r.bound = std::max(raw, 0.0);
  r.clipped = raw < 0.0;
  r.form = "poly-alpha";
  r.residuals.emplace_back("additive_correction", correction);
  r.residuals.emplace_back("theta", theta);
  return r;
}

BoundReport PolyAlphaBound(double total_mass, int n, double c, double gamma) {
  return PolyAlphaBound(total_mass, n, c, gamma, 2.0 / (gamma + 2.0));
}

BoundReport PolyAlphaBound(const MarginalSequence& marginals, double c,
                           double gamma, std::optional<double> theta) {
  const int n = static_cast<int>(marginals.size());
  return theta ? PolyAlphaBound(marginals.total(), n, c, gamma, *theta)
               : PolyAlphaBound(marginals.total(), n, c, gamma);
}

SharpnessVerdict SharpnessScan(const SharpnessQuery& query) {
  if (query.m < 0) Invalid("sharpness query needs m >= 0");
  if (!(query.c > 0.0)) Invalid("sharpness query needs c > 0");
  if (query.p_grid.empty()) Invalid("sharpness grid is empty");
  for (double p : query.p_grid) {
    if (!(p > 0.0 && p < 1.0)) Invalid("sharpness grid entries must lie in (0, 1)");
  }
  const double slope = query.c * static_cast<double>(query.m + 1);
  for (double p : query.p_grid) {
    if (-std::log1p(-p) < slope * p) return {true, p};
  }
  return {false, std::nullopt};
}

std::vector<double> LogSpacedGrid(double lo, double hi, int count) {
  if (!(lo > 0.0 && hi >= lo) || count < 1) Invalid("bad log grid");
  std::vector<double> grid;
  grid.reserve(count);
  if (count == 1) return {lo};
  const double step = (std::log(hi) - std::log(lo)) / (count - 1);
  for (int i = 0; i < count; ++i) grid.push_back(std::exp(std::log(lo) + step * i));
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

}  // namespace mixbound
