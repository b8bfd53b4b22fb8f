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

// Lower bounds for P(A_1 | ... | A_N) under phi- and alpha-mixing.
//
// Every function is pure and returns a BoundReport whose `bound` lies in
// [0, 1]. Wherever a negative pre-clip value is raised to zero the report's
// `clipped` flag is set; no clamp is silent. Exponents are carried separately
// so that bounds of the form 1 - exp(-x) with large x stay distinguishable
// from 1.

#ifndef MIXBOUND_BOUNDS_H_
#define MIXBOUND_BOUNDS_H_

#include <optional>
#include <vector>

#include "mixbound/core.h"

namespace mixbound {

// 1 - exp(-(1/(L+1)) sum_k (p_k - phi(L+1))_+).
BoundReport PhiBound(const MarginalSequence& marginals,
                     const MixingProfile& profile, int spacing);

// The phi bound maximised over L in 0..N-1. Ties resolve to the smallest L.
BoundReport PhiOptimize(const MarginalSequence& marginals,
                        const MixingProfile& profile);

// [1 - exp(-S_N/(L+1)) - ceil(N/(L+1)) alpha(L+1)]_+.
BoundReport AlphaBound(const MarginalSequence& marginals,
                       const MixingProfile& profile, int spacing);

// Additive correction alpha(L+1) / (1 - exp(-p_min)); needs p_min > 0.
BoundReport AlphaLowerMassBound(const MarginalSequence& marginals,
                                const MixingProfile& profile, int spacing);

// Bound on the union over the window i+1..Phi(i+n). The profile family picks
// the phi or the alpha variant.
BoundReport WindowBound(const MarginalSequence& marginals,
                        const MixingProfile& profile, int shift, int threshold,
                        int spacing,
                        std::optional<int> phi_override = std::nullopt);

// Sum of P(A_i & A_j) over pairs with gap d <= L-1, each scaled by (L-d)/L
// when `weighted` is set.
double LocalOverlap(const IntersectionBand& band, int spacing, bool weighted);

// 1 - exp(-(1/2)(S_N - T - kappa phi(L+1))_+) with kappa = ceil(N/L) + 1.
BoundReport SecondOrderBound(const MarginalSequence& marginals,
                             const IntersectionBand& band,
                             const MixingProfile& profile, int spacing,
                             bool weighted);

// S_N^2 / (sum_i p_i + 2 sum_{i<j} P(A_i & A_j)); every pair must be present.
BoundReport ChungErdosBound(const MarginalSequence& marginals,
                            const IntersectionBand& intersections);

// Spacing L0 chosen as the smallest integer with C rho^(L0+1) <= p_min / 2,
// then 1 - exp(-S_N / (2 (L0 + 1))).
BoundReport GeomPhiBound(const MarginalSequence& marginals, double c,
                         double rho);

// [1 - exp(-S_N N^-theta / 2) - 2 C N^(1 - theta (gamma + 1))]_+.
BoundReport PolyAlphaBound(double total_mass, int n, double c, double gamma,
                           double theta);
// theta = 2 / (gamma + 2).
BoundReport PolyAlphaBound(double total_mass, int n, double c, double gamma);
BoundReport PolyAlphaBound(const MarginalSequence& marginals, double c,
                           double gamma, std::optional<double> theta);

struct SharpnessQuery {
  int m;
  double c;
  std::vector<double> p_grid;
};

struct SharpnessVerdict {
  bool violated;
  std::optional<double> witness;  // first grid p with -log(1-p) < c(m+1)p
};

SharpnessVerdict SharpnessScan(const SharpnessQuery& query);

// `count` log-spaced probabilities from lo to hi inclusive.
std::vector<double> LogSpacedGrid(double lo, double hi, int count);

}  // namespace mixbound

#endif  // MIXBOUND_BOUNDS_H_
