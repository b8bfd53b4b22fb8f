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

// Exactly solvable dependent-event models used as oracles.

#ifndef MIXBOUND_MODELS_H_
#define MIXBOUND_MODELS_H_

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "mixbound/core.h"

namespace mixbound {

inline constexpr int kMaxJointTableEvents = 20;
inline constexpr int kDefaultMaxPast = 4;

// Explicit distribution over {0,1}^N. Bit k-1 of an outcome index is the
// indicator of A_k.
class JointTableModel {
 public:
  JointTableModel(int n, std::vector<double> weights);

  int n() const { return n_; }
  std::span<const double> weights() const { return weights_; }

  // Independent events with the given marginals.
  static JointTableModel Product(std::span<const double> probs);

 private:
  int n_;
  std::vector<double> weights_;
};

// q independent blocks B_j, each repeated m+1 times:
// A_{(j-1)(m+1)+r} = B_j for r = 1..m+1. This family is m-dependent.
class BlockFamily {
 public:
  BlockFamily(int m, double p, int q);

  int m() const { return m_; }
  double p() const { return p_; }
  int q() const { return q_; }
  int n() const { return (m_ + 1) * q_; }

  double ExactUnion() const;  // 1 - (1 - p)^q
  double TotalMass() const;   // (m + 1) q p
  MarginalSequence Marginals() const;
  // Full band: p within a block, p^2 across blocks.
  IntersectionBand PairIntersections() const;
  // Zero beyond lag m.
  MixingProfile PhiEnvelope() const;
  JointTableModel ToJointTable() const;

 private:
  int m_;
  double p_;
  int q_;
};

// Stationary two-state chain with P(0 -> 1) = a, P(1 -> 0) = b and
// A_k = {X_k = 1}.
class Markov2Model {
 public:
  Markov2Model(double a, double b, int n);

  double a() const { return a_; }
  double b() const { return b_; }
  int n() const { return n_; }
  double lambda() const { return 1.0 - a_ - b_; }
  double stationary_mass() const { return a_ / (a_ + b_); }

  MarginalSequence Marginals() const;
  // 1 - (b / (a + b)) (1 - a)^(N - 1).
  double ExactUnion() const;
  // P(A_i & A_{i+d}) for d >= 1 at stationarity.
  double PairIntersection(int d) const;
  IntersectionBand PairIntersections(int bandwidth) const;
  // |lambda|^n clamped to [0, 1].
  double PhiEnvelope(int lag) const;

 private:
  double a_;
  double b_;
  int n_;
};

JointTableModel MarkovToJointTable(const Markov2Model& model);

// Index sets are 1-based event labels.
double JointTableUnion(const JointTableModel& table, std::span<const int> index_set);
double NonoccurrenceProbability(const JointTableModel& table,
                                std::span<const int> index_set);

MarginalSequence TableMarginals(const JointTableModel& table);
IntersectionBand PairwiseIntersections(const JointTableModel& table);

// Finite restricted coefficient
//   sup_{k >= 1, k + lag <= N} coeff(sigma(A_1..A_k), sigma(A_{k+lag}..A_N)),
// and 0 when no such k exists.
//
// phi is evaluated through the per-atom reduction
//   phi(F, G) = max over past atoms a with P(a) > 0 of TV(P(. | a), P),
// which needs no event enumeration. alpha enumerates the events generated
// by whichever side has fewer positive-probability atoms; if that side has
// more than 2^max_past atoms for some admissible k, kPastTooLarge is thrown.
double ExactRestrictedCoefficient(const JointTableModel& table,
                                  CoefficientFamily family, int lag,
                                  int max_past = kDefaultMaxPast);

// Exact coefficients at lags 1..N-1 as a tabulated profile restricted to N.
// A running maximum from the right removes round-off non-monotonicity so
// the table is a valid (non-increasing) upper envelope.
MixingProfile ExactRestrictedProfile(const JointTableModel& table,
                                     CoefficientFamily family,
                                     int max_past = kDefaultMaxPast);

// Dirichlet(concentration, ..., concentration) weights over 2^N outcomes.
// concentration = 1 is the uniform distribution on the simplex.
JointTableModel RandomJointTable(int n, std::mt19937_64& rng,
                                 double concentration = 1.0);

}  // namespace mixbound

#endif  // MIXBOUND_MODELS_H_
