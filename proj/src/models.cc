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

#include "mixbound/models.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace mixbound {
namespace {

[[noreturn]] void Invalid(const std::string& detail) {
  throw Error(ErrorCode::kInvalidArgument, detail);
}

void RequireOpenUnit(double x, const char* name) {
  if (!(x > 0.0 && x < 1.0)) {
    Invalid(std::string(name) + " = " + std::to_string(x) + " must lie in (0, 1)");
  }
}

std::uint32_t MaskOf(const JointTableModel& table, std::span<const int> index_set) {
  std::uint32_t mask = 0;
  for (int k : index_set) {
    if (k < 1 || k > table.n()) {
      Invalid("event index " + std::to_string(k) + " is outside 1.." +
              std::to_string(table.n()));
    }
    mask |= 1u << (k - 1);
  }
  return mask;
}

}  // namespace

JointTableModel::JointTableModel(int n, std::vector<double> weights)
    : n_(n), weights_(std::move(weights)) {
  if (n < 1 || n > kMaxJointTableEvents) {
    Invalid("joint table needs 1 <= N <= " + std::to_string(kMaxJointTableEvents));
  }
  if (weights_.size() != (std::size_t{1} << n)) {
    Invalid("joint table with N = " + std::to_string(n) + " needs " +
            std::to_string(std::size_t{1} << n) + " weights, got " +
            std::to_string(weights_.size()));
  }
  CompensatedSum total;
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) Invalid("joint table weights must be non-negative");
    total.Add(w);
  }
  if (std::abs(total.Value() - 1.0) > 1e-12) {
    Invalid("joint table weights sum to " + std::to_string(total.Value()) +
            ", not 1");
  }
}

JointTableModel JointTableModel::Product(std::span<const double> probs) {
  const int n = static_cast<int>(probs.size());
  if (n < 1 || n > kMaxJointTableEvents) Invalid("product table size out of range");
  std::vector<double> weights(std::size_t{1} << n);
  for (std::size_t x = 0; x < weights.size(); ++x) {
    double w = 1.0;
    for (int k = 0; k < n; ++k) w *= (x >> k & 1u) ? probs[k] : 1.0 - probs[k];
    weights[x] = w;
  }
  return JointTableModel(n, std::move(weights));
}

BlockFamily::BlockFamily(int m, double p, int q) : m_(m), p_(p), q_(q) {
  if (m < 0) Invalid("block family needs m >= 0");
  if (q < 1) Invalid("block family needs q >= 1");
  RequireOpenUnit(p, "p");
}

double BlockFamily::ExactUnion() const {
  return -std::expm1(static_cast<double>(q_) * std::log1p(-p_));
}

double BlockFamily::TotalMass() const {
  return static_cast<double>(m_ + 1) * static_cast<double>(q_) * p_;
}

MarginalSequence BlockFamily::Marginals() const {
  return MarginalSequence::Uniform(p_, static_cast<std::size_t>(n()));
}

IntersectionBand BlockFamily::PairIntersections() const {
  const int n_events = n();
  IntersectionBand band(n_events, std::max(n_events - 1, 1));
  for (int i = 1; i <= n_events; ++i) {
    for (int j = i + 1; j <= n_events; ++j) {
      const bool same_block = (i - 1) / (m_ + 1) == (j - 1) / (m_ + 1);
      band.Set(i, j, same_block ? p_ : p_ * p_);
    }
  }
  return band;
}

MixingProfile BlockFamily::PhiEnvelope() const {
  return MixingProfile::MDep(m_, CoefficientFamily::kPhi);
}

JointTableModel BlockFamily::ToJointTable() const {
  if (n() > kMaxJointTableEvents) {
    Invalid("block family with N = " + std::to_string(n()) +
            " exceeds the joint-table limit");
  }
  const int width = m_ + 1;
  const std::uint32_t block_mask = (1u << width) - 1u;
  std::vector<double> weights(std::size_t{1} << n(), 0.0);
  for (std::uint32_t blocks = 0; blocks < (1u << q_); ++blocks) {
    std::uint32_t outcome = 0;
    double w = 1.0;
    for (int j = 0; j < q_; ++j) {
      if (blocks >> j & 1u) {
        outcome |= block_mask << (j * width);
        w *= p_;
      } else {
        w *= 1.0 - p_;
      }
    }
    weights[outcome] = w;
  }
  return JointTableModel(n(), std::move(weights));
}

Markov2Model::Markov2Model(double a, double b, int n) : a_(a), b_(b), n_(n) {
  RequireOpenUnit(a, "a");
  RequireOpenUnit(b, "b");
  if (n < 1) Invalid("Markov model needs N >= 1");
}

MarginalSequence Markov2Model::Marginals() const {
  return MarginalSequence::Uniform(stationary_mass(), static_cast<std::size_t>(n_));
}

double Markov2Model::ExactUnion() const {
  const double none = b_ / (a_ + b_) *
                      std::exp(static_cast<double>(n_ - 1) * std::log1p(-a_));
  return 1.0 - none;
}

double Markov2Model::PairIntersection(int d) const {
  if (d < 1) Invalid("pair distance must be >= 1");
  const double pi1 = stationary_mass();
  const double pi0 = b_ / (a_ + b_);
  return pi1 * (pi1 + pi0 * std::pow(lambda(), d));
}

IntersectionBand Markov2Model::PairIntersections(int bandwidth) const {
  IntersectionBand band(n_, bandwidth);
  for (int i = 1; i <= n_; ++i) {
    for (int d = 1; d <= bandwidth && i + d <= n_; ++d) {
      band.Set(i, i + d, PairIntersection(d));
    }
  }
  return band;
}

double Markov2Model::PhiEnvelope(int lag) const {
  if (lag < 1) Invalid("lag must be >= 1");
  return std::clamp(std::pow(std::abs(lambda()), lag), 0.0, 1.0);
}

JointTableModel MarkovToJointTable(const Markov2Model& model) {
  const int n = model.n();
  if (n > kMaxJointTableEvents) {
    Invalid("Markov model with N = " + std::to_string(n) +
            " exceeds the joint-table limit");
  }
  const double a = model.a();
  const double b = model.b();
  // transition[from][to]
  const double transition[2][2] = {{1.0 - a, a}, {b, 1.0 - b}};
  const double initial[2] = {b / (a + b), a / (a + b)};
  std::vector<double> weights(std::size_t{1} << n);
  for (std::size_t x = 0; x < weights.size(); ++x) {
    unsigned prev = x & 1u;
    double w = initial[prev];
    for (int k = 1; k < n; ++k) {
      const unsigned cur = x >> k & 1u;
      w *= transition[prev][cur];
      prev = cur;
    }
    weights[x] = w;
  }
  return JointTableModel(n, std::move(weights));
}

double JointTableUnion(const JointTableModel& table, std::span<const int> index_set) {
  const std::uint32_t mask = MaskOf(table, index_set);
  CompensatedSum sum;
  const auto w = table.weights();
  for (std::uint32_t x = 0; x < w.size(); ++x) {
    if (x & mask) sum.Add(w[x]);
  }
  return sum.Value();
}

double NonoccurrenceProbability(const JointTableModel& table,
                                std::span<const int> index_set) {
  const std::uint32_t mask = MaskOf(table, index_set);
  CompensatedSum sum;
  const auto w = table.weights();
  for (std::uint32_t x = 0; x < w.size(); ++x) {
    if (!(x & mask)) sum.Add(w[x]);
  }
  return sum.Value();
}

MarginalSequence TableMarginals(const JointTableModel& table) {
  std::vector<double> probs(static_cast<std::size_t>(table.n()));
  for (int k = 1; k <= table.n(); ++k) {
    const int idx[] = {k};
    probs[k - 1] = std::min(JointTableUnion(table, idx), 1.0);
  }
  return MarginalSequence(std::move(probs));
}

IntersectionBand PairwiseIntersections(const JointTableModel& table) {
  const int n = table.n();
  IntersectionBand band(n, std::max(n - 1, 1));
  const auto w = table.weights();
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      const std::uint32_t both = (1u << (i - 1)) | (1u << (j - 1));
      CompensatedSum sum;
      for (std::uint32_t x = 0; x < w.size(); ++x) {
        if ((x & both) == both) sum.Add(w[x]);
      }
      band.Set(i, j, std::min(sum.Value(), 1.0));
    }
  }
  return band;
}

namespace {

// Joint law of (past atom, future atom) for a split after k with the given
// lag; middle coordinates are summed out.
struct SplitLaw {
  int past_atoms;
  int future_atoms;
  std::vector<double> joint;  // [past * future_atoms + future]
  std::vector<double> past;
  std::vector<double> future;
};

SplitLaw MakeSplit(const JointTableModel& table, int k, int lag) {
  const int n = table.n();
  const int future_bits = n - (k + lag) + 1;
  SplitLaw law{1 << k, 1 << future_bits, {}, {}, {}};
  std::vector<CompensatedSum> cells(static_cast<std::size_t>(law.past_atoms) *
                                    law.future_atoms);
  const std::uint32_t past_mask = (1u << k) - 1u;
  const int future_shift = k + lag - 1;
  const auto w = table.weights();
  for (std::uint32_t x = 0; x < w.size(); ++x) {
    const std::uint32_t a = x & past_mask;
    const std::uint32_t f = x >> future_shift;
    cells[a * law.future_atoms + f].Add(w[x]);
  }
  law.joint.resize(cells.size());
  law.past.assign(law.past_atoms, 0.0);
  law.future.assign(law.future_atoms, 0.0);
  std::vector<CompensatedSum> past(law.past_atoms);
  std::vector<CompensatedSum> future(law.future_atoms);
  for (int a = 0; a < law.past_atoms; ++a) {
    for (int f = 0; f < law.future_atoms; ++f) {
      const double v = cells[a * law.future_atoms + f].Value();
      law.joint[a * law.future_atoms + f] = v;
      past[a].Add(v);
      future[f].Add(v);
    }
  }
  for (int a = 0; a < law.past_atoms; ++a) law.past[a] = past[a].Value();
  for (int f = 0; f < law.future_atoms; ++f) law.future[f] = future[f].Value();
  return law;
}

double PhiOfSplit(const SplitLaw& law) {
  double best = 0.0;
  for (int a = 0; a < law.past_atoms; ++a) {
    const double pa = law.past[a];
    if (!(pa > 0.0)) continue;
    double tv = 0.0;
    for (int f = 0; f < law.future_atoms; ++f) {
      tv += std::max(law.joint[a * law.future_atoms + f] / pa - law.future[f], 0.0);
    }
    best = std::max(best, tv);
  }
  return best;
}

// sup over events A (rows) and B (columns) of sum_{A x B} D, where D is the
// covariance matrix P(a, f) - P(a) P(f). Rows and columns of D sum to zero,
// so the best B for a fixed A is the positive part of the column sums, and
// A and its complement give the same value.
double AlphaOfSplit(const SplitLaw& law, int max_past) {
  std::vector<int> rows;
  std::vector<int> cols;
  for (int a = 0; a < law.past_atoms; ++a) {
    if (law.past[a] > 0.0) rows.push_back(a);
  }
  for (int f = 0; f < law.future_atoms; ++f) {
    if (law.future[f] > 0.0) cols.push_back(f);
  }
  if (rows.size() < 2 || cols.size() < 2) return 0.0;
  const bool transpose = cols.size() < rows.size();
  const std::vector<int>& enum_side = transpose ? cols : rows;
  const std::vector<int>& free_side = transpose ? rows : cols;
  if (enum_side.size() > (std::size_t{1} << max_past)) {
    throw Error(ErrorCode::kPastTooLarge,
                "alpha needs events over " + std::to_string(enum_side.size()) +
                    " atoms; the cap is 2^" + std::to_string(max_past));
  }
  const std::size_t r = enum_side.size();
  const std::size_t c = free_side.size();
  std::vector<double> d(r * c);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) {
      const int a = transpose ? free_side[j] : enum_side[i];
      const int f = transpose ? enum_side[i] : free_side[j];
      d[i * c + j] = law.joint[a * law.future_atoms + f] - law.past[a] * law.future[f];
    }
  }
  // Gray-code walk over subsets of the first r-1 rows; the last row is left
  // out by the complement symmetry.
  std::vector<double> colsum(c, 0.0);
  std::vector<char> in(r, 0);
  double best = 0.0;
  const std::uint64_t steps = std::uint64_t{1} << (r - 1);
  for (std::uint64_t step = 1; step < steps; ++step) {
    const int row = std::countr_zero(step);
    const double sign = in[row] ? -1.0 : 1.0;
    in[row] = !in[row];
    double value = 0.0;
    for (std::size_t j = 0; j < c; ++j) {
      colsum[j] += sign * d[row * c + j];
      value += std::max(colsum[j], 0.0);
    }
    best = std::max(best, value);
  }
  return best;
}

}  // namespace

double ExactRestrictedCoefficient(const JointTableModel& table,
                                  CoefficientFamily family, int lag,
                                  int max_past) {
  if (lag < 1) Invalid("lag must be >= 1");
  if (max_past < 0 || max_past > 24) Invalid("max_past must lie in 0..24");
  double best = 0.0;
  for (int k = 1; k + lag <= table.n(); ++k) {
    const SplitLaw law = MakeSplit(table, k, lag);
    const double v = family == CoefficientFamily::kPhi ? PhiOfSplit(law)
                                                       : AlphaOfSplit(law, max_past);
    best = std::max(best, v);
  }
  return std::clamp(best, 0.0, 1.0);
}

MixingProfile ExactRestrictedProfile(const JointTableModel& table,
                                     CoefficientFamily family, int max_past) {
  const int n = table.n();
  std::vector<double> values(static_cast<std::size_t>(std::max(n - 1, 1)), 0.0);
  for (int lag = 1; lag < n; ++lag) {
    values[lag - 1] = ExactRestrictedCoefficient(table, family, lag, max_past);
  }
  for (int i = static_cast<int>(values.size()) - 2; i >= 0; --i) {
    values[i] = std::max(values[i], values[i + 1]);
  }
  return MixingProfile::Table(std::move(values), family, n);
}

JointTableModel RandomJointTable(int n, std::mt19937_64& rng,
                                 double concentration) {
  if (n < 1 || n > kMaxJointTableEvents) Invalid("random table size out of range");
  if (!(concentration > 0.0)) Invalid("Dirichlet concentration must be > 0");
  std::gamma_distribution<double> gamma(concentration, 1.0);
  std::vector<double> weights(std::size_t{1} << n);
  double total = 0.0;
  for (double& w : weights) {
    w = gamma(rng);
    total += w;
  }
  if (!(total > 0.0)) {
    weights.assign(weights.size(), 1.0 / static_cast<double>(weights.size()));
    return JointTableModel(n, std::move(weights));
  }
  for (double& w : weights) w /= total;
  return JointTableModel(n, std::move(weights));
}

}  // namespace mixbound
