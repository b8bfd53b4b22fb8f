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

// Shared domain types: marginal sequences, mixing-coefficient envelopes,
// local intersection bands and the bound report every inequality returns.

#ifndef MIXBOUND_CORE_H_
#define MIXBOUND_CORE_H_

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace mixbound {

enum class ErrorCode {
  kInvalidArgument,
  kInsufficientMass,
  kZeroLowerMass,
  kInsufficientBand,
  kMissingPairs,
  kPastTooLarge,
  kFamilyMismatch,
  kParse,
};

// Stable kebab-case name, also used as the message prefix.
std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Neumaier-compensated running sum. Used wherever large numbers of
// probabilities are accumulated so results do not depend on magnitude order.
class CompensatedSum {
 public:
  void Add(double x);
  double Value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

// Event probabilities p_1..p_N with cached prefix sums.
class MarginalSequence {
 public:
  explicit MarginalSequence(std::vector<double> probs);

  // N copies of the same probability.
  static MarginalSequence Uniform(double p, std::size_t n);

  std::span<const double> probs() const { return probs_; }
  std::size_t size() const { return probs_.size(); }
  // 1-based access, matching event labels A_1..A_N.
  double at(std::size_t k) const { return probs_.at(k - 1); }

  // prefix()[M] = p_1 + ... + p_M, with prefix()[0] = 0.
  std::span<const double> prefix() const { return prefix_; }
  double total() const { return prefix_.back(); }
  double min() const;
  double max() const;

 private:
  std::vector<double> probs_;
  std::vector<double> prefix_;
};

enum class CoefficientFamily { kPhi, kAlpha };

std::string_view FamilyName(CoefficientFamily family);

struct GeometricDecay {
  double c;
  double rho;
};

struct PolynomialDecay {
  double c;
  double gamma;
};

// Zero beyond lag m; 1 (the universal envelope) at lags <= m.
struct MDependent {
  int m;
};

// values[0] is the coefficient at lag 1. Lags past the end reuse the last
// entry, which is an upper bound for a non-increasing sequence.
struct Tabulated {
  std::vector<double> values;
};

using DecayShape = std::variant<GeometricDecay, PolynomialDecay, MDependent,
                                Tabulated>;

// Lag-indexed upper envelope for phi(n) or alpha(n). With a restriction
// length N, every lag >= N evaluates to exactly 0 (no admissible past/future
// split exists inside A_1..A_N).
class MixingProfile {
 public:
  MixingProfile(DecayShape shape, CoefficientFamily family,
                std::optional<int> restriction = std::nullopt);

  static MixingProfile Geometric(double c, double rho, CoefficientFamily family,
                                 std::optional<int> restriction = std::nullopt);
  static MixingProfile Polynomial(double c, double gamma,
                                  CoefficientFamily family,
                                  std::optional<int> restriction = std::nullopt);
  static MixingProfile MDep(int m, CoefficientFamily family,
                            std::optional<int> restriction = std::nullopt);
  static MixingProfile Table(std::vector<double> values,
                             CoefficientFamily family,
                             std::optional<int> restriction = std::nullopt);

  const DecayShape& shape() const { return shape_; }
  CoefficientFamily family() const { return family_; }
  const std::optional<int>& restriction() const { return restriction_; }

  // Same envelope, different family or restriction.
  MixingProfile WithFamily(CoefficientFamily family) const;
  MixingProfile WithRestriction(std::optional<int> restriction) const;

 private:
  DecayShape shape_;
  CoefficientFamily family_;
  std::optional<int> restriction_;
};

// Envelope value at `lag` (>= 1), always in [0, 1].
double ProfileAt(const MixingProfile& profile, int lag);

// Pairwise intersection probabilities P(A_i & A_j) for 1 <= i < j <= N with
// j - i <= bandwidth. Unset entries are reported as missing, never as zero.
class IntersectionBand {
 public:
  IntersectionBand(int n, int bandwidth);

  int n() const { return n_; }
  int bandwidth() const { return bandwidth_; }

  void Set(int i, int j, double value);
  std::optional<double> Get(int i, int j) const;
  std::size_t entry_count() const { return count_; }

  // True when every pair with gap <= max_gap (capped at N - 1) is present.
  bool CoversGap(int max_gap) const;

  // 0 <= P(A_i & A_j) <= min(p_i, p_j) + tolerance for every stored entry.
  void CheckAgainst(const MarginalSequence& marginals,
                    double tolerance = 1e-12) const;

  // Calls fn(i, j, value) for every stored entry in (i, j) order.
  template <typename Fn>
  void ForEach(Fn&& fn) const {
    for (int i = 1; i <= n_; ++i) {
      for (int d = 1; d <= bandwidth_ && i + d <= n_; ++d) {
        const double v = values_[Slot(i, d)];
        if (v == v) fn(i, i + d, v);
      }
    }
  }

 private:
  std::size_t Slot(int i, int d) const;

  int n_;
  int bandwidth_;
  std::size_t count_ = 0;
  std::vector<double> values_;  // NaN marks a missing entry.
};

// Phi(i + n) together with the induced window length M = Phi(i + n) - i.
struct WindowSpec {
  int shift;      // i
  int threshold;  // n
  int phi_index;  // Phi(i + n)
  int length;     // M
};

// Result of any inequality. `exponent` is the quantity inside exp(-.) when
// the bound has exponential form; residuals keep insertion order.
struct BoundReport {
  double bound = 0.0;
  std::optional<double> exponent;
  std::optional<int> spacing;
  std::vector<std::pair<std::string, double>> residuals;
  bool clipped = false;
  std::string form;
  std::vector<std::string> notes;

  std::optional<double> Residual(std::string_view name) const;
};

// Indices k in 1..N with k = r (mod L + 1), increasing.
std::vector<int> SpacedPartition(int n, int spacing, int r);

struct CumulativeMass {
  std::vector<double> prefix;  // prefix[M] for M = 1..N
  double total;
};

CumulativeMass ComputeCumulativeMass(const MarginalSequence& marginals);

// Smallest M >= 1 with p_1 + ... + p_M >= n.
int MassThreshold(const MarginalSequence& marginals, int n);

// Builds Phi(i + n) and M. An explicit override replaces the minimal index
// and must itself carry mass >= i + n.
WindowSpec MakeWindow(const MarginalSequence& marginals, int shift,
                      int threshold,
                      std::optional<int> phi_override = std::nullopt);

}  // namespace mixbound

#endif  // MIXBOUND_CORE_H_
