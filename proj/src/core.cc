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

#include "mixbound/core.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mixbound {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return "invalid-argument";
    case ErrorCode::kInsufficientMass:
      return "insufficient-mass";
    case ErrorCode::kZeroLowerMass:
      return "zero-lower-mass";
    case ErrorCode::kInsufficientBand:
      return "insufficient-band";
    case ErrorCode::kMissingPairs:
      return "missing-pairs";
    case ErrorCode::kPastTooLarge:
      return "past-too-large";
    case ErrorCode::kFamilyMismatch:
      return "family-mismatch";
    case ErrorCode::kParse:
      return "parse-error";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + detail),
      code_(code) {}

void CompensatedSum::Add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    compensation_ += (sum_ - t) + x;
  } else {
    compensation_ += (x - t) + sum_;
  }
  sum_ = t;
}

namespace {

bool IsProbability(double p) { return p >= 0.0 && p <= 1.0; }

[[noreturn]] void Invalid(const std::string& detail) {
  throw Error(ErrorCode::kInvalidArgument, detail);
}

}  // namespace

MarginalSequence::MarginalSequence(std::vector<double> probs)
    : probs_(std::move(probs)) {
  if (probs_.empty()) Invalid("marginal sequence must contain at least one probability");
  prefix_.reserve(probs_.size() + 1);
  prefix_.push_back(0.0);
  double running = 0.0;
  for (std::size_t k = 0; k < probs_.size(); ++k) {
    if (!IsProbability(probs_[k])) {
      Invalid("p_" + std::to_string(k + 1) + " = " + std::to_string(probs_[k]) +
              " is not in [0, 1]");
    }
    running += probs_[k];
    prefix_.push_back(running);
  }
}

MarginalSequence MarginalSequence::Uniform(double p, std::size_t n) {
  return MarginalSequence(std::vector<double>(n, p));
}

double MarginalSequence::min() const {
  return *std::min_element(probs_.begin(), probs_.end());
}

double MarginalSequence::max() const {
  return *std::max_element(probs_.begin(), probs_.end());
}

std::string_view FamilyName(CoefficientFamily family) {
  return family == CoefficientFamily::kPhi ? "phi" : "alpha";
}

namespace {

struct ShapeValidator {
  void operator()(const GeometricDecay& g) const {
    if (!(g.c >= 1.0) || !std::isfinite(g.c)) Invalid("geometric profile needs C >= 1");
    if (!(g.rho > 0.0 && g.rho < 1.0)) Invalid("geometric profile needs rho in (0, 1)");
  }
  void operator()(const PolynomialDecay& p) const {
    if (!(p.c >= 1.0) || !std::isfinite(p.c)) Invalid("polynomial profile needs C >= 1");
    if (!(p.gamma > 0.0) || !std::isfinite(p.gamma)) Invalid("polynomial profile needs gamma > 0");
  }
  void operator()(const MDependent& m) const {
    if (m.m < 0) Invalid("m-dependent profile needs m >= 0");
  }
  void operator()(const Tabulated& t) const {
    if (t.values.empty()) Invalid("tabulated profile needs at least one value");
    for (std::size_t i = 0; i < t.values.size(); ++i) {
      if (!(t.values[i] >= 0.0) || !std::isfinite(t.values[i])) {
        Invalid("tabulated value at lag " + std::to_string(i + 1) +
                " is negative or not finite");
      }
      if (i > 0 && t.values[i] > t.values[i - 1]) {
        Invalid("tabulated profile increases at lag " + std::to_string(i + 1));
      }
    }
  }
};

}  // namespace

MixingProfile::MixingProfile(DecayShape shape, CoefficientFamily family,
                             std::optional<int> restriction)
    : shape_(std::move(shape)), family_(family), restriction_(restriction) {
  std::visit(ShapeValidator{}, shape_);
  if (restriction_ && *restriction_ < 1) Invalid("restriction length must be >= 1");
}

MixingProfile MixingProfile::Geometric(double c, double rho,
                                       CoefficientFamily family,
                                       std::optional<int> restriction) {
  return MixingProfile(GeometricDecay{c, rho}, family, restriction);
}

MixingProfile MixingProfile::Polynomial(double c, double gamma,
                                        CoefficientFamily family,
                                        std::optional<int> restriction) {
  return MixingProfile(PolynomialDecay{c, gamma}, family, restriction);
}

MixingProfile MixingProfile::MDep(int m, CoefficientFamily family,
                                  std::optional<int> restriction) {
  return MixingProfile(MDependent{m}, family, restriction);
}

MixingProfile MixingProfile::Table(std::vector<double> values,
                                   CoefficientFamily family,
                                   std::optional<int> restriction) {
  return MixingProfile(Tabulated{std::move(values)}, family, restriction);
}

MixingProfile MixingProfile::WithFamily(CoefficientFamily family) const {
  return MixingProfile(shape_, family, restriction_);
}

MixingProfile MixingProfile::WithRestriction(
    std::optional<int> restriction) const {
  return MixingProfile(shape_, family_, restriction);
}

double ProfileAt(const MixingProfile& profile, int lag) {
  if (lag < 1) Invalid("profile lag must be >= 1, got " + std::to_string(lag));
  if (profile.restriction() && lag >= *profile.restriction()) return 0.0;
  struct Eval {
    int lag;
    double operator()(const GeometricDecay& g) const {
      return g.c * std::pow(g.rho, lag);
    }
    double operator()(const PolynomialDecay& p) const {
      return p.c * std::pow(static_cast<double>(lag), -p.gamma);
    }
    double operator()(const MDependent& m) const {
      return lag > m.m ? 0.0 : 1.0;
    }
    double operator()(const Tabulated& t) const {
      const auto idx = std::min<std::size_t>(static_cast<std::size_t>(lag),
                                             t.values.size());
      return t.values[idx - 1];
    }
  };
  const double raw = std::visit(Eval{lag}, profile.shape());
  return std::clamp(raw, 0.0, 1.0);
}

IntersectionBand::IntersectionBand(int n, int bandwidth)
    : n_(n), bandwidth_(bandwidth) {
  if (n < 1) Invalid("intersection band needs N >= 1");
  if (bandwidth < 1) Invalid("intersection band needs bandwidth >= 1");
  const int effective = std::min(bandwidth_, std::max(n_ - 1, 1));
  values_.assign(static_cast<std::size_t>(n_) * static_cast<std::size_t>(effective),
                 std::numeric_limits<double>::quiet_NaN());
}

std::size_t IntersectionBand::Slot(int i, int d) const {
  const int effective = std::min(bandwidth_, std::max(n_ - 1, 1));
  return static_cast<std::size_t>(i - 1) * static_cast<std::size_t>(effective) +
         static_cast<std::size_t>(d - 1);
}

void IntersectionBand::Set(int i, int j, double value) {
  if (i < 1 || j > n_ || i >= j) {
    Invalid("band pair (" + std::to_string(i) + ", " + std::to_string(j) +
            ") must satisfy 1 <= i < j <= " + std::to_string(n_));
  }
  if (j - i > bandwidth_) {
    Invalid("band pair (" + std::to_string(i) + ", " + std::to_string(j) +
            ") exceeds bandwidth " + std::to_string(bandwidth_));
  }
  if (!IsProbability(value)) {
    Invalid("P(A_" + std::to_string(i) + " & A_" + std::to_string(j) +
            ") = " + std::to_string(value) + " is not in [0, 1]");
  }
  double& slot = values_[Slot(i, j - i)];
  if (slot != slot) ++count_;
  slot = value;
}

std::optional<double> IntersectionBand::Get(int i, int j) const {
  if (i < 1 || j > n_ || i >= j || j - i > bandwidth_) return std::nullopt;
  const double v = values_[Slot(i, j - i)];
  if (v != v) return std::nullopt;
  return v;
}

bool IntersectionBand::CoversGap(int max_gap) const {
  const int gap = std::min(max_gap, n_ - 1);
  if (gap <= 0) return true;
  if (gap > bandwidth_) return false;
  for (int i = 1; i <= n_; ++i) {
    for (int d = 1; d <= gap && i + d <= n_; ++d) {
      const double v = values_[Slot(i, d)];
      if (v != v) return false;
    }
  }
  return true;
}

void IntersectionBand::CheckAgainst(const MarginalSequence& marginals,
                                    double tolerance) const {
  if (marginals.size() != static_cast<std::size_t>(n_)) {
    Invalid("band has N = " + std::to_string(n_) + " but marginals have N = " +
            std::to_string(marginals.size()));
  }
  ForEach([&](int i, int j, double v) {
    const double cap = std::min(marginals.at(i), marginals.at(j));
    if (v > cap + tolerance) {
      Invalid("P(A_" + std::to_string(i) + " & A_" + std::to_string(j) +
              ") exceeds min(p_i, p_j)");
    }
  });
}

std::optional<double> BoundReport::Residual(std::string_view name) const {
  for (const auto& [key, value] : residuals) {
    if (key == name) return value;
  }
  return std::nullopt;
}

std::vector<int> SpacedPartition(int n, int spacing, int r) {
  if (n < 1) Invalid("spaced partition needs N >= 1");
  if (spacing < 0) Invalid("spacing L must be >= 0");
  if (r < 1 || r > spacing + 1) {
    Invalid("class index r = " + std::to_string(r) + " is outside 1.." +
            std::to_string(spacing + 1));
  }
  std::vector<int> out;
  for (int k = r; k <= n; k += spacing + 1) out.push_back(k);
  return out;
}

CumulativeMass ComputeCumulativeMass(const MarginalSequence& marginals) {
  const auto prefix = marginals.prefix();
  return CumulativeMass{std::vector<double>(prefix.begin() + 1, prefix.end()),
                        marginals.total()};
}

int MassThreshold(const MarginalSequence& marginals, int n) {
  if (n < 1) Invalid("mass threshold n must be >= 1");
  const auto prefix = marginals.prefix();
  const auto it = std::lower_bound(prefix.begin() + 1, prefix.end(),
                                   static_cast<double>(n));
  if (it == prefix.end()) {
    throw Error(ErrorCode::kInsufficientMass,
                "total mass " + std::to_string(marginals.total()) +
                    " is below threshold " + std::to_string(n));
  }
  return static_cast<int>(it - prefix.begin());
}

WindowSpec MakeWindow(const MarginalSequence& marginals, int shift,
                      int threshold, std::optional<int> phi_override) {
  if (shift < 0) Invalid("window shift i must be >= 0");
  if (threshold < 1) Invalid("window threshold n must be >= 1");
  const int target = shift + threshold;
  int phi_index = 0;
  if (phi_override) {
    phi_index = *phi_override;
    const int n = static_cast<int>(marginals.size());
    if (phi_index < 1 || phi_index > n) {
      Invalid("Phi override " + std::to_string(phi_index) + " is outside 1.." +
              std::to_string(n));
    }
    if (marginals.prefix()[phi_index] < static_cast<double>(target)) {
      throw Error(ErrorCode::kInsufficientMass,
                  "Phi override " + std::to_string(phi_index) +
                      " carries mass below " + std::to_string(target));
    }
  } else {
    phi_index = MassThreshold(marginals, target);
  }
  return WindowSpec{shift, threshold, phi_index, phi_index - shift};
}

}  // namespace mixbound
