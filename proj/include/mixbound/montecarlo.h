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

// Seeded Monte Carlo estimates of union probabilities.
//
// Trial t draws from its own substream, seeded from (master seed, t) by a
// counter-based split, so results never depend on the worker count.

#ifndef MIXBOUND_MONTECARLO_H_
#define MIXBOUND_MONTECARLO_H_

#include <cstdint>
#include <limits>
#include <variant>
#include <vector>

#include "mixbound/models.h"

namespace mixbound {

// SplitMix64. Small-state generator used for per-trial substreams.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform on [0, 1) with 53 random bits.
  double NextUnit() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

// Seed of the substream for trial `index`.
std::uint64_t SubstreamSeed(std::uint64_t master, std::uint64_t index);

struct McConfig {
  std::uint64_t trials = 1;
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::uint64_t hits = 0;
  std::uint64_t trials = 0;
};

// X_1 from the stationary law, then N - 1 transitions.
std::vector<std::uint8_t> SampleMarkov2(double a, double b, int n,
                                        std::uint64_t stream_seed);

using McModel = std::variant<Markov2Model, BlockFamily>;

McEstimate EstimateUnion(const McModel& model, const McConfig& config);

// Normal-approximation interval; estimates of exactly 0 or 1 get
// [max(0, est - 1/trials), min(1, est + 3/trials)].
McEstimate MakeEstimate(std::uint64_t hits, std::uint64_t trials);

}  // namespace mixbound

#endif  // MIXBOUND_MONTECARLO_H_
