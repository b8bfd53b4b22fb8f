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

#include "mixbound/montecarlo.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

namespace mixbound {
namespace {

std::uint64_t Mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Feeds each state to `visit` until it returns false. SampleMarkov2 and the
// union estimator share this walk, so a trial hits iff its full path does.
template <typename Visit>
void WalkMarkov2(double a, double b, int n, SplitMix64& rng, Visit&& visit) {
  const double pi1 = a / (a + b);
  bool state = rng.NextUnit() < pi1;
  if (!visit(state)) return;
  for (int k = 1; k < n; ++k) {
    const double u = rng.NextUnit();
    state = state ? !(u < b) : (u < a);
    if (!visit(state)) return;
  }
}

bool MarkovTrialHits(const Markov2Model& m, std::uint64_t seed) {
  SplitMix64 rng(seed);
  bool hit = false;
  WalkMarkov2(m.a(), m.b(), m.n(), rng, [&](bool s) {
    hit = s;
    return !s;
  });
  return hit;
}

bool BlockTrialHits(const BlockFamily& f, std::uint64_t seed) {
  SplitMix64 rng(seed);
  for (int j = 0; j < f.q(); ++j) {
    if (rng.NextUnit() < f.p()) return true;
  }
  return false;
}

}  // namespace

std::uint64_t SubstreamSeed(std::uint64_t master, std::uint64_t index) {
  return Mix(Mix(master + 0x9e3779b97f4a7c15ULL) ^ (index * 0xd1b54a32d192ed03ULL + 1));
}

std::vector<std::uint8_t> SampleMarkov2(double a, double b, int n,
                                        std::uint64_t stream_seed) {
  const Markov2Model model(a, b, n);  // validates parameters
  SplitMix64 rng(stream_seed);
  std::vector<std::uint8_t> path;
  path.reserve(static_cast<std::size_t>(n));
  WalkMarkov2(model.a(), model.b(), model.n(), rng, [&](bool s) {
    path.push_back(s ? 1 : 0);
    return true;
  });
  return path;
}

McEstimate MakeEstimate(std::uint64_t hits, std::uint64_t trials) {
  if (trials == 0) throw Error(ErrorCode::kInvalidArgument, "trials must be >= 1");
  McEstimate e;
  e.hits = hits;
  e.trials = trials;
  const double t = static_cast<double>(trials);
  e.estimate = static_cast<double>(hits) / t;
  e.std_error = std::sqrt(e.estimate * (1.0 - e.estimate) / t);
  if (hits == 0 || hits == trials) {
    e.ci_low = std::max(0.0, e.estimate - 1.0 / t);
    e.ci_high = std::min(1.0, e.estimate + 3.0 / t);
  } else {
    e.ci_low = std::max(0.0, e.estimate - 1.96 * e.std_error);
    e.ci_high = std::min(1.0, e.estimate + 1.96 * e.std_error);
  }
  return e;
}

McEstimate EstimateUnion(const McModel& model, const McConfig& config) {
  if (config.trials < 1) throw Error(ErrorCode::kInvalidArgument, "trials must be >= 1");
  if (config.workers < 1) throw Error(ErrorCode::kInvalidArgument, "workers must be >= 1");
  auto trial_hits = [&](std::uint64_t t) {
    const std::uint64_t seed = SubstreamSeed(config.seed, t);
    return std::visit(
        [&](const auto& m) {
          using M = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<M, Markov2Model>) {
            return MarkovTrialHits(m, seed);
          } else {
            return BlockTrialHits(m, seed);
          }
        },
        model);
  };

  const unsigned workers = static_cast<unsigned>(
      std::min<std::uint64_t>(config.workers, config.trials));
  std::vector<std::uint64_t> counts(workers, 0);
  auto run = [&](unsigned w) {
    const std::uint64_t begin = config.trials * w / workers;
    const std::uint64_t end = config.trials * (w + 1) / workers;
    std::uint64_t local = 0;
    for (std::uint64_t t = begin; t < end; ++t) local += trial_hits(t) ? 1 : 0;
    counts[w] = local;
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }
  std::uint64_t hits = 0;
  for (std::uint64_t c : counts) hits += c;
  return MakeEstimate(hits, config.trials);
}

}  // namespace mixbound
