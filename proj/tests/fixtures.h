// Copyright 2026 The offeval Authors.
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
#ifndef OFFEVAL_TESTS_FIXTURES_H_
#define OFFEVAL_TESTS_FIXTURES_H_

#include <map>
#include <random>
#include <string>

#include "offeval/interactions.h"
#include "offeval/probability.h"
#include "oracle.h"

namespace offeval::testing {

// u1:{a,b}, u2:{b,c}.
inline Snapshot Fix1() {
  return Snapshot::FromProfiles(0, {{"u1", {"a", "b"}}, {"u2", {"b", "c"}}});
}

// Same profiles as a log; c arrives at t=400.
inline InteractionLog Fix1Log() {
  return InteractionLog({{"u1", "a", 10}, {"u1", "b", 20}, {"u2", "b", 5},
                         {"u2", "c", 400}});
}

inline WeightVector ToWeights(const oracle::Weights& w) {
  std::map<std::string, double> m;
  for (const auto& [item, v] : w) m[item] = static_cast<double>(v);
  return WeightVector(std::move(m));
}

// Random weights in [lo, hi] for every item of the profiles.
inline oracle::Weights RandomWeights(std::mt19937_64& rng,
                                     const oracle::Profiles& profiles,
                                     double lo = 0.2, double hi = 5.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  oracle::Weights w;
  for (const auto& item : oracle::AllItems(profiles)) w[item] = dist(rng);
  return w;
}

}  // namespace offeval::testing

#endif  // OFFEVAL_TESTS_FIXTURES_H_
