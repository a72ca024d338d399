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

// Item reweighting that counters drift of the item marginal between a
// reference time t0 and a later time t1.
//
// The objective is the divergence of the weighted t1 marginal from the t0
// marginal, summed over the t0 support only:
//
//   D(w) = sum_{i : P0(i) > 0} P0(i) log(P0(i) / P1(i|w))
//
// Its partial derivative with respect to an item weight w_k is
//
//   dD/dw_k = sum_i P0(i) / (w_k P1(i|w)) * (P1(i,k|w) - [i == k] P1(k|w))
//
// where P1(i,k|w) is the probability that two independent item draws for the
// same user return i and k. Only a small "active set" of items, the ones whose
// marginal drifted most, is tuned; every other weight stays at 1.

#ifndef OFFEVAL_DEBIAS_H_
#define OFFEVAL_DEBIAS_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "offeval/interactions.h"
#include "offeval/probability.h"

namespace offeval {

// Reference marginal P0 and its support.
class DebiasTarget {
 public:
  // Throws InvalidArgument when the support is empty.
  explicit DebiasTarget(ItemDistribution reference);

  const ItemDistribution& reference() const { return reference_; }
  const std::vector<std::string>& support() const { return support_; }

 private:
  ItemDistribution reference_;
  std::vector<std::string> support_;
};

struct ActiveSet {
  // Ordered by decreasing drift (ties by identifier).
  std::vector<std::string> items;
  std::size_t p() const { return items.size(); }
};

struct OptimizerConfig {
  std::size_t p = 20;
  double step = 1.0;
  int max_iters = 500;
  double grad_tol = 1e-7;
  double kl_tol = 1e-9;
  int max_halvings = 30;
  double step_growth = 1.5;
  int threads = 1;
};

enum class StopReason { kGradTol, kKlTol, kMaxIters, kLineSearch };

const char* ToString(StopReason reason);

struct OptimizerReport {
  int iterations = 0;
  // D(w) at the start and after every accepted step.
  std::vector<double> kl_trace;
  double final_kl = 0.0;
  WeightVector final_weights;
  ActiveSet active;
  bool converged = false;
  StopReason reason = StopReason::kMaxIters;
};

// D(w). Throws SupportMismatch naming every support item whose current
// weighted marginal is zero (including items absent from the snapshot).
double KlDivergence(const DebiasTarget& target, const Snapshot& snap,
                    const ProbabilityModel& model, const WeightVector& weights);

// The p candidates (keys of 'current') with the largest |P0(i) - P1(i)|,
// P0 = 0 outside the target. Ties are broken by increasing identifier.
ActiveSet SelectActiveSet(const DebiasTarget& target,
                          const ItemDistribution& current, std::size_t p);

// dD/dw_k for every k of the active set. Coordinate k costs one pass over
// the profiles of the users holding k. Throws SupportMismatch, UnknownItem
// (active item outside the snapshot) and InvalidArgument (empty active set).
std::map<std::string, double> KlGradient(const DebiasTarget& target,
                                         const Snapshot& snap,
                                         const ProbabilityModel& model,
                                         const WeightVector& weights,
                                         const ActiveSet& active,
                                         int threads = 1);

// Gradient descent on log-weights of the active set, starting from w = 1.
// The active set is chosen once from the unweighted t1 marginal. A step that
// does not decrease D is halved (up to max_halvings times); an accepted step
// grows the step size by step_growth.
//
// Throws SupportMismatch, and NoProgress when the very first iteration finds
// no decreasing step.
OptimizerReport OptimizeWeights(const DebiasTarget& target,
                                const Snapshot& snap,
                                const ProbabilityModel& model,
                                const OptimizerConfig& cfg);

}  // namespace offeval

#endif  // OFFEVAL_DEBIAS_H_
