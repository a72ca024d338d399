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

// Offline-evaluation probability laws over a snapshot: the user law P(u), the
// conditional item law P(i|u), item weights and the weighted conditionals
//
//   P(i|u,w) = w_i P(i|u) / sum_{j in I_u} w_j P(j|u)
//
// together with the item marginals and pairwise joints they induce.

#ifndef OFFEVAL_PROBABILITY_H_
#define OFFEVAL_PROBABILITY_H_

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "offeval/interactions.h"

namespace offeval {

// P(u) and P(i|u) bound to one snapshot. The conditional law is stored per
// pair index of the snapshot, so P(i|u) = 0 for i outside I_u by
// construction.
class ProbabilityModel {
 public:
  // Uniform P(u) = 1/#U and P(i|u) = 1/#I_u.
  static ProbabilityModel Uniform(const Snapshot& snap);

  // Builds a model from unnormalized positive user and item-in-profile
  // weights; each is normalized to a probability law.
  static ProbabilityModel FromRules(
      const Snapshot& snap, const std::function<double(UserIndex)>& user_weight,
      const std::function<double(UserIndex, ItemIndex)>& item_weight);

  // Explicit laws: user_law has one entry per user, conditional one entry per
  // pair index. Throws InvalidArgument unless the user law sums to 1 and each
  // profile's conditionals sum to 1 (both within 1e-12), entries are >= 0.
  ProbabilityModel(const Snapshot& snap, std::vector<double> user_law,
                   std::vector<double> conditional);

  double user_prob(UserIndex u) const { return user_law_[u]; }
  double conditional(std::size_t pair) const { return conditional_[pair]; }
  std::span<const double> user_law() const { return user_law_; }
  std::span<const double> conditional_law() const { return conditional_; }

  // P(i|u), 0 when i is not held by u.
  double Conditional(const Snapshot& snap, UserIndex u, ItemIndex i) const;

  // Throws InvalidArgument when the model was built for a snapshot of a
  // different shape.
  void CheckCompatible(const Snapshot& snap) const;

 private:
  ProbabilityModel() = default;

  std::vector<double> user_law_;
  std::vector<double> conditional_;
};

// Builds the probability model for a snapshot; lets time-indexed operations
// re-derive the model at every evaluation time.
using ModelBuilder = std::function<ProbabilityModel(const Snapshot&)>;

ModelBuilder UniformModel();

// Positive per-item weights. Items without an entry weigh 1.
class WeightVector {
 public:
  WeightVector() = default;
  // Throws InvalidArgument on a non-positive or non-finite weight.
  explicit WeightVector(std::map<std::string, double> weights);

  static WeightVector Constant(const Snapshot& snap, double value);

  void Set(const std::string& item, double weight);
  double Get(const std::string& item) const;
  const std::map<std::string, double>& entries() const { return weights_; }
  bool empty() const { return weights_.empty(); }

  // Dense weights aligned with the snapshot's item indices. Entries for items
  // absent from the snapshot are ignored.
  std::vector<double> Resolve(const Snapshot& snap) const;

  bool operator==(const WeightVector&) const = default;

 private:
  std::map<std::string, double> weights_;
};

// A probability law over item identifiers.
class ItemDistribution {
 public:
  ItemDistribution() = default;
  // Throws InvalidArgument on a negative entry or when the total is not
  // within 1e-9 of 1.
  explicit ItemDistribution(std::map<std::string, double> probs);

  // Dense vector over snapshot items; the probabilities must already sum to 1.
  static ItemDistribution FromDense(const Snapshot& snap,
                                    std::span<const double> probs);

  double Get(const std::string& item) const;
  const std::map<std::string, double>& probs() const { return probs_; }
  std::vector<std::string> Support() const;
  std::size_t size() const { return probs_.size(); }

 private:
  std::map<std::string, double> probs_;
};

// Per-pair weighted conditionals P(i|u,w) for one (snapshot, model, weights)
// triple. The per-user denominators are computed once here and shared by all
// items of the user.
class WeightedLaw {
 public:
  WeightedLaw(const Snapshot& snap, const ProbabilityModel& model,
              std::span<const double> dense_weights);
  WeightedLaw(const Snapshot& snap, const ProbabilityModel& model,
              const WeightVector& weights)
      : WeightedLaw(snap, model, weights.Resolve(snap)) {}

  const Snapshot& snapshot() const { return *snap_; }
  const ProbabilityModel& model() const { return *model_; }
  std::span<const double> weights() const { return weights_; }
  double pair_prob(std::size_t pair) const { return pair_prob_[pair]; }
  std::span<const double> pair_probs() const { return pair_prob_; }

  // P(i|w) for every item, one pass over the pairs.
  std::vector<double> Marginal() const;
  // P(i,k|w) = sum over users holding both of P(i|u,w) P(k|u,w) P(u).
  double PairwiseJoint(ItemIndex i, ItemIndex k) const;

 private:
  const Snapshot* snap_;
  const ProbabilityModel* model_;
  std::vector<double> weights_;
  std::vector<double> pair_prob_;
};

// Unweighted marginal P(i) = sum_u P(i|u) P(u).
std::vector<double> DenseMarginal(const Snapshot& snap,
                                  const ProbabilityModel& model);

// P(i|u,w). Throws UnknownUser, UnknownItem or ItemNotInProfile.
double WeightedConditional(const Snapshot& snap, const ProbabilityModel& model,
                           const std::string& user, const std::string& item,
                           const WeightVector& weights);

// P(i|w) over the items of the snapshot.
ItemDistribution ItemMarginal(const Snapshot& snap,
                              const ProbabilityModel& model,
                              const WeightVector& weights);
// P(i), computed without any weighting.
ItemDistribution ItemMarginal(const Snapshot& snap,
                              const ProbabilityModel& model);

// P(i,k|w). Throws UnknownItem.
double PairwiseJoint(const Snapshot& snap, const ProbabilityModel& model,
                     const WeightVector& weights, const std::string& i,
                     const std::string& k);

}  // namespace offeval

#endif  // OFFEVAL_PROBABILITY_H_
