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

// Leave-one-out offline evaluation. For every (user, item) pair the item is
// hidden from the user's profile, the recommender is queried on the rest and
// a quality function scores whether the hidden item came back. The score is
// the expectation of that quality under P(u) P(i|u,w).

#ifndef OFFEVAL_EVALUATION_H_
#define OFFEVAL_EVALUATION_H_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "offeval/interactions.h"
#include "offeval/probability.h"

namespace offeval {

using ItemSet = std::set<std::string>;

// u_{-i}: the profile without i. Throws ItemNotInProfile.
ItemSet RemoveItem(const ItemSet& profile, const std::string& item);

class Recommender {
 public:
  virtual ~Recommender() = default;

  // Ranked, distinct items for a user whose remaining profile is 'profile'
  // (item indices of 'snap', possibly empty). At most k() items.
  virtual std::vector<std::string> Recommend(std::span<const ItemIndex> profile,
                                             const Snapshot& snap) const = 0;
  virtual std::size_t k() const = 0;
  // True when Recommend ignores its arguments.
  virtual bool is_constant() const { return false; }
};

// Always recommends the same items.
class ConstantRecommender final : public Recommender {
 public:
  // Keeps the first k items. Throws InvalidArgument on duplicates or k == 0.
  explicit ConstantRecommender(std::vector<std::string> items,
                               std::size_t k = 5);

  std::vector<std::string> Recommend(std::span<const ItemIndex>,
                                     const Snapshot&) const override {
    return items_;
  }
  std::size_t k() const override { return k_; }
  bool is_constant() const override { return true; }
  const std::vector<std::string>& items() const { return items_; }

 private:
  std::vector<std::string> items_;
  std::size_t k_;
};

enum class QualityKind {
  kHitInTopK,    // 1 if the hidden item is recommended, else 0
  kInverseRank,  // 1/rank (1-based) of the hidden item, 0 if absent
};

double Quality(QualityKind kind, std::span<const std::string> recommendation,
               const std::string& item);

struct Exhaustive {};
struct Stochastic {
  std::uint64_t draws = 20000;
  std::uint64_t seed = 0;
};

struct EvalConfig {
  std::variant<Exhaustive, Stochastic> mode = Exhaustive{};
  // Applied when set; otherwise the plain conditionals are used.
  std::optional<WeightVector> weights;
  // Per-time weights for TimelineEvaluate; takes precedence over 'weights'.
  std::map<Timestamp, WeightVector> weight_schedule;
  int threads = 1;
};

struct EvalResult {
  double score = 0.0;
  double std_error = 0.0;
  std::uint64_t pairs_evaluated = 0;

  bool operator==(const EvalResult&) const = default;
};

// Exhaustive: sum over every pair of P(u) P(i|u,w) q(g(u_{-i}), i).
// Stochastic: 'draws' users from P(u) with replacement, one item each from
// P(i|u,w); mean quality and its standard error. Draws are generated in
// fixed blocks of kDrawBlock, block b using Rng(DeriveSeed(seed, b)), so the
// result is a function of the seed only, not of the thread count.
EvalResult Evaluate(const Recommender& g, const Snapshot& snap,
                    const ProbabilityModel& model, QualityKind q,
                    const EvalConfig& cfg);

inline constexpr std::uint64_t kDrawBlock = 1024;

// Score of a constant recommendation from the item marginal alone:
// sum_i dist(i) q(items, i).
double ConstantScore(std::span<const std::string> items,
                     const ItemDistribution& dist, QualityKind q);

struct TimelinePoint {
  Timestamp time;
  EvalResult result;
};

// Evaluate on BuildSnapshot(log, t) for each t (strictly increasing). The
// model is rebuilt per snapshot with 'model'.
std::vector<TimelinePoint> TimelineEvaluate(const Recommender& g,
                                            const InteractionLog& log,
                                            std::span<const Timestamp> times,
                                            const ModelBuilder& model,
                                            QualityKind q,
                                            const EvalConfig& cfg);

}  // namespace offeval

#endif  // OFFEVAL_EVALUATION_H_
