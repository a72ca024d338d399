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
#include "offeval/evaluation.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "fixtures.h"
#include "offeval/errors.h"

namespace offeval {
namespace {

using ::offeval::testing::Fix1;
using ::offeval::testing::Fix1Log;
using ::offeval::testing::RandomWeights;
using ::offeval::testing::ToWeights;

const ItemDistribution kDist({{"a", 0.25}, {"b", 0.5}, {"c", 0.25}});

// Recommends the items the remaining profile lacks, in identifier order.
class ComplementRecommender : public Recommender {
 public:
  explicit ComplementRecommender(std::size_t k) : k_(k) {}
  std::vector<std::string> Recommend(std::span<const ItemIndex> profile,
                                     const Snapshot& snap) const override {
    std::vector<std::string> out;
    for (ItemIndex i = 0; i < snap.num_items() && out.size() < k_; ++i) {
      if (std::find(profile.begin(), profile.end(), i) == profile.end()) {
        out.push_back(snap.item_id(i));
      }
    }
    return out;
  }
  std::size_t k() const override { return k_; }

 private:
  std::size_t k_;
};

TEST(RemoveItemTest, Examples) {
  EXPECT_EQ(RemoveItem({"a", "b"}, "a"), ItemSet{"b"});
  EXPECT_EQ(RemoveItem({"b"}, "b"), ItemSet{});
  EXPECT_THROW(RemoveItem({"a", "b"}, "c"), ItemNotInProfile);
  const ItemSet original{"a", "b"};
  RemoveItem(original, "a");
  EXPECT_EQ(original.size(), 2u);
}

TEST(QualityTest, HitAndInverseRank) {
  const std::vector<std::string> rec{"x", "y", "z"};
  EXPECT_EQ(Quality(QualityKind::kHitInTopK, rec, "y"), 1.0);
  EXPECT_EQ(Quality(QualityKind::kHitInTopK, rec, "w"), 0.0);
  EXPECT_EQ(Quality(QualityKind::kInverseRank, rec, "x"), 1.0);
  EXPECT_EQ(Quality(QualityKind::kInverseRank, rec, "z"), 1.0 / 3.0);
  EXPECT_EQ(Quality(QualityKind::kInverseRank, rec, "w"), 0.0);
}

TEST(ConstantRecommenderTest, TruncatesAndRejectsDuplicates) {
  ConstantRecommender g({"a", "b", "c"}, 2);
  EXPECT_EQ(g.items(), (std::vector<std::string>{"a", "b"}));
  EXPECT_THROW(ConstantRecommender({"a", "a"}), InvalidArgument);
  EXPECT_THROW(ConstantRecommender({"a"}, 0), InvalidArgument);
}

TEST(ConstantScoreTest, Examples) {
  const std::vector<std::string> a{"a"}, bc{"b", "c"};
  EXPECT_DOUBLE_EQ(ConstantScore(a, kDist, QualityKind::kHitInTopK), 0.25);
  EXPECT_DOUBLE_EQ(ConstantScore(bc, kDist, QualityKind::kHitInTopK), 0.75);
  EXPECT_DOUBLE_EQ(ConstantScore(bc, kDist, QualityKind::kInverseRank), 0.625);
}

TEST(EvaluateTest, ExhaustiveFix1) {
  const Snapshot s = Fix1();
  const auto m = ProbabilityModel::Uniform(s);
  const auto r = Evaluate(ConstantRecommender({"b"}), s, m,
                          QualityKind::kHitInTopK, EvalConfig{});
  EXPECT_DOUBLE_EQ(r.score, 0.5);
  EXPECT_EQ(r.std_error, 0.0);
  EXPECT_EQ(r.pairs_evaluated, 4u);
  EXPECT_DOUBLE_EQ(Evaluate(ConstantRecommender({"a", "b", "c"}), s, m,
                            QualityKind::kHitInTopK, EvalConfig{})
                       .score,
                   1.0);
}

TEST(EvaluateTest, StochasticFix1WithinThreeStdErrors) {
  const Snapshot s = Fix1();
  const auto m = ProbabilityModel::Uniform(s);
  EvalConfig cfg;
  cfg.mode = Stochastic{20000, 42};
  const auto r =
      Evaluate(ConstantRecommender({"b"}), s, m, QualityKind::kHitInTopK, cfg);
  EXPECT_EQ(r.pairs_evaluated, 20000u);
  EXPECT_GT(r.std_error, 0.0);
  EXPECT_LE(std::abs(r.score - 0.5), 3.0 * r.std_error);
}

TEST(EvaluateTest, StochasticRejectsZeroDraws) {
  const Snapshot s = Fix1();
  EvalConfig cfg;
  cfg.mode = Stochastic{0, 1};
  EXPECT_THROW(Evaluate(ConstantRecommender({"b"}), s,
                        ProbabilityModel::Uniform(s), QualityKind::kHitInTopK,
                        cfg),
               InvalidArgument);
}

TEST(EvaluateTest, DeterministicAcrossRunsAndThreads) {
  std::mt19937_64 rng(5);
  const auto profiles = oracle::RandomProfiles(rng, 40, 15);
  const Snapshot s = Snapshot::FromProfiles(0, profiles);
  const auto m = ProbabilityModel::Uniform(s);
  const ComplementRecommender g(3);
  EvalConfig cfg;
  cfg.mode = Stochastic{5000, 99};
  cfg.weights = ToWeights(RandomWeights(rng, profiles));
  const auto first = Evaluate(g, s, m, QualityKind::kInverseRank, cfg);
  EXPECT_EQ(first, Evaluate(g, s, m, QualityKind::kInverseRank, cfg));
  cfg.threads = 4;
  EXPECT_EQ(first, Evaluate(g, s, m, QualityKind::kInverseRank, cfg));
  cfg.mode = Exhaustive{};
  const auto ex4 = Evaluate(g, s, m, QualityKind::kInverseRank, cfg);
  cfg.threads = 1;
  EXPECT_EQ(ex4, Evaluate(g, s, m, QualityKind::kInverseRank, cfg));
}

TEST(EvaluateTest, RecommenderSeesLeaveOneOutProfile) {
  // With a singleton profile the recommender receives an empty profile and
  // the complement recommender returns the hidden item itself.
  const Snapshot s = Snapshot::FromProfiles(0, {{"u", {"x"}}, {"v", {"x", "y"}}});
  const auto m = ProbabilityModel::Uniform(s);
  const auto r = Evaluate(ComplementRecommender(1), s, m,
                          QualityKind::kHitInTopK, EvalConfig{});
  // u: hides x, gets {x} -> hit. v hides x: remaining {y}, gets {x} -> hit;
  // v hides y: remaining {x}, gets {y} -> hit.
  EXPECT_DOUBLE_EQ(r.score, 1.0);
}

TEST(EvaluateTest, ConstantEquivalenceWithMarginal) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 40; ++trial) {
    const auto profiles = oracle::RandomProfiles(rng, 12, 8);
    const Snapshot s = Snapshot::FromProfiles(0, profiles);
    const auto m = ProbabilityModel::Uniform(s);
    const auto ow = RandomWeights(rng, profiles);
    std::vector<std::string> items = s.item_ids();
    std::shuffle(items.begin(), items.end(), rng);
    items.resize(std::uniform_int_distribution<std::size_t>(1, items.size())(rng));
    const ConstantRecommender g(items, items.size());
    EvalConfig cfg;
    cfg.weights = ToWeights(ow);
    for (auto q : {QualityKind::kHitInTopK, QualityKind::kInverseRank}) {
      const double direct = Evaluate(g, s, m, q, cfg).score;
      const double reduced =
          ConstantScore(g.items(), ItemMarginal(s, m, *cfg.weights), q);
      EXPECT_NEAR(direct, reduced, 1e-12);
    }
    EXPECT_NEAR(Evaluate(g, s, m, QualityKind::kHitInTopK, cfg).score,
                static_cast<double>(oracle::ConstantHitScore(profiles, ow, items)),
                1e-13);
  }
}

TEST(EvaluateTest, AppendingItemNeverLowersHitScore) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto profiles = oracle::RandomProfiles(rng, 15, 10);
    const Snapshot s = Snapshot::FromProfiles(0, profiles);
    const auto m = ProbabilityModel::Uniform(s);
    std::vector<std::string> items;
    double previous = 0.0;
    for (const auto& item : s.item_ids()) {
      items.push_back(item);
      const double score = Evaluate(ConstantRecommender(items, items.size()), s,
                                    m, QualityKind::kHitInTopK, EvalConfig{})
                               .score;
      EXPECT_GE(score, previous);
      previous = score;
    }
    EXPECT_NEAR(previous, 1.0, 1e-12);
  }
}

TEST(EvaluateTest, StochasticGapShrinksWithDraws) {
  std::mt19937_64 rng(8);
  const auto profiles = oracle::RandomProfiles(rng, 30, 10);
  const Snapshot s = Snapshot::FromProfiles(0, profiles);
  const auto m = ProbabilityModel::Uniform(s);
  const ConstantRecommender g({s.item_ids().front()});
  const double exact =
      Evaluate(g, s, m, QualityKind::kHitInTopK, EvalConfig{}).score;
  double previous_mean_gap = 1.0;
  for (std::uint64_t draws : {1000u, 10000u, 100000u}) {
    int inside = 0;
    double mean_gap = 0.0;
    const int reps = 100;
    for (int seed = 0; seed < reps; ++seed) {
      EvalConfig cfg;
      cfg.mode = Stochastic{draws, static_cast<std::uint64_t>(seed)};
      const auto r = Evaluate(g, s, m, QualityKind::kHitInTopK, cfg);
      const double gap = std::abs(r.score - exact);
      inside += gap < 4.0 * r.std_error;
      mean_gap += gap / reps;
    }
    EXPECT_GE(inside, 99) << "draws=" << draws;
    EXPECT_LT(mean_gap, previous_mean_gap);
    previous_mean_gap = mean_gap;
  }
}

TEST(TimelineEvaluateTest, Examples) {
  const InteractionLog log = Fix1Log();
  const ConstantRecommender g({"c"});
  const std::vector<Timestamp> times{300, 500};
  const auto points = TimelineEvaluate(g, log, times, UniformModel(),
                                       QualityKind::kHitInTopK, EvalConfig{});
  ASSERT_EQ(points.size(), 2u);
  EXPECT_EQ(points[0].time, 300);
  EXPECT_DOUBLE_EQ(points[0].result.score, 0.0);
  EXPECT_DOUBLE_EQ(points[1].result.score, 0.25);

  const InteractionLog early({{"u1", "a", 10}, {"u1", "b", 20}, {"u2", "b", 100}});
  const std::vector<Timestamp> flat{100, 200, 300};
  const auto same = TimelineEvaluate(ConstantRecommender({"b"}), early, flat,
                                     UniformModel(), QualityKind::kHitInTopK,
                                     EvalConfig{});
  EXPECT_EQ(same[0].result, same[1].result);
  EXPECT_EQ(same[1].result, same[2].result);

  const std::vector<Timestamp> single{500};
  const auto one = TimelineEvaluate(g, log, single, UniformModel(),
                                    QualityKind::kHitInTopK, EvalConfig{});
  const Snapshot s = BuildSnapshot(log, 500);
  EXPECT_EQ(one.at(0).result, Evaluate(g, s, ProbabilityModel::Uniform(s),
                                       QualityKind::kHitInTopK, EvalConfig{}));
}

TEST(TimelineEvaluateTest, AppliesWeightSchedule) {
  const InteractionLog log = Fix1Log();
  const ConstantRecommender g({"a"});
  EvalConfig cfg;
  cfg.weight_schedule[500] = WeightVector({{"a", 2.0}});
  const std::vector<Timestamp> times{300, 500};
  const auto points = TimelineEvaluate(g, log, times, UniformModel(),
                                       QualityKind::kHitInTopK, cfg);
  EXPECT_DOUBLE_EQ(points[0].result.score, 0.25);
  EXPECT_NEAR(points[1].result.score, 1.0 / 3.0, 1e-15);
}

TEST(TimelineEvaluateTest, RejectsBadTimes) {
  const ConstantRecommender g({"a"});
  const std::vector<Timestamp> none, unsorted{300, 300};
  EXPECT_THROW(TimelineEvaluate(g, Fix1Log(), none, UniformModel(),
                                QualityKind::kHitInTopK, EvalConfig{}),
               InvalidArgument);
  EXPECT_THROW(TimelineEvaluate(g, Fix1Log(), unsorted, UniformModel(),
                                QualityKind::kHitInTopK, EvalConfig{}),
               InvalidArgument);
  const std::vector<Timestamp> too_early{1, 300};
  EXPECT_THROW(TimelineEvaluate(g, Fix1Log(), too_early, UniformModel(),
                                QualityKind::kHitInTopK, EvalConfig{}),
               EmptySnapshot);
}

}  // namespace
}  // namespace offeval
