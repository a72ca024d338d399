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
#include "offeval/debias.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.h"
#include "offeval/errors.h"

namespace offeval {
namespace {

using ::offeval::testing::Fix1;
using ::offeval::testing::RandomWeights;
using ::offeval::testing::ToWeights;

const ItemDistribution kFix1Marginal({{"a", 0.25}, {"b", 0.5}, {"c", 0.25}});
const ItemDistribution kShifted({{"a", 0.3}, {"b", 0.5}, {"c", 0.2}});

oracle::Dist ToOracle(const ItemDistribution& d) {
  oracle::Dist out;
  for (const auto& [item, p] : d.probs()) out[item] = p;
  return out;
}

TEST(KlDivergenceTest, Fix1Examples) {
  const Snapshot s = Fix1();
  const auto m = ProbabilityModel::Uniform(s);
  EXPECT_EQ(KlDivergence(DebiasTarget(ItemMarginal(s, m)), s, m, WeightVector()),
            0.0);
  const double expected = 0.25 * std::log(0.75) + 0.5 * std::log(1.2);
  const double kl = KlDivergence(DebiasTarget(kFix1Marginal), s, m,
                                 WeightVector({{"a", 2.0}}));
  EXPECT_NEAR(kl, expected, 1e-15);
  EXPECT_NEAR(kl, 0.019240, 5e-7);
  EXPECT_NEAR(kl,
              static_cast<double>(oracle::Kl(
                  ToOracle(kFix1Marginal),
                  {{"u1", {"a", "b"}}, {"u2", {"b", "c"}}}, {{"a", 2.0L}})),
              1e-15);
}

TEST(KlDivergenceTest, MissingSupportItemIsNamed) {
  const Snapshot s = Snapshot::FromProfiles(0, {{"u1", {"a", "b"}}, {"u2", {"b"}}});
  const auto m = ProbabilityModel::Uniform(s);
  try {
    KlDivergence(DebiasTarget(kFix1Marginal), s, m, WeightVector());
    FAIL() << "expected SupportMismatch";
  } catch (const SupportMismatch& e) {
    EXPECT_EQ(e.items(), std::vector<std::string>{"c"});
  }
}

TEST(KlDivergenceTest, ItemsOutsideTargetContributeNothing) {
  // Extra item d at t1 outside the target support.
  const Snapshot s = Snapshot::FromProfiles(
      0, {{"u1", {"a", "b"}}, {"u2", {"b", "c"}}, {"u3", {"d"}}});
  const auto m = ProbabilityModel::Uniform(s);
  const double kl = KlDivergence(DebiasTarget(kFix1Marginal), s, m, WeightVector());
  // Current marginal: a 1/6, b 1/3, c 1/6, d 1/3.
  const double expected = 0.25 * std::log(1.5) + 0.5 * std::log(1.5) +
                          0.25 * std::log(1.5);
  EXPECT_NEAR(kl, expected, 1e-15);
}

TEST(SelectActiveSetTest, Examples) {
  const DebiasTarget target(kFix1Marginal);
  const ItemDistribution current({{"a", 0.4}, {"b", 0.4}, {"c", 0.2}});
  EXPECT_EQ(SelectActiveSet(target, current, 1).items,
            std::vector<std::string>{"a"});
  EXPECT_EQ(SelectActiveSet(target, current, 2).items,
            (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(SelectActiveSet(target, kFix1Marginal, 2).items,
            (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(SelectActiveSet(target, current, 10).p(), 3u);
}

TEST(SelectActiveSetTest, ItemsAbsentFromTargetUseZero) {
  const DebiasTarget target(ItemDistribution({{"a", 0.9}, {"b", 0.1}}));
  const ItemDistribution current({{"a", 0.5}, {"b", 0.05}, {"n", 0.45}});
  EXPECT_EQ(SelectActiveSet(target, current, 1).items,
            std::vector<std::string>{"n"});
}

TEST(KlGradientTest, VanishesAtMinimum) {
  const Snapshot s = Fix1();
  const auto m = ProbabilityModel::Uniform(s);
  const auto g = KlGradient(DebiasTarget(kFix1Marginal), s, m, WeightVector(),
                            ActiveSet{{"a"}});
  EXPECT_LT(std::abs(g.at("a")), 1e-12);
}

TEST(KlGradientTest, HandValueAndFiniteDifference) {
  const Snapshot s = Fix1();
  const auto m = ProbabilityModel::Uniform(s);
  const auto g = KlGradient(DebiasTarget(kShifted), s, m, WeightVector(),
                            ActiveSet{{"a"}});
  EXPECT_NEAR(g.at("a"), -0.025, 1e-15);
  const long double fd = oracle::FiniteDifference(
      ToOracle(kShifted), {{"u1", {"a", "b"}}, {"u2", {"b", "c"}}}, {}, "a",
      1e-6L);
  EXPECT_NEAR(g.at("a"), static_cast<double>(fd), 1e-9);
}

TEST(KlGradientTest, Errors) {
  const Snapshot s = Fix1();
  const auto m = ProbabilityModel::Uniform(s);
  EXPECT_THROW(KlGradient(DebiasTarget(kShifted), s, m, WeightVector(),
                          ActiveSet{}),
               InvalidArgument);
  EXPECT_THROW(KlGradient(DebiasTarget(kShifted), s, m, WeightVector(),
                          ActiveSet{{"zz"}}),
               UnknownItem);
}

// Random instance: a snapshot, weights, a target over a random subset of the
// snapshot's items and a random active set.
struct Instance {
  oracle::Profiles profiles;
  oracle::Weights weights;
  ItemDistribution target;
  ActiveSet active;
};

Instance RandomInstance(std::mt19937_64& rng) {
  Instance in;
  in.profiles = oracle::RandomProfiles(rng, 20, 15);
  in.weights = RandomWeights(rng, in.profiles);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::map<std::string, double> target;
  double total = 0.0;
  for (const auto& item : oracle::AllItems(in.profiles)) {
    if (u(rng) < 0.7 || target.empty()) {
      target[item] = u(rng) + 0.01;
      total += target[item];
    }
    if (u(rng) < 0.5) in.active.items.push_back(item);
  }
  for (auto& [item, p] : target) p /= total;
  in.target = ItemDistribution(target);
  if (in.active.items.empty()) in.active.items.push_back(target.begin()->first);
  return in;
}

TEST(KlGradientTest, MatchesFiniteDifferencesOnRandomInstances) {
  std::mt19937_64 rng(424242);
  for (int trial = 0; trial < 100; ++trial) {
    const Instance in = RandomInstance(rng);
    const Snapshot s = Snapshot::FromProfiles(0, in.profiles);
    const auto m = ProbabilityModel::Uniform(s);
    const auto grad = KlGradient(DebiasTarget(in.target), s, m,
                                 ToWeights(in.weights), in.active);
    for (const auto& k : in.active.items) {
      const double fd = static_cast<double>(oracle::FiniteDifference(
          ToOracle(in.target), in.profiles, in.weights, k, 1e-6L));
      const double err = std::abs(grad.at(k) - fd);
      EXPECT_TRUE(err <= 1e-6 * std::abs(fd) || err <= 1e-9)
          << "trial " << trial << " item " << k << " analytic " << grad.at(k)
          << " fd " << fd;
    }
  }
}

TEST(KlGradientTest, ThreadCountDoesNotChangeResult) {
  std::mt19937_64 rng(9);
  const Instance in = RandomInstance(rng);
  const Snapshot s = Snapshot::FromProfiles(0, in.profiles);
  const auto m = ProbabilityModel::Uniform(s);
  const auto one = KlGradient(DebiasTarget(in.target), s, m,
                              ToWeights(in.weights), in.active, 1);
  const auto four = KlGradient(DebiasTarget(in.target), s, m,
                               ToWeights(in.weights), in.active, 4);
  EXPECT_EQ(one, four);
}

TEST(KlGradientTest, ZeroAtWeightedOptimum) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const auto profiles = oracle::RandomProfiles(rng, 20, 15);
    const WeightVector w = ToWeights(RandomWeights(rng, profiles));
    const Snapshot s = Snapshot::FromProfiles(0, profiles);
    const auto m = ProbabilityModel::Uniform(s);
    const DebiasTarget target(ItemMarginal(s, m, w));
    const auto grad =
        KlGradient(target, s, m, w, ActiveSet{s.item_ids()});
    for (const auto& [item, g] : grad) EXPECT_LT(std::abs(g), 1e-10) << item;
    EXPECT_GE(KlDivergence(target, s, m, w), -1e-12);
  }
}

TEST(KlDivergenceTest, NonNegativeWhenSupportsCoincide) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const auto profiles = oracle::RandomProfiles(rng, 20, 15);
    const Snapshot s = Snapshot::FromProfiles(0, profiles);
    const auto m = ProbabilityModel::Uniform(s);
    const DebiasTarget target(
        ItemMarginal(s, m, ToWeights(RandomWeights(rng, profiles))));
    EXPECT_GE(KlDivergence(target, s, m, ToWeights(RandomWeights(rng, profiles))),
              -1e-12);
  }
}

TEST(OptimizeWeightsTest, AlreadyOptimal) {
  const Snapshot s = Fix1();
  const auto m = ProbabilityModel::Uniform(s);
  OptimizerConfig cfg;
  cfg.p = 3;
  const auto report = OptimizeWeights(DebiasTarget(ItemMarginal(s, m)), s, m, cfg);
  EXPECT_EQ(report.iterations, 0);
  EXPECT_EQ(report.final_kl, 0.0);
  EXPECT_TRUE(report.converged);
  for (const auto& [item, w] : report.final_weights.entries()) EXPECT_EQ(w, 1.0);
}

TEST(OptimizeWeightsTest, Fix1ShiftedTarget) {
  const Snapshot s = Fix1();
  const auto m = ProbabilityModel::Uniform(s);
  OptimizerConfig cfg;
  cfg.p = 3;
  const DebiasTarget target(kShifted);
  const auto report = OptimizeWeights(target, s, m, cfg);
  EXPECT_TRUE(report.converged);
  EXPECT_LT(report.final_kl, 1e-6 * report.kl_trace.front());
  EXPECT_EQ(report.final_kl, report.kl_trace.back());
  for (std::size_t j = 1; j < report.kl_trace.size(); ++j) {
    EXPECT_LE(report.kl_trace[j], report.kl_trace[j - 1]);
  }
  const auto fitted = ItemMarginal(s, m, report.final_weights);
  for (const auto& [item, p] : kShifted.probs()) {
    EXPECT_NEAR(fitted.Get(item), p, 1e-3);
  }
  EXPECT_NEAR(KlDivergence(target, s, m, report.final_weights), report.final_kl,
              1e-15);
}

TEST(OptimizeWeightsTest, InactiveWeightsStayAtOne) {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 10; ++trial) {
    const auto profiles = oracle::RandomProfiles(rng, 20, 15);
    const Snapshot s = Snapshot::FromProfiles(0, profiles);
    const auto m = ProbabilityModel::Uniform(s);
    const DebiasTarget target(
        ItemMarginal(s, m, ToWeights(RandomWeights(rng, profiles, 0.3, 3.0))));
    OptimizerConfig cfg;
    cfg.p = 3;
    const auto report = OptimizeWeights(target, s, m, cfg);
    EXPECT_LE(report.active.p(), 3u);
    for (const auto& item : s.item_ids()) {
      const bool active =
          std::find(report.active.items.begin(), report.active.items.end(),
                    item) != report.active.items.end();
      if (!active) EXPECT_EQ(report.final_weights.Get(item), 1.0);
    }
    EXPECT_LE(report.final_kl, report.kl_trace.front());
  }
}

TEST(OptimizeWeightsTest, NoProgressWhenFirstStepCannotDescend) {
  const Snapshot s = Fix1();
  const auto m = ProbabilityModel::Uniform(s);
  OptimizerConfig cfg;
  cfg.p = 3;
  cfg.step = 1e6;
  cfg.max_halvings = 0;
  EXPECT_THROW(OptimizeWeights(DebiasTarget(kShifted), s, m, cfg), NoProgress);
}

TEST(OptimizeWeightsTest, SupportMismatchPropagates) {
  const Snapshot s = Snapshot::FromProfiles(0, {{"u1", {"a", "b"}}});
  const auto m = ProbabilityModel::Uniform(s);
  EXPECT_THROW(OptimizeWeights(DebiasTarget(kShifted), s, m, OptimizerConfig{}),
               SupportMismatch);
}

}  // namespace
}  // namespace offeval
