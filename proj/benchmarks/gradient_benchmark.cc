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
#include <benchmark/benchmark.h>

#include <algorithm>
#include <cstdio>
#include <iterator>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "offeval/debias.h"
#include "offeval/evaluation.h"
#include "offeval/interactions.h"
#include "offeval/probability.h"

namespace offeval {
namespace {

std::string Id(char prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%c%06zu", prefix, i);
  return buf;
}

Snapshot Synthetic(std::size_t n_users, std::size_t n_items,
                   std::size_t profile) {
  std::mt19937_64 rng(n_users * 31 + n_items);
  std::vector<std::string> items;
  for (std::size_t i = 0; i < n_items; ++i) items.push_back(Id('i', i));
  std::map<std::string, std::set<std::string>> profiles;
  for (std::size_t u = 0; u < n_users; ++u) {
    std::vector<std::string> held;
    std::sample(items.begin(), items.end(), std::back_inserter(held), profile,
                rng);
    profiles[Id('u', u)] = {held.begin(), held.end()};
  }
  return Snapshot::FromProfiles(0, profiles);
}

DebiasTarget TiltedTarget(const Snapshot& snap) {
  std::map<std::string, double> t;
  double total = 0.0;
  for (std::size_t i = 0; i < snap.num_items(); ++i) {
    t[snap.item_id(i)] = 1.0 + static_cast<double>(i % 5);
    total += t[snap.item_id(i)];
  }
  for (auto& [item, v] : t) v /= total;
  return DebiasTarget(ItemDistribution(std::move(t)));
}

// Args: users, active-set size.
void BM_KlGradient(benchmark::State& state) {
  const Snapshot snap = Synthetic(state.range(0), 64, 16);
  const auto model = ProbabilityModel::Uniform(snap);
  const auto target = TiltedTarget(snap);
  ActiveSet active;
  for (std::int64_t i = 0; i < state.range(1); ++i) {
    active.items.push_back(snap.item_id(i));
  }
  const WeightVector w = WeightVector::Constant(snap, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(KlGradient(target, snap, model, w, active));
  }
  state.counters["nnz"] = static_cast<double>(snap.nnz());
}
BENCHMARK(BM_KlGradient)
    ->ArgsProduct({{3125, 6250, 12500}, {8, 16, 32}})
    ->Unit(benchmark::kMillisecond);

void BM_ItemMarginal(benchmark::State& state) {
  const Snapshot snap = Synthetic(state.range(0), 300, 8);
  const auto model = ProbabilityModel::Uniform(snap);
  const WeightVector w = WeightVector::Constant(snap, 2.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ItemMarginal(snap, model, w));
  }
  state.SetItemsProcessed(state.iterations() * snap.nnz());
}
BENCHMARK(BM_ItemMarginal)->Arg(2000)->Arg(20000);

void BM_EvaluateExhaustive(benchmark::State& state) {
  const Snapshot snap = Synthetic(state.range(0), 300, 8);
  const auto model = ProbabilityModel::Uniform(snap);
  const ConstantRecommender g({Id('i', 0), Id('i', 1), Id('i', 2)}, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        Evaluate(g, snap, model, QualityKind::kHitInTopK, EvalConfig{}));
  }
  state.SetItemsProcessed(state.iterations() * snap.nnz());
}
BENCHMARK(BM_EvaluateExhaustive)->Arg(2000)->Arg(20000);

void BM_EvaluateStochastic(benchmark::State& state) {
  const Snapshot snap = Synthetic(20000, 300, 8);
  const auto model = ProbabilityModel::Uniform(snap);
  const ConstantRecommender g({Id('i', 0), Id('i', 1), Id('i', 2)}, 3);
  EvalConfig cfg;
  cfg.mode = Stochastic{static_cast<std::uint64_t>(state.range(0)), 1};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        Evaluate(g, snap, model, QualityKind::kHitInTopK, cfg));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EvaluateStochastic)->Arg(20000);

}  // namespace
}  // namespace offeval

BENCHMARK_MAIN();
