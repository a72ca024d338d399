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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "offeval/errors.h"
#include "offeval/parallel.h"
#include "offeval/random.h"

namespace offeval {
namespace {

constexpr std::size_t kUserChunk = 512;

struct Moments {
  double sum = 0.0;
  double sum_sq = 0.0;
};

// Remaining profile of user u once the item at profile position 'skip' is
// removed.
void LeaveOneOut(std::span<const ItemIndex> items, std::size_t skip,
                 std::vector<ItemIndex>& out) {
  out.clear();
  for (std::size_t j = 0; j < items.size(); ++j) {
    if (j != skip) out.push_back(items[j]);
  }
}

class PairScorer {
 public:
  PairScorer(const Recommender& g, const Snapshot& snap, QualityKind q)
      : g_(g), snap_(snap), q_(q) {
    if (g.is_constant()) fixed_ = g.Recommend({}, snap);
  }

  double Score(UserIndex u, std::size_t position,
               std::vector<ItemIndex>& scratch) const {
    auto items = snap_.profile(u);
    const std::string& hidden = snap_.item_id(items[position]);
    if (fixed_) return Quality(q_, *fixed_, hidden);
    LeaveOneOut(items, position, scratch);
    auto rec = g_.Recommend(scratch, snap_);
    if (rec.size() > g_.k()) rec.resize(g_.k());
    return Quality(q_, rec, hidden);
  }

 private:
  const Recommender& g_;
  const Snapshot& snap_;
  QualityKind q_;
  std::optional<std::vector<std::string>> fixed_;
};

EvalResult EvaluateExhaustive(const PairScorer& scorer, const Snapshot& snap,
                              const WeightedLaw& law, int threads) {
  const std::size_t chunks = (snap.num_users() + kUserChunk - 1) / kUserChunk;
  std::vector<double> partial(chunks, 0.0);
  ParallelFor(chunks, threads, [&](std::size_t c) {
    std::vector<ItemIndex> scratch;
    const std::size_t end = std::min(snap.num_users(), (c + 1) * kUserChunk);
    double total = 0.0;
    for (std::size_t u = c * kUserChunk; u < end; ++u) {
      const auto user = static_cast<UserIndex>(u);
      const std::size_t begin = snap.profile_begin(user);
      double user_total = 0.0;
      for (std::size_t j = 0; j < snap.profile(user).size(); ++j) {
        user_total += law.pair_prob(begin + j) * scorer.Score(user, j, scratch);
      }
      total += law.model().user_prob(user) * user_total;
    }
    partial[c] = total;
  });
  EvalResult result;
  result.score = std::accumulate(partial.begin(), partial.end(), 0.0);
  result.std_error = 0.0;
  result.pairs_evaluated = snap.nnz();
  return result;
}

EvalResult EvaluateStochastic(const PairScorer& scorer, const Snapshot& snap,
                              const WeightedLaw& law, const Stochastic& mode,
                              int threads) {
  if (mode.draws == 0) throw InvalidArgument("stochastic draws must be >= 1");
  std::vector<double> user_cumulative(snap.num_users());
  std::partial_sum(law.model().user_law().begin(),
                   law.model().user_law().end(), user_cumulative.begin());

  const std::uint64_t blocks = (mode.draws + kDrawBlock - 1) / kDrawBlock;
  std::vector<Moments> partial(blocks);
  ParallelFor(blocks, threads, [&](std::size_t b) {
    Rng rng(DeriveSeed(mode.seed, b));
    std::vector<ItemIndex> scratch;
    const std::uint64_t n =
        std::min<std::uint64_t>(kDrawBlock, mode.draws - b * kDrawBlock);
    Moments m;
    for (std::uint64_t d = 0; d < n; ++d) {
      const auto u = static_cast<UserIndex>(rng.FromCumulative(user_cumulative));
      const std::size_t begin = snap.profile_begin(u);
      const std::size_t size = snap.profile(u).size();
      const double target = rng.Uniform();
      std::size_t pick = size - 1;
      double acc = 0.0;
      for (std::size_t j = 0; j < size; ++j) {
        acc += law.pair_prob(begin + j);
        if (target < acc) {
          pick = j;
          break;
        }
      }
      const double value = scorer.Score(u, pick, scratch);
      m.sum += value;
      m.sum_sq += value * value;
    }
    partial[b] = m;
  });

  Moments total;
  for (const auto& m : partial) {
    total.sum += m.sum;
    total.sum_sq += m.sum_sq;
  }
  const double n = static_cast<double>(mode.draws);
  EvalResult result;
  result.score = total.sum / n;
  if (mode.draws > 1) {
    const double var =
        std::max(0.0, (total.sum_sq - n * result.score * result.score) / (n - 1));
    result.std_error = std::sqrt(var / n);
  }
  result.pairs_evaluated = mode.draws;
  return result;
}

}  // namespace

ItemSet RemoveItem(const ItemSet& profile, const std::string& item) {
  if (!profile.contains(item)) {
    throw ItemNotInProfile("item '" + item + "' is not in the profile");
  }
  ItemSet out = profile;
  out.erase(item);
  return out;
}

ConstantRecommender::ConstantRecommender(std::vector<std::string> items,
                                         std::size_t k)
    : items_(std::move(items)), k_(k) {
  if (k_ == 0) throw InvalidArgument("recommendation size k must be >= 1");
  if (items_.size() > k_) items_.resize(k_);
  std::set<std::string> seen;
  for (const auto& item : items_) {
    if (!seen.insert(item).second) {
      throw InvalidArgument("duplicate recommended item '" + item + "'");
    }
  }
}

double Quality(QualityKind kind, std::span<const std::string> recommendation,
               const std::string& item) {
  auto it = std::find(recommendation.begin(), recommendation.end(), item);
  if (it == recommendation.end()) return 0.0;
  switch (kind) {
    case QualityKind::kHitInTopK:
      return 1.0;
    case QualityKind::kInverseRank:
      return 1.0 / static_cast<double>(it - recommendation.begin() + 1);
  }
  return 0.0;
}

EvalResult Evaluate(const Recommender& g, const Snapshot& snap,
                    const ProbabilityModel& model, QualityKind q,
                    const EvalConfig& cfg) {
  if (snap.num_users() == 0) throw EmptySnapshot("empty snapshot");
  const WeightedLaw law(snap, model,
                        cfg.weights ? cfg.weights->Resolve(snap)
                                    : std::vector<double>(snap.num_items(), 1.0));
  const PairScorer scorer(g, snap, q);
  if (const auto* stochastic = std::get_if<Stochastic>(&cfg.mode)) {
    return EvaluateStochastic(scorer, snap, law, *stochastic, cfg.threads);
  }
  return EvaluateExhaustive(scorer, snap, law, cfg.threads);
}

double ConstantScore(std::span<const std::string> items,
                     const ItemDistribution& dist, QualityKind q) {
  double total = 0.0;
  for (const auto& [item, p] : dist.probs()) {
    if (p != 0.0) total += p * Quality(q, items, item);
  }
  return total;
}

std::vector<TimelinePoint> TimelineEvaluate(const Recommender& g,
                                            const InteractionLog& log,
                                            std::span<const Timestamp> times,
                                            const ModelBuilder& model,
                                            QualityKind q,
                                            const EvalConfig& cfg) {
  if (times.empty()) throw InvalidArgument("timeline needs at least one time");
  for (std::size_t t = 1; t < times.size(); ++t) {
    if (times[t] <= times[t - 1]) {
      throw InvalidArgument("timeline times must be strictly increasing");
    }
  }
  std::vector<TimelinePoint> out;
  out.reserve(times.size());
  for (Timestamp t : times) {
    const Snapshot snap = BuildSnapshot(log, t);
    const ProbabilityModel m = model(snap);
    EvalConfig point_cfg = cfg;
    point_cfg.weight_schedule.clear();
    if (auto it = cfg.weight_schedule.find(t); it != cfg.weight_schedule.end()) {
      point_cfg.weights = it->second;
    }
    out.push_back({t, Evaluate(g, snap, m, q, point_cfg)});
  }
  return out;
}

}  // namespace offeval
