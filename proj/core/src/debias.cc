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

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>

#include "offeval/errors.h"
#include "offeval/parallel.h"

namespace offeval {
namespace {

// Reference probabilities aligned with snapshot items. Every support item
// must exist in the snapshot.
std::vector<double> DenseTarget(const DebiasTarget& target,
                                const Snapshot& snap) {
  std::vector<double> dense(snap.num_items(), 0.0);
  std::vector<std::string> missing;
  for (const auto& item : target.support()) {
    if (auto i = snap.FindItem(item)) {
      dense[*i] = target.reference().Get(item);
    } else {
      missing.push_back(item);
    }
  }
  if (!missing.empty()) {
    std::string msg = "reference items absent at t=" +
                      std::to_string(snap.time()) + ":";
    for (const auto& item : missing) msg += " " + item;
    throw SupportMismatch(msg, std::move(missing));
  }
  return dense;
}

void CheckPositiveMarginal(std::span<const double> target,
                           std::span<const double> marginal,
                           const Snapshot& snap) {
  std::vector<std::string> bad;
  for (std::size_t i = 0; i < target.size(); ++i) {
    if (target[i] > 0.0 && !(marginal[i] > 0.0)) bad.push_back(snap.item_id(i));
  }
  if (!bad.empty()) {
    std::string msg = "reference items with zero weighted marginal:";
    for (const auto& item : bad) msg += " " + item;
    throw SupportMismatch(msg, std::move(bad));
  }
}

double DenseKl(std::span<const double> target, std::span<const double> marginal) {
  double total = 0.0;
  for (std::size_t i = 0; i < target.size(); ++i) {
    if (target[i] > 0.0) total += target[i] * std::log(target[i] / marginal[i]);
  }
  return total;
}

// dD/dw_k for each active index. With r(i) = P0(i) / P1(i|w),
//
//   dD/dw_k = (sum_{u holds k} P(u) P(k|u,w) sum_{j in I_u} r(j) P(j|u,w)
//              - P0(k)) / w_k
//
// which is the pairwise-joint form with the sum over i pushed inside the
// user loop.
std::vector<double> DenseGradient(const WeightedLaw& law,
                                  std::span<const double> target,
                                  std::span<const double> marginal,
                                  std::span<const ItemIndex> active,
                                  int threads) {
  const Snapshot& snap = law.snapshot();
  const ProbabilityModel& model = law.model();
  std::vector<double> ratio(target.size(), 0.0);
  for (std::size_t i = 0; i < target.size(); ++i) {
    if (target[i] > 0.0) ratio[i] = target[i] / marginal[i];
  }
  std::vector<double> grad(active.size());
  ParallelFor(active.size(), threads, [&](std::size_t a) {
    const ItemIndex k = active[a];
    auto users = snap.holders(k);
    auto pairs = snap.holder_pairs(k);
    double joint = 0.0;
    for (std::size_t h = 0; h < users.size(); ++h) {
      const UserIndex u = users[h];
      auto items = snap.profile(u);
      const std::size_t begin = snap.profile_begin(u);
      double inner = 0.0;
      for (std::size_t j = 0; j < items.size(); ++j) {
        inner += ratio[items[j]] * law.pair_prob(begin + j);
      }
      joint += model.user_prob(u) * law.pair_prob(pairs[h]) * inner;
    }
    grad[a] = (joint - target[k]) / law.weights()[k];
  });
  return grad;
}

std::vector<ItemIndex> ActiveIndices(const ActiveSet& active,
                                     const Snapshot& snap) {
  if (active.items.empty()) throw InvalidArgument("active set is empty");
  std::vector<ItemIndex> out;
  out.reserve(active.items.size());
  for (const auto& item : active.items) out.push_back(snap.ItemOrThrow(item));
  return out;
}

}  // namespace

DebiasTarget::DebiasTarget(ItemDistribution reference)
    : reference_(std::move(reference)), support_(reference_.Support()) {
  if (support_.empty()) throw InvalidArgument("reference support is empty");
}

const char* ToString(StopReason reason) {
  switch (reason) {
    case StopReason::kGradTol:
      return "grad_tol";
    case StopReason::kKlTol:
      return "kl_tol";
    case StopReason::kMaxIters:
      return "max_iters";
    case StopReason::kLineSearch:
      return "line_search";
  }
  return "unknown";
}

double KlDivergence(const DebiasTarget& target, const Snapshot& snap,
                    const ProbabilityModel& model, const WeightVector& weights) {
  const auto dense_target = DenseTarget(target, snap);
  const WeightedLaw law(snap, model, weights);
  const auto marginal = law.Marginal();
  CheckPositiveMarginal(dense_target, marginal, snap);
  return DenseKl(dense_target, marginal);
}

ActiveSet SelectActiveSet(const DebiasTarget& target,
                          const ItemDistribution& current, std::size_t p) {
  struct Gap {
    double gap;
    const std::string* item;
  };
  std::vector<Gap> gaps;
  gaps.reserve(current.size());
  for (const auto& [item, prob] : current.probs()) {
    gaps.push_back({std::abs(target.reference().Get(item) - prob), &item});
  }
  const std::size_t n = std::min(p, gaps.size());
  std::partial_sort(gaps.begin(), gaps.begin() + static_cast<std::ptrdiff_t>(n),
                    gaps.end(), [](const Gap& a, const Gap& b) {
                      if (a.gap != b.gap) return a.gap > b.gap;
                      return *a.item < *b.item;
                    });
  ActiveSet active;
  for (std::size_t i = 0; i < n; ++i) active.items.push_back(*gaps[i].item);
  return active;
}

std::map<std::string, double> KlGradient(const DebiasTarget& target,
                                         const Snapshot& snap,
                                         const ProbabilityModel& model,
                                         const WeightVector& weights,
                                         const ActiveSet& active, int threads) {
  const auto dense_target = DenseTarget(target, snap);
  const auto indices = ActiveIndices(active, snap);
  const WeightedLaw law(snap, model, weights);
  const auto marginal = law.Marginal();
  CheckPositiveMarginal(dense_target, marginal, snap);
  const auto grad =
      DenseGradient(law, dense_target, marginal, indices, threads);
  std::map<std::string, double> out;
  for (std::size_t a = 0; a < indices.size(); ++a) {
    out[snap.item_id(indices[a])] = grad[a];
  }
  return out;
}

OptimizerReport OptimizeWeights(const DebiasTarget& target,
                                const Snapshot& snap,
                                const ProbabilityModel& model,
                                const OptimizerConfig& cfg) {
  if (cfg.p == 0 || !(cfg.step > 0.0) || cfg.max_iters <= 0 ||
      !(cfg.grad_tol > 0.0) || !(cfg.kl_tol > 0.0)) {
    throw InvalidArgument("optimizer settings must be positive");
  }
  const auto dense_target = DenseTarget(target, snap);

  OptimizerReport report;
  report.active = SelectActiveSet(
      target, ItemDistribution::FromDense(snap, DenseMarginal(snap, model)),
      cfg.p);
  const auto active = ActiveIndices(report.active, snap);

  std::vector<double> log_weights(active.size(), 0.0);
  std::vector<double> weights(snap.num_items(), 1.0);
  auto weights_at = [&](std::span<const double> theta) {
    std::vector<double> w(snap.num_items(), 1.0);
    for (std::size_t a = 0; a < active.size(); ++a) {
      w[active[a]] = std::exp(theta[a]);
    }
    return w;
  };

  auto law = std::make_unique<WeightedLaw>(snap, model, weights);
  auto marginal = law->Marginal();
  CheckPositiveMarginal(dense_target, marginal, snap);
  double kl = DenseKl(dense_target, marginal);
  report.kl_trace.push_back(kl);

  double step = cfg.step;
  bool stopped = false;
  while (report.iterations < cfg.max_iters) {
    auto grad = DenseGradient(*law, dense_target, marginal, active, cfg.threads);
    // Chain rule for w = exp(theta).
    double norm_sq = 0.0;
    for (std::size_t a = 0; a < active.size(); ++a) {
      grad[a] *= weights[active[a]];
      norm_sq += grad[a] * grad[a];
    }
    if (std::sqrt(norm_sq) < cfg.grad_tol) {
      report.reason = StopReason::kGradTol;
      stopped = true;
      break;
    }

    bool accepted = false;
    std::vector<double> trial(active.size());
    for (int halvings = 0; halvings <= cfg.max_halvings; ++halvings) {
      for (std::size_t a = 0; a < active.size(); ++a) {
        trial[a] = log_weights[a] - step * grad[a];
      }
      auto trial_weights = weights_at(trial);
      const bool representable = std::all_of(
          trial_weights.begin(), trial_weights.end(),
          [](double w) { return w > 0.0 && std::isfinite(w); });
      if (!representable) {
        step *= 0.5;
        continue;
      }
      auto trial_law = std::make_unique<WeightedLaw>(snap, model, trial_weights);
      auto trial_marginal = trial_law->Marginal();
      bool positive = true;
      for (std::size_t i = 0; i < dense_target.size(); ++i) {
        if (dense_target[i] > 0.0 && !(trial_marginal[i] > 0.0)) positive = false;
      }
      const double trial_kl =
          positive ? DenseKl(dense_target, trial_marginal)
                   : std::numeric_limits<double>::infinity();
      if (std::isfinite(trial_kl) && trial_kl < kl) {
        const double improvement =
            (kl - trial_kl) / std::max(std::abs(kl), 1e-300);
        log_weights = trial;
        weights = std::move(trial_weights);
        law = std::move(trial_law);
        marginal = std::move(trial_marginal);
        kl = trial_kl;
        report.kl_trace.push_back(kl);
        ++report.iterations;
        step *= cfg.step_growth;
        accepted = true;
        if (improvement < cfg.kl_tol) {
          report.reason = StopReason::kKlTol;
          stopped = true;
        }
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (report.iterations == 0) {
        throw NoProgress("no decreasing step found from the initial weights");
      }
      report.reason = StopReason::kLineSearch;
      stopped = true;
    }
    if (stopped) break;
  }
  if (!stopped) report.reason = StopReason::kMaxIters;
  report.converged = report.reason == StopReason::kGradTol ||
                     report.reason == StopReason::kKlTol;
  report.final_kl = kl;
  for (std::size_t a = 0; a < active.size(); ++a) {
    report.final_weights.Set(snap.item_id(active[a]), weights[active[a]]);
  }
  return report;
}

}  // namespace offeval
