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
#include "offeval/probability.h"

#include <algorithm>
#include <cmath>

#include "offeval/errors.h"

namespace offeval {
namespace {

constexpr double kLawTolerance = 1e-12;
constexpr double kDistributionTolerance = 1e-9;

std::vector<double> Normalized(std::vector<double> values, const char* what) {
  double total = 0.0;
  for (double v : values) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw InvalidArgument(std::string(what) + " must be finite and >= 0");
    }
    total += v;
  }
  if (!(total > 0.0)) {
    throw InvalidArgument(std::string(what) + " has zero total mass");
  }
  for (double& v : values) v /= total;
  return values;
}

}  // namespace

ProbabilityModel ProbabilityModel::Uniform(const Snapshot& snap) {
  ProbabilityModel model;
  model.user_law_.assign(snap.num_users(),
                         1.0 / static_cast<double>(snap.num_users()));
  model.conditional_.resize(snap.nnz());
  for (UserIndex u = 0; u < snap.num_users(); ++u) {
    const double p = 1.0 / static_cast<double>(snap.profile(u).size());
    const std::size_t begin = snap.profile_begin(u);
    std::fill_n(model.conditional_.begin() + begin, snap.profile(u).size(), p);
  }
  return model;
}

ProbabilityModel ProbabilityModel::FromRules(
    const Snapshot& snap, const std::function<double(UserIndex)>& user_weight,
    const std::function<double(UserIndex, ItemIndex)>& item_weight) {
  ProbabilityModel model;
  std::vector<double> users(snap.num_users());
  for (UserIndex u = 0; u < snap.num_users(); ++u) users[u] = user_weight(u);
  model.user_law_ = Normalized(std::move(users), "user law");
  model.conditional_.resize(snap.nnz());
  for (UserIndex u = 0; u < snap.num_users(); ++u) {
    auto items = snap.profile(u);
    std::vector<double> row(items.size());
    for (std::size_t j = 0; j < items.size(); ++j) {
      row[j] = item_weight(u, items[j]);
    }
    row = Normalized(std::move(row), "conditional law");
    std::copy(row.begin(), row.end(),
              model.conditional_.begin() + snap.profile_begin(u));
  }
  return model;
}

ProbabilityModel::ProbabilityModel(const Snapshot& snap,
                                   std::vector<double> user_law,
                                   std::vector<double> conditional)
    : user_law_(std::move(user_law)), conditional_(std::move(conditional)) {
  CheckCompatible(snap);
  double total = 0.0;
  for (double p : user_law_) {
    if (!(p >= 0.0)) throw InvalidArgument("negative user probability");
    total += p;
  }
  if (std::abs(total - 1.0) > kLawTolerance) {
    throw InvalidArgument("user law sums to " + std::to_string(total));
  }
  for (UserIndex u = 0; u < snap.num_users(); ++u) {
    double row = 0.0;
    const std::size_t begin = snap.profile_begin(u);
    for (std::size_t j = 0; j < snap.profile(u).size(); ++j) {
      const double p = conditional_[begin + j];
      if (!(p >= 0.0)) throw InvalidArgument("negative conditional probability");
      row += p;
    }
    if (std::abs(row - 1.0) > kLawTolerance) {
      throw InvalidArgument("conditional law of user '" + snap.user_id(u) +
                            "' sums to " + std::to_string(row));
    }
  }
}

double ProbabilityModel::Conditional(const Snapshot& snap, UserIndex u,
                                     ItemIndex i) const {
  auto pair = snap.PairIndex(u, i);
  return pair ? conditional_[*pair] : 0.0;
}

void ProbabilityModel::CheckCompatible(const Snapshot& snap) const {
  if (user_law_.size() != snap.num_users() ||
      conditional_.size() != snap.nnz()) {
    throw InvalidArgument("probability model does not match snapshot shape");
  }
}

ModelBuilder UniformModel() {
  return [](const Snapshot& snap) { return ProbabilityModel::Uniform(snap); };
}

WeightVector::WeightVector(std::map<std::string, double> weights) {
  for (auto& [item, w] : weights) Set(item, w);
}

WeightVector WeightVector::Constant(const Snapshot& snap, double value) {
  WeightVector w;
  for (const auto& item : snap.item_ids()) w.Set(item, value);
  return w;
}

void WeightVector::Set(const std::string& item, double weight) {
  if (!(weight > 0.0) || !std::isfinite(weight)) {
    throw InvalidArgument("weight of item '" + item +
                          "' must be positive and finite");
  }
  weights_[item] = weight;
}

double WeightVector::Get(const std::string& item) const {
  auto it = weights_.find(item);
  return it == weights_.end() ? 1.0 : it->second;
}

std::vector<double> WeightVector::Resolve(const Snapshot& snap) const {
  std::vector<double> dense(snap.num_items(), 1.0);
  for (const auto& [item, w] : weights_) {
    if (auto i = snap.FindItem(item)) dense[*i] = w;
  }
  return dense;
}

ItemDistribution::ItemDistribution(std::map<std::string, double> probs)
    : probs_(std::move(probs)) {
  double total = 0.0;
  for (const auto& [item, p] : probs_) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw InvalidArgument("probability of item '" + item +
                            "' must be finite and >= 0");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > kDistributionTolerance) {
    throw InvalidArgument("item distribution sums to " + std::to_string(total));
  }
}

ItemDistribution ItemDistribution::FromDense(const Snapshot& snap,
                                             std::span<const double> probs) {
  std::map<std::string, double> m;
  for (ItemIndex i = 0; i < snap.num_items(); ++i) {
    m.emplace_hint(m.end(), snap.item_id(i), probs[i]);
  }
  return ItemDistribution(std::move(m));
}

double ItemDistribution::Get(const std::string& item) const {
  auto it = probs_.find(item);
  return it == probs_.end() ? 0.0 : it->second;
}

std::vector<std::string> ItemDistribution::Support() const {
  std::vector<std::string> out;
  for (const auto& [item, p] : probs_) {
    if (p > 0.0) out.push_back(item);
  }
  return out;
}

WeightedLaw::WeightedLaw(const Snapshot& snap, const ProbabilityModel& model,
                         std::span<const double> dense_weights)
    : snap_(&snap),
      model_(&model),
      weights_(dense_weights.begin(), dense_weights.end()),
      pair_prob_(snap.nnz()) {
  model.CheckCompatible(snap);
  if (weights_.size() != snap.num_items()) {
    throw InvalidArgument("weight vector does not match snapshot items");
  }
  for (double w : weights_) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw InvalidArgument("weights must be positive and finite");
    }
  }
  for (UserIndex u = 0; u < snap.num_users(); ++u) {
    auto items = snap.profile(u);
    const std::size_t begin = snap.profile_begin(u);
    double denom = 0.0;
    for (std::size_t j = 0; j < items.size(); ++j) {
      denom += weights_[items[j]] * model.conditional(begin + j);
    }
    for (std::size_t j = 0; j < items.size(); ++j) {
      pair_prob_[begin + j] =
          weights_[items[j]] * model.conditional(begin + j) / denom;
    }
  }
}

std::vector<double> WeightedLaw::Marginal() const {
  std::vector<double> marginal(snap_->num_items(), 0.0);
  for (UserIndex u = 0; u < snap_->num_users(); ++u) {
    const double pu = model_->user_prob(u);
    auto items = snap_->profile(u);
    const std::size_t begin = snap_->profile_begin(u);
    for (std::size_t j = 0; j < items.size(); ++j) {
      marginal[items[j]] += pu * pair_prob_[begin + j];
    }
  }
  return marginal;
}

double WeightedLaw::PairwiseJoint(ItemIndex i, ItemIndex k) const {
  // Walk the holders of the rarer item and probe the other.
  if (snap_->holders(k).size() < snap_->holders(i).size()) std::swap(i, k);
  auto users = snap_->holders(i);
  auto pairs = snap_->holder_pairs(i);
  double total = 0.0;
  for (std::size_t h = 0; h < users.size(); ++h) {
    auto other = snap_->PairIndex(users[h], k);
    if (!other) continue;
    total += pair_prob_[pairs[h]] * pair_prob_[*other] *
             model_->user_prob(users[h]);
  }
  return total;
}

std::vector<double> DenseMarginal(const Snapshot& snap,
                                  const ProbabilityModel& model) {
  model.CheckCompatible(snap);
  std::vector<double> marginal(snap.num_items(), 0.0);
  for (UserIndex u = 0; u < snap.num_users(); ++u) {
    auto items = snap.profile(u);
    const std::size_t begin = snap.profile_begin(u);
    for (std::size_t j = 0; j < items.size(); ++j) {
      marginal[items[j]] += model.user_prob(u) * model.conditional(begin + j);
    }
  }
  return marginal;
}

double WeightedConditional(const Snapshot& snap, const ProbabilityModel& model,
                           const std::string& user, const std::string& item,
                           const WeightVector& weights) {
  const UserIndex u = snap.UserOrThrow(user);
  const auto i = snap.FindItem(item);
  const auto pair = i ? snap.PairIndex(u, *i) : std::nullopt;
  if (!pair) {
    throw ItemNotInProfile("item '" + item + "' is not in the profile of '" +
                           user + "'");
  }
  model.CheckCompatible(snap);
  double denom = 0.0;
  auto items = snap.profile(u);
  const std::size_t begin = snap.profile_begin(u);
  for (std::size_t j = 0; j < items.size(); ++j) {
    denom += weights.Get(snap.item_id(items[j])) * model.conditional(begin + j);
  }
  return weights.Get(item) * model.conditional(*pair) / denom;
}

ItemDistribution ItemMarginal(const Snapshot& snap,
                              const ProbabilityModel& model,
                              const WeightVector& weights) {
  WeightedLaw law(snap, model, weights);
  return ItemDistribution::FromDense(snap, law.Marginal());
}

ItemDistribution ItemMarginal(const Snapshot& snap,
                              const ProbabilityModel& model) {
  return ItemDistribution::FromDense(snap, DenseMarginal(snap, model));
}

double PairwiseJoint(const Snapshot& snap, const ProbabilityModel& model,
                     const WeightVector& weights, const std::string& i,
                     const std::string& k) {
  const ItemIndex ii = snap.ItemOrThrow(i);
  const ItemIndex kk = snap.ItemOrThrow(k);
  WeightedLaw law(snap, model, weights);
  return law.PairwiseJoint(ii, kk);
}

}  // namespace offeval
