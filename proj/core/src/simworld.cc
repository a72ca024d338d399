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
#include "offeval/simworld.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <unordered_set>

#include "offeval/errors.h"
#include "offeval/random.h"

namespace offeval {
namespace {

std::string Padded(char prefix, std::size_t value, std::size_t count) {
  const std::size_t width =
      std::max<std::size_t>(4, std::to_string(count > 0 ? count - 1 : 0).size());
  std::string digits = std::to_string(value);
  return prefix + std::string(width - std::min(width, digits.size()), '0') +
         digits;
}

// Tilted power law weights, normalized; log-sum-exp for stability.
std::vector<double> TiltedLaw(std::size_t n, double alpha, double tilt) {
  std::vector<double> logw(n);
  for (std::size_t s = 1; s <= n; ++s) {
    logw[s - 1] = -alpha * std::log(static_cast<double>(s)) +
                  tilt * static_cast<double>(s);
  }
  const double top = *std::max_element(logw.begin(), logw.end());
  std::vector<double> law(n);
  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    law[j] = std::exp(logw[j] - top);
    total += law[j];
  }
  for (double& p : law) p /= total;
  return law;
}

double MeanSize(std::span<const double> law) {
  double mean = 0.0;
  for (std::size_t j = 0; j < law.size(); ++j) {
    mean += static_cast<double>(j + 1) * law[j];
  }
  return mean;
}

std::vector<double> Cumulative(std::span<const double> law) {
  std::vector<double> out(law.size());
  std::partial_sum(law.begin(), law.end(), out.begin());
  return out;
}

// s distinct ranks drawn sequentially from the popularity law (successive
// sampling without replacement), returned sorted.
std::vector<std::size_t> DrawDistinct(Rng& rng, std::size_t s,
                                      std::span<const double> popularity,
                                      std::span<const double> cumulative) {
  const std::size_t n = popularity.size();
  std::vector<std::size_t> out;
  if (s >= n) {
    out.resize(n);
    std::iota(out.begin(), out.end(), 0);
    return out;
  }
  if (s <= 32 && s * 4 <= n) {
    std::set<std::size_t> picked;
    while (picked.size() < s) picked.insert(rng.FromCumulative(cumulative));
    return {picked.begin(), picked.end()};
  }
  // Efraimidis-Spirakis keys: the s largest log(U)/w.
  std::vector<std::pair<double, std::size_t>> keys(n);
  for (std::size_t r = 0; r < n; ++r) {
    const double u = rng.Uniform() + 0x1.0p-60;
    keys[r] = {std::log(u) / popularity[r], r};
  }
  std::partial_sort(keys.begin(), keys.begin() + static_cast<std::ptrdiff_t>(s),
                    keys.end(), [](const auto& a, const auto& b) {
                      return a.first > b.first;
                    });
  for (std::size_t j = 0; j < s; ++j) out.push_back(keys[j].second);
  std::sort(out.begin(), out.end());
  return out;
}

void CheckPopulation(const PopulationConfig& cfg) {
  if (cfg.n_users < 1 || cfg.n_items < 1) {
    throw InvalidArgument("population needs at least one user and one item");
  }
  if (!(cfg.alpha > 1.0) || !(cfg.beta > 1.0)) {
    throw InvalidArgument("power-law exponents must exceed 1");
  }
}

using PairSet = std::unordered_set<std::string>;

std::string PairKey(const std::string& user, const std::string& item) {
  return user + '\x1f' + item;
}

}  // namespace

std::string SimItemId(std::size_t rank, std::size_t n_items) {
  return Padded('i', rank, n_items);
}

std::string SimUserId(std::size_t index, std::size_t n_users) {
  return Padded('u', index, n_users);
}

std::vector<double> PopularityLaw(std::size_t n_items, double beta) {
  std::vector<double> law(n_items);
  for (std::size_t r = 0; r < n_items; ++r) {
    law[r] = std::pow(static_cast<double>(r + 1), -beta);
  }
  const double total = std::accumulate(law.begin(), law.end(), 0.0);
  for (double& p : law) p /= total;
  return law;
}

std::vector<double> ProfileSizeLaw(std::size_t n_items, double alpha,
                                   double target_mean) {
  const double n = static_cast<double>(n_items);
  if (!(target_mean >= 1.0) || target_mean > n) {
    throw InfeasibleConfig("target mean profile size " +
                           std::to_string(target_mean) + " is outside [1, " +
                           std::to_string(n_items) + "]");
  }
  std::vector<double> law(n_items, 0.0);
  if (target_mean == 1.0) {
    law.front() = 1.0;
    return law;
  }
  if (target_mean == n) {
    law.back() = 1.0;
    return law;
  }
  // The mean is increasing in the tilt; bracket then bisect.
  double lo = -1.0, hi = 1.0;
  while (MeanSize(TiltedLaw(n_items, alpha, lo)) > target_mean) lo *= 2.0;
  while (MeanSize(TiltedLaw(n_items, alpha, hi)) < target_mean) hi *= 2.0;
  for (int iter = 0; iter < 200 && hi - lo > 1e-15; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (MeanSize(TiltedLaw(n_items, alpha, mid)) < target_mean) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return TiltedLaw(n_items, alpha, 0.5 * (lo + hi));
}

InteractionLog GeneratePopulation(const PopulationConfig& cfg) {
  CheckPopulation(cfg);
  const auto sizes = Cumulative(ProfileSizeLaw(cfg.n_items, cfg.alpha,
                                               cfg.target_mean));
  const auto popularity = PopularityLaw(cfg.n_items, cfg.beta);
  const auto cumulative = Cumulative(popularity);

  Rng rng(DeriveSeed(cfg.seed, 0));
  InteractionLog log;
  for (std::size_t u = 0; u < cfg.n_users; ++u) {
    const std::size_t s = rng.FromCumulative(sizes) + 1;
    const std::string user = SimUserId(u, cfg.n_users);
    for (std::size_t r : DrawDistinct(rng, s, popularity, cumulative)) {
      log.Append({user, SimItemId(r, cfg.n_items), 0});
    }
  }
  return log;
}

InteractionLog RunCampaign(const InteractionLog& log,
                           const CampaignConfig& cfg) {
  if (cfg.items.empty()) throw InvalidArgument("campaign has no items");
  if (!(cfg.reach >= 0.0 && cfg.reach <= 1.0) ||
      !(cfg.accept_prob >= 0.0 && cfg.accept_prob <= 1.0)) {
    throw InvalidArgument("campaign reach and accept_prob must be in [0, 1]");
  }
  std::set<std::string> user_set;
  PairSet held;
  for (const auto& e : log.events()) {
    user_set.insert(e.user);
    held.insert(PairKey(e.user, e.item));
  }
  std::vector<std::string> users(user_set.begin(), user_set.end());

  Rng rng(DeriveSeed(cfg.seed, 0));
  const auto n_target = static_cast<std::size_t>(
      std::llround(cfg.reach * static_cast<double>(users.size())));
  std::vector<std::size_t> order(users.size());
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t j = 0; j < n_target; ++j) {
    std::swap(order[j], order[j + rng.Below(order.size() - j)]);
  }
  std::vector<std::size_t> targeted(order.begin(), order.begin() + n_target);
  std::sort(targeted.begin(), targeted.end());

  InteractionLog out = log;
  for (std::size_t u : targeted) {
    for (const auto& item : cfg.items) {
      if (held.contains(PairKey(users[u], item))) continue;
      if (rng.Bernoulli(cfg.accept_prob)) out.Append({users[u], item, cfg.time});
    }
  }
  return out;
}

InteractionLog BuildScenario(const ScenarioConfig& cfg) {
  CheckPopulation(cfg.population);
  if (cfg.horizon < 0) throw InvalidArgument("horizon must be >= 0");
  if (!(cfg.background_rate >= 0.0 && cfg.background_rate <= 1.0)) {
    throw InvalidArgument("background_rate must be in [0, 1]");
  }
  for (std::size_t c = 0; c < cfg.campaigns.size(); ++c) {
    const Timestamp t = cfg.campaigns[c].time;
    if (t < 0 || t > cfg.horizon ||
        (c > 0 && t < cfg.campaigns[c - 1].time)) {
      throw InvalidArgument(
          "campaigns must be sorted by time and lie within [0, horizon]");
    }
  }

  InteractionLog log = GeneratePopulation(cfg.population);
  const std::size_t n_users = cfg.population.n_users;
  const std::size_t n_items = cfg.population.n_items;
  PairSet held;
  for (const auto& e : log.events()) held.insert(PairKey(e.user, e.item));

  auto apply_campaigns = [&](Timestamp day, std::size_t& next) {
    while (next < cfg.campaigns.size() && cfg.campaigns[next].time == day) {
      const std::size_t before = log.size();
      log = RunCampaign(log, cfg.campaigns[next]);
      for (std::size_t e = before; e < log.size(); ++e) {
        held.insert(PairKey(log.events()[e].user, log.events()[e].item));
      }
      ++next;
    }
  };

  std::vector<std::string> users(n_users);
  for (std::size_t u = 0; u < n_users; ++u) users[u] = SimUserId(u, n_users);
  const auto cumulative =
      Cumulative(PopularityLaw(n_items, cfg.population.beta));
  Rng rng(DeriveSeed(cfg.population.seed, 1));

  std::size_t next_campaign = 0;
  apply_campaigns(0, next_campaign);
  for (Timestamp day = 1; day <= cfg.horizon; ++day) {
    if (cfg.background_rate > 0.0) {
      for (std::size_t u = 0; u < n_users; ++u) {
        if (!rng.Bernoulli(cfg.background_rate)) continue;
        std::string item = SimItemId(rng.FromCumulative(cumulative), n_items);
        if (held.insert(PairKey(users[u], item)).second) {
          log.Append({users[u], std::move(item), day});
        }
      }
    }
    apply_campaigns(day, next_campaign);
  }
  return log;
}

std::vector<std::string> S1CampaignItems() {
  std::vector<std::string> items;
  for (std::size_t r = 5; r < 10; ++r) items.push_back(SimItemId(r, 300));
  return items;
}

ScenarioConfig ScenarioS1() {
  ScenarioConfig cfg;
  cfg.population.n_users = 2000;
  cfg.population.n_items = 300;
  cfg.population.seed = 2014;
  cfg.background_rate = 0.002;
  cfg.horizon = 500;
  for (Timestamp t : {330, 430}) {
    CampaignConfig campaign;
    campaign.time = t;
    campaign.items = S1CampaignItems();
    campaign.reach = 0.6;
    campaign.accept_prob = 0.35;
    campaign.seed = static_cast<std::uint64_t>(t);
    cfg.campaigns.push_back(campaign);
  }
  return cfg;
}

}  // namespace offeval
