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

// Synthetic interaction dynamics: a power-law population at t=0, organic
// background additions, and recommendation campaigns that push a fixed item
// set to a fraction of the users.

#ifndef OFFEVAL_SIMWORLD_H_
#define OFFEVAL_SIMWORLD_H_

#include <cstdint>
#include <string>
#include <vector>

#include "offeval/interactions.h"

namespace offeval {

struct PopulationConfig {
  std::size_t n_users = 2000;
  std::size_t n_items = 300;
  // Profile sizes follow P(s) ~ s^-alpha exp(tilt s) on [1, n_items]; the
  // tilt is solved numerically so that E[s] = target_mean.
  double alpha = 2.0;
  double target_mean = 5.33;
  // Item popularity P(rank r) ~ r^-beta.
  double beta = 1.5;
  std::uint64_t seed = 1;
};

struct CampaignConfig {
  Timestamp time = 0;
  std::vector<std::string> items;
  double reach = 0.5;
  double accept_prob = 0.3;
  std::uint64_t seed = 1;
};

struct ScenarioConfig {
  PopulationConfig population;
  // Per-day probability that a user adds one popularity-law item.
  double background_rate = 0.0;
  std::vector<CampaignConfig> campaigns;
  Timestamp horizon = 0;
};

// Identifiers are zero-padded so lexicographic order matches rank order:
// items "i0000".."i0299" (i0000 the most popular), users "u0000"...
std::string SimItemId(std::size_t rank, std::size_t n_items);
std::string SimUserId(std::size_t index, std::size_t n_users);

// Popularity law over item ranks, normalized.
std::vector<double> PopularityLaw(std::size_t n_items, double beta);

// Profile-size law on sizes 1..n_items (entry s-1 is P(s)), mean matched to
// target_mean. Throws InfeasibleConfig if target_mean is outside
// [1, n_items].
std::vector<double> ProfileSizeLaw(std::size_t n_items, double alpha,
                                   double target_mean);

// Every user at t=0 with a profile of law-drawn size, items drawn without
// replacement from the popularity law.
InteractionLog GeneratePopulation(const PopulationConfig& cfg);

// A seed-deterministic sample of round(reach * #users) users is targeted;
// each targeted user lacking a campaign item adds it at cfg.time with
// probability accept_prob. Users are those appearing in 'log'.
InteractionLog RunCampaign(const InteractionLog& log, const CampaignConfig& cfg);

InteractionLog BuildScenario(const ScenarioConfig& cfg);

// The fixture used throughout the tests: 2000 users, 300 items, default
// laws, background rate 0.002, campaigns at t=330 and t=430 pushing
// S1CampaignItems() with reach 0.6 and acceptance 0.35, horizon 500.
ScenarioConfig ScenarioS1();
std::vector<std::string> S1CampaignItems();

}  // namespace offeval

#endif  // OFFEVAL_SIMWORLD_H_
