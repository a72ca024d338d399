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
#include "offeval/interactions.h"

#include <algorithm>
#include <numeric>

#include "offeval/errors.h"

namespace offeval {
namespace {

void CheckEvent(const InteractionEvent& e) {
  if (e.timestamp < 0) {
    throw InvalidArgument("negative timestamp " + std::to_string(e.timestamp) +
                          " for (" + e.user + ", " + e.item + ")");
  }
  if (e.user.empty() || e.item.empty()) {
    throw InvalidArgument("empty user or item identifier");
  }
}

template <typename Index>
std::optional<Index> FindSorted(const std::vector<std::string>& ids,
                                std::string_view id) {
  auto it = std::lower_bound(ids.begin(), ids.end(), id);
  if (it == ids.end() || *it != id) return std::nullopt;
  return static_cast<Index>(it - ids.begin());
}

}  // namespace

InteractionLog::InteractionLog(std::vector<InteractionEvent> events)
    : events_(std::move(events)) {
  for (const auto& e : events_) CheckEvent(e);
}

void InteractionLog::Append(InteractionEvent event) {
  CheckEvent(event);
  events_.push_back(std::move(event));
}

std::optional<Timestamp> InteractionLog::LastTimestamp() const {
  if (events_.empty()) return std::nullopt;
  Timestamp last = events_.front().timestamp;
  for (const auto& e : events_) last = std::max(last, e.timestamp);
  return last;
}

Snapshot Snapshot::FromProfiles(
    Timestamp time,
    const std::map<std::string, std::set<std::string>>& profiles) {
  Snapshot snap;
  snap.time_ = time;

  std::set<std::string> items;
  for (const auto& [user, held] : profiles) {
    if (held.empty()) continue;
    snap.user_ids_.push_back(user);
    items.insert(held.begin(), held.end());
  }
  if (snap.user_ids_.empty()) {
    throw EmptySnapshot("snapshot at t=" + std::to_string(time) +
                        " has no users");
  }
  snap.item_ids_.assign(items.begin(), items.end());

  const std::size_t n_users = snap.user_ids_.size();
  const std::size_t n_items = snap.item_ids_.size();
  snap.user_offsets_.assign(n_users + 1, 0);
  std::vector<std::size_t> holder_count(n_items, 0);
  for (UserIndex u = 0; u < n_users; ++u) {
    const auto& held = profiles.at(snap.user_ids_[u]);
    snap.user_offsets_[u + 1] = snap.user_offsets_[u] + held.size();
    // std::set iterates in identifier order, which is index order.
    for (const auto& item : held) {
      ItemIndex i = *FindSorted<ItemIndex>(snap.item_ids_, item);
      snap.profile_items_.push_back(i);
      ++holder_count[i];
    }
  }

  snap.item_offsets_.assign(n_items + 1, 0);
  std::partial_sum(holder_count.begin(), holder_count.end(),
                   snap.item_offsets_.begin() + 1);
  snap.holder_users_.resize(snap.nnz());
  snap.holder_pairs_.resize(snap.nnz());
  std::vector<std::size_t> cursor(snap.item_offsets_.begin(),
                                  snap.item_offsets_.end() - 1);
  snap.pair_lookup_.reserve(snap.nnz());
  for (UserIndex u = 0; u < n_users; ++u) {
    for (std::size_t nz = snap.user_offsets_[u]; nz < snap.user_offsets_[u + 1];
         ++nz) {
      ItemIndex i = snap.profile_items_[nz];
      snap.holder_users_[cursor[i]] = u;
      snap.holder_pairs_[cursor[i]] = nz;
      ++cursor[i];
      snap.pair_lookup_.emplace(Key(u, i), nz);
    }
  }
  return snap;
}

std::optional<UserIndex> Snapshot::FindUser(std::string_view id) const {
  return FindSorted<UserIndex>(user_ids_, id);
}

std::optional<ItemIndex> Snapshot::FindItem(std::string_view id) const {
  return FindSorted<ItemIndex>(item_ids_, id);
}

UserIndex Snapshot::UserOrThrow(std::string_view id) const {
  auto u = FindUser(id);
  if (!u) throw UnknownUser("unknown user '" + std::string(id) + "'");
  return *u;
}

ItemIndex Snapshot::ItemOrThrow(std::string_view id) const {
  auto i = FindItem(id);
  if (!i) throw UnknownItem("unknown item '" + std::string(id) + "'");
  return *i;
}

bool Snapshot::Contains(UserIndex u, ItemIndex i) const {
  return pair_lookup_.contains(Key(u, i));
}

std::optional<std::size_t> Snapshot::PairIndex(UserIndex u, ItemIndex i) const {
  auto it = pair_lookup_.find(Key(u, i));
  if (it == pair_lookup_.end()) return std::nullopt;
  return it->second;
}

std::set<std::string> Snapshot::ProfileOf(std::string_view user) const {
  std::set<std::string> out;
  for (ItemIndex i : profile(UserOrThrow(user))) out.insert(item_ids_[i]);
  return out;
}

Snapshot BuildSnapshot(const InteractionLog& log, Timestamp t) {
  if (t < 0) throw InvalidArgument("snapshot time must be >= 0");
  std::map<std::string, std::set<std::string>> profiles;
  for (const auto& e : log.events()) {
    if (e.timestamp <= t) profiles[e.user].insert(e.item);
  }
  if (profiles.empty()) {
    throw EmptySnapshot("no event at or before t=" + std::to_string(t));
  }
  return Snapshot::FromProfiles(t, profiles);
}

}  // namespace offeval
