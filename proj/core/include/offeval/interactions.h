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

// Timestamped user-item interaction logs and the frozen per-user item sets
// ("snapshots") derived from them.

#ifndef OFFEVAL_INTERACTIONS_H_
#define OFFEVAL_INTERACTIONS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace offeval {

// Integer days since the dataset epoch.
using Timestamp = std::int64_t;
using UserIndex = std::uint32_t;
using ItemIndex = std::uint32_t;

struct InteractionEvent {
  std::string user;
  std::string item;
  Timestamp timestamp = 0;

  bool operator==(const InteractionEvent&) const = default;
};

// Ordered collection of events. Events need not be sorted and may repeat a
// (user, item) pair; snapshots keep the earliest occurrence.
class InteractionLog {
 public:
  InteractionLog() = default;
  explicit InteractionLog(std::vector<InteractionEvent> events);

  // Throws InvalidArgument on a negative timestamp or empty identifier.
  void Append(InteractionEvent event);

  const std::vector<InteractionEvent>& events() const { return events_; }
  std::size_t size() const { return events_.size(); }
  bool empty() const { return events_.empty(); }

  // Largest timestamp in the log, or nullopt when empty.
  std::optional<Timestamp> LastTimestamp() const;

  bool operator==(const InteractionLog&) const = default;

 private:
  std::vector<InteractionEvent> events_;
};

// State of the system at time t: for every user the set I_u of items held.
//
// Users and items are indexed densely in lexicographic order of their
// identifiers, so index order and identifier order agree. Profiles are
// stored user-major (CSR); each stored (user, item) membership has a "pair
// index" in [0, nnz) that per-pair arrays (conditional laws, weighted
// conditionals) are aligned with. An item-major view lists the holders of
// every item together with the matching pair indices.
class Snapshot {
 public:
  // Builds a snapshot directly from profiles. Users with empty profiles are
  // dropped. Throws EmptySnapshot when no user remains.
  static Snapshot FromProfiles(
      Timestamp time, const std::map<std::string, std::set<std::string>>& profiles);

  Timestamp time() const { return time_; }
  std::size_t num_users() const { return user_ids_.size(); }
  std::size_t num_items() const { return item_ids_.size(); }
  std::size_t nnz() const { return profile_items_.size(); }
  double mean_profile_size() const {
    return static_cast<double>(nnz()) / static_cast<double>(num_users());
  }

  const std::string& user_id(UserIndex u) const { return user_ids_[u]; }
  const std::string& item_id(ItemIndex i) const { return item_ids_[i]; }
  const std::vector<std::string>& user_ids() const { return user_ids_; }
  const std::vector<std::string>& item_ids() const { return item_ids_; }

  std::optional<UserIndex> FindUser(std::string_view id) const;
  std::optional<ItemIndex> FindItem(std::string_view id) const;
  // Throwing variants: UnknownUser / UnknownItem.
  UserIndex UserOrThrow(std::string_view id) const;
  ItemIndex ItemOrThrow(std::string_view id) const;

  // Items of user u in increasing index order.
  std::span<const ItemIndex> profile(UserIndex u) const {
    return {profile_items_.data() + user_offsets_[u],
            profile_items_.data() + user_offsets_[u + 1]};
  }
  // Pair index of the first item of user u; profile(u)[j] has pair index
  // profile_begin(u) + j.
  std::size_t profile_begin(UserIndex u) const { return user_offsets_[u]; }

  // Users holding item i, increasing, and their pair indices.
  std::span<const UserIndex> holders(ItemIndex i) const {
    return {holder_users_.data() + item_offsets_[i],
            holder_users_.data() + item_offsets_[i + 1]};
  }
  std::span<const std::size_t> holder_pairs(ItemIndex i) const {
    return {holder_pairs_.data() + item_offsets_[i],
            holder_pairs_.data() + item_offsets_[i + 1]};
  }

  // Constant expected time membership query.
  bool Contains(UserIndex u, ItemIndex i) const;
  std::optional<std::size_t> PairIndex(UserIndex u, ItemIndex i) const;

  // I_u as identifiers. Throws UnknownUser.
  std::set<std::string> ProfileOf(std::string_view user) const;

 private:
  Snapshot() = default;
  static std::uint64_t Key(UserIndex u, ItemIndex i) {
    return (static_cast<std::uint64_t>(u) << 32) | i;
  }

  Timestamp time_ = 0;
  std::vector<std::string> user_ids_;
  std::vector<std::string> item_ids_;
  std::vector<std::size_t> user_offsets_;
  std::vector<ItemIndex> profile_items_;
  std::vector<std::size_t> item_offsets_;
  std::vector<UserIndex> holder_users_;
  std::vector<std::size_t> holder_pairs_;
  std::unordered_map<std::uint64_t, std::size_t> pair_lookup_;
};

// Profiles made of the deduplicated events with timestamp <= t. Throws
// InvalidArgument if t < 0 and EmptySnapshot if no event qualifies.
Snapshot BuildSnapshot(const InteractionLog& log, Timestamp t);

}  // namespace offeval

#endif  // OFFEVAL_INTERACTIONS_H_
