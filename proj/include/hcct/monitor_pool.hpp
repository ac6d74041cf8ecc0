// Copyright 2026 The hcct Authors
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

#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hcct/errors.hpp"
#include "hcct/threshold.hpp"

namespace hcct {

/// A node that can be monitored in place: the counter, its overestimation
/// bound and the membership flag live in the node, not in the pool.
template <class Node>
concept MonitorableNode = requires(Node& n) {
  { n.count } -> std::convertible_to<std::uint64_t>;
  { n.error_bound } -> std::convertible_to<std::uint64_t>;
  { n.monitored } -> std::convertible_to<bool>;
};

/// ceil(1 / epsilon), computed in extended precision so that values such
/// as 0.002 do not round up to 501.
inline std::size_t capacity_for(double epsilon) {
  if (!(epsilon > 0.0) || !(epsilon <= 1.0)) {
    throw InvalidThreshold("epsilon must lie in (0, 1], got " +
                           std::to_string(epsilon));
  }
  return static_cast<std::size_t>(
      std::ceil(1.0L / static_cast<long double>(epsilon)));
}

template <class Node>
struct UpdateOutcome {
  /// Entry evicted to make room for the update, if any.
  Node* victim = nullptr;
  /// The item was not monitored before this update.
  bool newly_monitored = false;

  std::span<Node* const> victims() const {
    return victim ? std::span<Node* const>(&victim, 1) : std::span<Node* const>();
  }
};

/// Space-Saving over externally owned nodes, backed by a lazy priority
/// queue: an unordered array of node pointers with a cached minimum `min`
/// and `min_idx`, the smallest index whose counter equals `min`. Increments
/// may leave the cache stale; find_min() repairs it.
///
/// Counters are never decremented, so a counter equal to `min` can only be
/// found at or after `min_idx`. Each value taken by `min` costs at most one
/// forward sweep plus one full rescan, which bounds the total scan work by
/// 2 * capacity * min (+ capacity for a sweep in progress).
template <MonitorableNode Node>
class MonitorPool {
 public:
  explicit MonitorPool(double epsilon,
                       std::optional<std::size_t> capacity_override = {})
      : epsilon_(epsilon), capacity_(capacity_for(epsilon)) {
    if (capacity_override) {
      if (*capacity_override == 0) throw EmptyPool("pool capacity must be >= 1");
      capacity_ = *capacity_override;
    }
    entries_.reserve(capacity_);
  }

  MonitorPool(const MonitorPool&) = delete;
  MonitorPool& operator=(const MonitorPool&) = delete;
  MonitorPool(MonitorPool&&) noexcept = default;
  MonitorPool& operator=(MonitorPool&&) noexcept = default;

  double epsilon() const { return epsilon_; }
  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return entries_.size(); }
  bool full() const { return entries_.size() == capacity_; }
  std::uint64_t n_seen() const { return n_seen_; }
  std::span<Node* const> entries() const { return entries_; }

  /// Cached bookkeeping; only authoritative right after find_min().
  std::uint64_t cached_min() const { return min_; }
  std::size_t min_index() const { return min_idx_; }
  /// Array positions visited by find_min() so far.
  std::uint64_t scan_steps() const { return scan_steps_; }

  /// Records one occurrence of `x`.
  UpdateOutcome<Node> update(Node& x) {
    ++n_seen_;
    if (x.monitored) {
      ++x.count;
      return {};
    }
    if (!full()) {
      x.count = 1;
      x.error_bound = 0;
      x.monitored = true;
      entries_.push_back(&x);
      return {nullptr, true};
    }
    const std::uint64_t m = find_min();
    Node* victim = entries_[min_idx_];
    victim->monitored = false;
    entries_[min_idx_] = &x;
    x.count = m + 1;
    x.error_bound = m;
    x.monitored = true;
    return {victim, true};
  }

  /// Restores `min`/`min_idx` and returns the minimum counter.
  std::uint64_t find_min() {
    if (entries_.empty()) throw EmptyPool("find_min on an empty pool");
    const std::size_t n = entries_.size();
    while (min_idx_ < n && entries_[min_idx_]->count != min_) {
      ++min_idx_;
      ++scan_steps_;
    }
    if (min_idx_ >= n) {
      min_ = entries_[0]->count;
      min_idx_ = 0;
      for (std::size_t j = 1; j < n; ++j) {
        if (entries_[j]->count < min_) {
          min_ = entries_[j]->count;
          min_idx_ = j;
        }
      }
      scan_steps_ += n;
    }
    return min_;
  }

  /// Monitored nodes whose counter reaches floor(phi * N), in array order.
  /// Requires phi > epsilon.
  std::vector<Node*> query(double phi, bool min_one = true) const {
    if (!(phi > epsilon_) || !(phi <= 1.0)) {
      throw InvalidThreshold("query needs epsilon < phi <= 1 (phi=" +
                             std::to_string(phi) + ", epsilon=" +
                             std::to_string(epsilon_) + ")");
    }
    std::vector<Node*> out;
    if (n_seen_ == 0) return out;
    const std::uint64_t t = hot_threshold(phi, n_seen_, min_one);
    for (Node* e : entries_) {
      if (e->count >= t) out.push_back(e);
    }
    return out;
  }

 private:
  double epsilon_;
  std::size_t capacity_;
  std::vector<Node*> entries_;
  std::uint64_t n_seen_ = 0;
  std::uint64_t min_ = 0;
  std::size_t min_idx_ = 0;
  std::uint64_t scan_steps_ = 0;
};

}  // namespace hcct
