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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <unordered_set>

#include "hcct/trace.hpp"

namespace hcct {

namespace {

__extension__ using u128 = unsigned __int128;

// std::mt19937_64 output is fixed by the standard; the distributions in
// <random> are not, so the conversions below are done by hand to keep
// traces identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<u128>(eng_()) * n) >> 64);
  }

  double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 eng_;
};

struct PoolNode {
  std::uint32_t parent;  // kNoParent for top-level contexts
  std::uint32_t depth;
  Frame frame;
};

constexpr std::uint32_t kNoParent = 0xffffffffu;

struct ContextKey {
  std::uint32_t parent;
  Frame frame;
  bool operator==(const ContextKey&) const = default;
};

struct ContextKeyHash {
  std::size_t operator()(const ContextKey& k) const noexcept {
    return std::hash<Frame>{}(k.frame) ^ (std::size_t{k.parent} * 0x9E3779B97F4A7C15ull);
  }
};

// Number of distinct contexts with depth <= max_depth, saturated at `cap`.
std::uint64_t feasible_contexts(std::uint64_t fanout, std::uint32_t max_depth,
                                std::uint64_t cap) {
  std::uint64_t total = 0;
  std::uint64_t level = 1;
  for (std::uint32_t d = 0; d < max_depth && total < cap; ++d) {
    if (level > cap / fanout) return cap;
    level *= fanout;
    total += level;
  }
  return std::min(total, cap);
}

std::vector<PoolNode> build_pool(const ZipfWorkloadSpec& spec, Rng& rng) {
  const std::uint64_t fanout =
      std::uint64_t{spec.distinct_routines} * spec.call_sites;
  const std::uint64_t target =
      feasible_contexts(fanout, spec.max_depth, spec.contexts);

  std::vector<PoolNode> pool;
  pool.reserve(target);
  // Indices of pool nodes that may still receive children.
  std::vector<std::uint32_t> open;
  std::unordered_set<ContextKey, ContextKeyHash> taken;
  taken.reserve(target);

  std::uint64_t failures = 0;
  while (pool.size() < target && failures < 64 * target + 1024) {
    // Fresh top-level contexts are rare, as in programs with a single entry.
    std::uint32_t parent = kNoParent;
    if (!open.empty() && rng.below(1024) != 0) {
      parent = open[rng.below(open.size())];
    }
    Frame f{RoutineId{static_cast<std::uint32_t>(rng.below(spec.distinct_routines))},
            CallSiteId{static_cast<std::uint32_t>(rng.below(spec.call_sites))}};
    if (!taken.insert(ContextKey{parent, f}).second) {
      ++failures;
      continue;
    }
    std::uint32_t depth = parent == kNoParent ? 1 : pool[parent].depth + 1;
    pool.push_back(PoolNode{parent, depth, f});
    if (depth < spec.max_depth) {
      open.push_back(static_cast<std::uint32_t>(pool.size() - 1));
    }
  }
  return pool;
}

}  // namespace

void ZipfWorkloadSpec::validate() const {
  if (distinct_routines < 1) throw std::invalid_argument("distinct_routines must be >= 1");
  if (max_depth < 1) throw std::invalid_argument("max_depth must be >= 1");
  if (total_calls < 1) throw std::invalid_argument("total_calls must be >= 1");
  if (!(skew >= 0.0) || !std::isfinite(skew)) {
    throw std::invalid_argument("skew must be a finite value >= 0");
  }
  if (contexts < 1) throw std::invalid_argument("contexts must be >= 1");
  if (contexts > 0xfffffffeull) throw std::invalid_argument("contexts too large");
  if (call_sites < 1) throw std::invalid_argument("call_sites must be >= 1");
}

Trace generate_zipf_trace(const ZipfWorkloadSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  const std::vector<PoolNode> pool = build_pool(spec, rng);

  // Popularity rank -> pool node, via a Fisher-Yates shuffle.
  std::vector<std::uint32_t> by_rank(pool.size());
  std::iota(by_rank.begin(), by_rank.end(), 0u);
  for (std::size_t i = by_rank.size(); i > 1; --i) {
    std::swap(by_rank[i - 1], by_rank[rng.below(i)]);
  }
  std::vector<double> cdf(pool.size());
  double acc = 0.0;
  for (std::size_t r = 0; r < pool.size(); ++r) {
    acc += std::pow(static_cast<double>(r + 1), -spec.skew);
    cdf[r] = acc;
  }

  Trace t;
  t.events.reserve(static_cast<std::size_t>(spec.total_calls) * 2);
  std::vector<std::uint32_t> stack;  // pool ids of the open calls
  std::vector<std::uint32_t> path;
  std::uint64_t calls = 0;
  while (calls < spec.total_calls) {
    double u = rng.unit() * acc;
    auto rank = static_cast<std::size_t>(
        std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    rank = std::min(rank, cdf.size() - 1);

    path.clear();
    for (std::uint32_t n = by_rank[rank]; n != kNoParent; n = pool[n].parent) {
      path.push_back(n);
    }
    std::reverse(path.begin(), path.end());

    std::size_t common = 0;
    while (common < stack.size() && common < path.size() &&
           stack[common] == path[common]) {
      ++common;
    }
    // Always re-enter at least the sampled context itself.
    std::size_t keep = std::min(common, path.size() - 1);
    while (stack.size() > keep) {
      stack.pop_back();
      t.events.push_back(TraceEvent::ret());
    }
    for (std::size_t i = keep; i < path.size() && calls < spec.total_calls; ++i) {
      stack.push_back(path[i]);
      const Frame& f = pool[path[i]].frame;
      t.events.push_back(TraceEvent::call(f.routine, f.call_site));
      ++calls;
    }
  }
  for (; !stack.empty(); stack.pop_back()) t.events.push_back(TraceEvent::ret());
  return t;
}

}  // namespace hcct
