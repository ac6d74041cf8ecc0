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

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "hcct/context_tree.hpp"
#include "hcct/monitor_pool.hpp"
#include "hcct/trace.hpp"

namespace hcct {

/// Node of the monitored calling context tree (MCCT). The Space-Saving
/// counter lives here; the pool only holds pointers.
struct McctNode {
  Frame frame;
  std::uint64_t count = 0;
  std::uint64_t error_bound = 0;
  McctNode* parent = nullptr;
  McctNode* first_child = nullptr;
  McctNode* next_sibling = nullptr;
  bool monitored = false;

  bool is_leaf() const { return first_child == nullptr; }
};

/// Fixed-size chunk allocator with a free list, so node addresses stay
/// stable for the pool while pruned nodes get recycled.
class McctArena {
 public:
  McctNode* make(McctNode* parent, Frame frame);
  void release(McctNode* n);

 private:
  static constexpr std::size_t kChunk = 4096;
  std::vector<std::unique_ptr<McctNode[]>> chunks_;
  std::size_t used_in_last_ = kChunk;
  McctNode* free_ = nullptr;
};

/// Result of a (phi, epsilon) query: the reported contexts and their
/// ancestors, with estimated counts and error bounds.
struct HcctReport {
  ContextTree tree;
  std::uint64_t n_events = 0;
  double phi = 0;
  double epsilon = 0;
  std::size_t pool_capacity = 0;
  std::uint64_t mcct_live_nodes = 0;
  std::uint64_t mcct_peak_nodes = 0;
};

struct BuilderStats {
  std::uint64_t created = 0;
  std::uint64_t pruned = 0;
  std::uint64_t live = 0;  // excluding the root
  std::uint64_t peak_live = 0;
};

/// Streaming construction of the approximate hot calling context tree.
///
/// Every call moves the cursor to the callee's node (creating it if needed)
/// and feeds that node to Space-Saving. When the update evicts a victim, the
/// victim and any unmonitored ancestors it leaves childless are pruned, so
/// the tree stays the minimal subtree spanning the monitored contexts, the
/// root, and the current root-to-cursor path.
class HcctBuilder {
 public:
  explicit HcctBuilder(double epsilon,
                       std::optional<std::size_t> pool_capacity = {},
                       bool min_threshold_one = true);

  HcctBuilder(const HcctBuilder&) = delete;
  HcctBuilder& operator=(const HcctBuilder&) = delete;
  HcctBuilder(HcctBuilder&&) noexcept = default;
  HcctBuilder& operator=(HcctBuilder&&) noexcept = default;

  void on_event(const TraceEvent& ev);
  void on_call(Frame frame);
  /// Throws UnbalancedTrace at the root.
  void on_return();

  /// Feeds a whole trace, then closes calls it left open.
  void run(const Trace& trace);
  /// Returns the cursor to the root (implicit returns at end of stream).
  void close_open_calls();

  /// Snapshot of the reported contexts and their ancestors. Leaves the
  /// live tree untouched. Requires epsilon < phi <= 1.
  HcctReport query_hcct(double phi) const;

  /// End-of-stream variant: prunes the live tree in place down to the
  /// reported contexts and their ancestors. The builder accepts no further
  /// events afterwards.
  HcctReport finalize(double phi);

  /// Every live node; monitored nodes are classified hot.
  ContextTree mcct_snapshot() const;

  const McctNode& root() const { return *root_; }
  const McctNode& cursor() const { return *cursor_; }
  const MonitorPool<McctNode>& pool() const { return pool_; }
  std::uint64_t n_events() const { return pool_.n_seen(); }
  const BuilderStats& stats() const { return stats_; }
  /// Nodes created plus nodes pruned.
  std::uint64_t structural_work() const { return stats_.created + stats_.pruned; }
  bool finalized() const { return finalized_; }

  /// Full sweep of the structural invariants. Throws std::logic_error
  /// describing the first violation.
  void verify() const;

 private:
  McctNode* child_of(McctNode* parent, Frame frame) const;
  void unlink(McctNode* n);
  void prune_upward(McctNode* v);
  HcctReport snapshot(const std::vector<McctNode*>& hot, double phi) const;

  McctArena arena_;
  McctNode* root_;
  McctNode* cursor_;
  MonitorPool<McctNode> pool_;
  BuilderStats stats_;
  bool min_one_;
  bool finalized_ = false;
};

}  // namespace hcct
