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
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "hcct/trace.hpp"

namespace hcct {

using NodeIndex = std::uint32_t;
inline constexpr NodeIndex kNoNode = std::numeric_limits<NodeIndex>::max();

/// Calling context tree node in first-child/next-sibling form.
struct CctNode {
  Frame frame;
  std::uint64_t count = 0;
  NodeIndex parent = kNoNode;
  NodeIndex first_child = kNoNode;
  NodeIndex next_sibling = kNoNode;
};

/// Full calling context tree. Node 0 is a synthetic root with count 0 that
/// stands for the program entry; every other node is one distinct context.
class ExactCct {
 public:
  ExactCct();

  static constexpr NodeIndex root() { return 0; }

  const CctNode& node(NodeIndex i) const { return nodes_[i]; }
  std::span<const CctNode> nodes() const { return nodes_; }

  /// Contexts in the tree, excluding the root.
  std::size_t node_count() const { return nodes_.size() - 1; }
  /// Number of calls the tree was built from.
  std::uint64_t n_events() const { return n_events_; }

  /// Child of `parent` for `frame`, by linear scan of the sibling list.
  NodeIndex find_child(NodeIndex parent, Frame frame) const;
  /// Node reached by following `path` from the root, if present.
  std::optional<NodeIndex> find(std::span<const Frame> path) const;
  ContextPath path(NodeIndex i) const;

  bool is_leaf(NodeIndex i) const { return nodes_[i].first_child == kNoNode; }

  /// Appends a new child; used by builders and pruning.
  NodeIndex add_child(NodeIndex parent, Frame frame, std::uint64_t count);
  void set_n_events(std::uint64_t n) { n_events_ = n; }
  CctNode& mutable_node(NodeIndex i) { return nodes_[i]; }

 private:
  std::vector<CctNode> nodes_;
  std::uint64_t n_events_ = 0;
};

/// Canonical cursor-based construction, one event at a time.
class ExactCctBuilder {
 public:
  /// Throws UnbalancedTrace on a return at the root.
  void on_event(const TraceEvent& ev);
  void on_call(Frame frame);
  void on_return();

  NodeIndex cursor() const { return cursor_; }
  const ExactCct& tree() const { return tree_; }
  /// Releases the tree; open calls are closed implicitly.
  ExactCct finish() &&;

 private:
  ExactCct tree_;
  NodeIndex cursor_ = ExactCct::root();
};

ExactCct build_exact_cct(const Trace& trace);

/// Nodes whose count reaches hot_threshold(phi, N, min_one), in index order.
/// Empty when N = 0.
std::vector<NodeIndex> exact_hot_set(const ExactCct& cct, double phi,
                                     bool min_one = true);

/// Hot nodes plus all their ancestors, as a new tree. Every leaf of the
/// result is hot.
ExactCct exact_hcct(const ExactCct& cct, double phi, bool min_one = true);

}  // namespace hcct
