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
#include <span>
#include <string_view>
#include <vector>

#include "hcct/exact_cct.hpp"
#include "hcct/trace.hpp"

namespace hcct {

enum class NodeClass : std::uint8_t {
  Root,
  Hot,           // reported context
  ColdAncestor,  // kept only to connect a hot descendant to the root
  Cold,          // neither hot nor on a path to a hot node
};

std::string_view to_string(NodeClass c);

struct ContextTreeNode {
  Frame frame;
  std::uint64_t count = 0;
  std::uint64_t error_bound = 0;
  NodeClass cls = NodeClass::Root;
  /// The counter was maintained up to the snapshot. Cold ancestors that
  /// dropped out of the monitored set keep a stale count and are untracked.
  bool tracked = true;
  NodeIndex parent = kNoNode;
  NodeIndex first_child = kNoNode;
  NodeIndex next_sibling = kNoNode;
};

/// Immutable-after-build snapshot of a (sub)tree of contexts, stored in
/// preorder with node 0 as the synthetic root. Shared by exact and streaming
/// results so both can be compared and exported the same way.
class ContextTree {
 public:
  ContextTree();

  static constexpr NodeIndex root() { return 0; }

  std::span<const ContextTreeNode> nodes() const { return nodes_; }
  const ContextTreeNode& node(NodeIndex i) const { return nodes_[i]; }
  std::size_t size() const { return nodes_.size(); }
  bool is_leaf(NodeIndex i) const { return nodes_[i].first_child == kNoNode; }
  ContextPath path(NodeIndex i) const;
  std::size_t count_class(NodeClass c) const;

  /// Appends `n` as the last child of `parent`. Nodes must be appended in
  /// preorder.
  NodeIndex append(NodeIndex parent, ContextTreeNode n);

 private:
  std::vector<ContextTreeNode> nodes_;
  std::vector<NodeIndex> last_child_;
};

/// Whole exact tree, classified against hot_threshold(phi, N, min_one).
ContextTree classify_exact(const ExactCct& cct, double phi, bool min_one = true);

}  // namespace hcct
