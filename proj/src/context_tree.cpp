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

#include "hcct/context_tree.hpp"

#include <algorithm>

#include "hcct/threshold.hpp"

namespace hcct {

std::string_view to_string(NodeClass c) {
  switch (c) {
    case NodeClass::Root: return "root";
    case NodeClass::Hot: return "hot";
    case NodeClass::ColdAncestor: return "cold-ancestor";
    case NodeClass::Cold: return "cold";
  }
  return "?";
}

ContextTree::ContextTree() {
  nodes_.emplace_back();
  last_child_.push_back(kNoNode);
}

NodeIndex ContextTree::append(NodeIndex parent, ContextTreeNode n) {
  auto idx = static_cast<NodeIndex>(nodes_.size());
  n.parent = parent;
  n.first_child = kNoNode;
  n.next_sibling = kNoNode;
  nodes_.push_back(n);
  last_child_.push_back(kNoNode);
  if (last_child_[parent] == kNoNode) {
    nodes_[parent].first_child = idx;
  } else {
    nodes_[last_child_[parent]].next_sibling = idx;
  }
  last_child_[parent] = idx;
  return idx;
}

ContextPath ContextTree::path(NodeIndex i) const {
  ContextPath p;
  for (; i != root(); i = nodes_[i].parent) p.push_back(nodes_[i].frame);
  std::reverse(p.begin(), p.end());
  return p;
}

std::size_t ContextTree::count_class(NodeClass c) const {
  return static_cast<std::size_t>(std::count_if(
      nodes_.begin(), nodes_.end(), [c](const auto& n) { return n.cls == c; }));
}

ContextTree classify_exact(const ExactCct& cct, double phi, bool min_one) {
  auto src = cct.nodes();
  const std::uint64_t t = hot_threshold(phi, cct.n_events(), min_one);
  std::vector<char> hot(src.size(), 0);
  std::vector<char> on_hot_path(src.size(), 0);
  if (cct.n_events() > 0) {
    for (NodeIndex i = 1; i < src.size(); ++i) {
      if (src[i].count < t) continue;
      hot[i] = 1;
      for (NodeIndex a = src[i].parent; a != kNoNode && !on_hot_path[a];
           a = src[a].parent) {
        on_hot_path[a] = 1;
      }
    }
  }

  ContextTree out;
  // (source node, destination parent)
  std::vector<std::pair<NodeIndex, NodeIndex>> stack;
  auto push_children = [&](NodeIndex s, NodeIndex d) {
    std::vector<NodeIndex> kids;
    for (NodeIndex c = src[s].first_child; c != kNoNode; c = src[c].next_sibling) {
      kids.push_back(c);
    }
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.emplace_back(*it, d);
  };
  push_children(ExactCct::root(), ContextTree::root());
  while (!stack.empty()) {
    auto [s, parent] = stack.back();
    stack.pop_back();
    ContextTreeNode n;
    n.frame = src[s].frame;
    n.count = src[s].count;
    n.cls = hot[s]           ? NodeClass::Hot
            : on_hot_path[s] ? NodeClass::ColdAncestor
                             : NodeClass::Cold;
    NodeIndex d = out.append(parent, n);
    push_children(s, d);
  }
  return out;
}

}  // namespace hcct
