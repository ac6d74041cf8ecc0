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

#include "hcct/exact_cct.hpp"

#include <algorithm>

#include "hcct/errors.hpp"
#include "hcct/threshold.hpp"

namespace hcct {

ExactCct::ExactCct() { nodes_.emplace_back(); }

NodeIndex ExactCct::find_child(NodeIndex parent, Frame frame) const {
  for (NodeIndex c = nodes_[parent].first_child; c != kNoNode;
       c = nodes_[c].next_sibling) {
    if (nodes_[c].frame == frame) return c;
  }
  return kNoNode;
}

std::optional<NodeIndex> ExactCct::find(std::span<const Frame> path) const {
  NodeIndex cur = root();
  for (const Frame& f : path) {
    cur = find_child(cur, f);
    if (cur == kNoNode) return std::nullopt;
  }
  return cur;
}

ContextPath ExactCct::path(NodeIndex i) const {
  ContextPath p;
  for (; i != root(); i = nodes_[i].parent) p.push_back(nodes_[i].frame);
  std::reverse(p.begin(), p.end());
  return p;
}

NodeIndex ExactCct::add_child(NodeIndex parent, Frame frame,
                              std::uint64_t count) {
  auto idx = static_cast<NodeIndex>(nodes_.size());
  CctNode n;
  n.frame = frame;
  n.count = count;
  n.parent = parent;
  n.next_sibling = nodes_[parent].first_child;
  nodes_.push_back(n);
  nodes_[parent].first_child = idx;
  return idx;
}

void ExactCctBuilder::on_call(Frame frame) {
  NodeIndex child = tree_.find_child(cursor_, frame);
  if (child == kNoNode) {
    child = tree_.add_child(cursor_, frame, 1);
  } else {
    ++tree_.mutable_node(child).count;
  }
  cursor_ = child;
  tree_.set_n_events(tree_.n_events() + 1);
}

void ExactCctBuilder::on_return() {
  if (cursor_ == ExactCct::root()) {
    throw UnbalancedTrace("return at the root of the calling context tree");
  }
  cursor_ = tree_.node(cursor_).parent;
}

void ExactCctBuilder::on_event(const TraceEvent& ev) {
  if (ev.is_call()) {
    on_call(ev.frame());
  } else {
    on_return();
  }
}

ExactCct ExactCctBuilder::finish() && {
  cursor_ = ExactCct::root();
  return std::move(tree_);
}

ExactCct build_exact_cct(const Trace& trace) {
  ExactCctBuilder b;
  for (const auto& ev : trace.events) b.on_event(ev);
  return std::move(b).finish();
}

std::vector<NodeIndex> exact_hot_set(const ExactCct& cct, double phi,
                                     bool min_one) {
  std::vector<NodeIndex> hot;
  if (cct.n_events() == 0) return hot;
  const std::uint64_t t = hot_threshold(phi, cct.n_events(), min_one);
  auto nodes = cct.nodes();
  for (NodeIndex i = 1; i < nodes.size(); ++i) {
    if (nodes[i].count >= t) hot.push_back(i);
  }
  return hot;
}

ExactCct exact_hcct(const ExactCct& cct, double phi, bool min_one) {
  auto nodes = cct.nodes();
  std::vector<char> keep(nodes.size(), 0);
  keep[ExactCct::root()] = 1;
  for (NodeIndex h : exact_hot_set(cct, phi, min_one)) {
    for (NodeIndex i = h; i != kNoNode && !keep[i]; i = nodes[i].parent) {
      keep[i] = 1;
    }
  }

  // Preorder walk of the kept nodes, so a parent is copied before its
  // children.
  ExactCct out;
  out.set_n_events(cct.n_events());
  std::vector<NodeIndex> remap(nodes.size(), kNoNode);
  remap[ExactCct::root()] = ExactCct::root();
  std::vector<NodeIndex> order;
  order.reserve(nodes.size());
  std::vector<NodeIndex> stack{ExactCct::root()};
  while (!stack.empty()) {
    NodeIndex i = stack.back();
    stack.pop_back();
    order.push_back(i);
    std::vector<NodeIndex> kids;
    for (NodeIndex c = nodes[i].first_child; c != kNoNode; c = nodes[c].next_sibling) {
      if (keep[c]) kids.push_back(c);
    }
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
  }
  for (NodeIndex i : order) {
    if (i == ExactCct::root()) continue;
    remap[i] = out.add_child(remap[nodes[i].parent], nodes[i].frame, nodes[i].count);
  }
  // add_child prepends; restore the source sibling order.
  auto all = out.nodes();
  for (NodeIndex i = 0; i < all.size(); ++i) {
    NodeIndex prev = kNoNode;
    NodeIndex cur = all[i].first_child;
    while (cur != kNoNode) {
      NodeIndex next = out.node(cur).next_sibling;
      out.mutable_node(cur).next_sibling = prev;
      prev = cur;
      cur = next;
    }
    out.mutable_node(i).first_child = prev;
  }
  return out;
}

}  // namespace hcct
