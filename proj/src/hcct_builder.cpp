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

#include "hcct/hcct_builder.hpp"

#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "hcct/errors.hpp"

namespace hcct {

McctNode* McctArena::make(McctNode* parent, Frame frame) {
  McctNode* n;
  if (free_ != nullptr) {
    n = free_;
    free_ = free_->next_sibling;
  } else {
    if (used_in_last_ == kChunk) {
      chunks_.push_back(std::make_unique<McctNode[]>(kChunk));
      used_in_last_ = 0;
    }
    n = &chunks_.back()[used_in_last_++];
  }
  *n = McctNode{};
  n->frame = frame;
  n->parent = parent;
  return n;
}

void McctArena::release(McctNode* n) {
  *n = McctNode{};
  n->next_sibling = free_;
  free_ = n;
}

HcctBuilder::HcctBuilder(double epsilon, std::optional<std::size_t> pool_capacity,
                         bool min_threshold_one)
    : root_(arena_.make(nullptr, Frame{})),
      cursor_(root_),
      pool_(epsilon, pool_capacity),
      min_one_(min_threshold_one) {}

McctNode* HcctBuilder::child_of(McctNode* parent, Frame frame) const {
  for (McctNode* c = parent->first_child; c != nullptr; c = c->next_sibling) {
    if (c->frame == frame) return c;
  }
  return nullptr;
}

void HcctBuilder::unlink(McctNode* n) {
  McctNode* p = n->parent;
  if (p->first_child == n) {
    p->first_child = n->next_sibling;
    return;
  }
  McctNode* c = p->first_child;
  while (c->next_sibling != n) c = c->next_sibling;
  c->next_sibling = n->next_sibling;
}

void HcctBuilder::prune_upward(McctNode* v) {
  while (v != root_ && v->is_leaf() && !v->monitored) {
    McctNode* p = v->parent;
    unlink(v);
    arena_.release(v);
    ++stats_.pruned;
    --stats_.live;
    v = p;
  }
}

void HcctBuilder::on_call(Frame frame) {
  if (finalized_) throw std::logic_error("builder already finalized");
  McctNode* x = child_of(cursor_, frame);
  if (x == nullptr) {
    x = arena_.make(cursor_, frame);
    x->next_sibling = cursor_->first_child;
    cursor_->first_child = x;
    ++stats_.created;
    if (++stats_.live > stats_.peak_live) stats_.peak_live = stats_.live;
  }
  cursor_ = x;
  auto outcome = pool_.update(*x);
  for (McctNode* v : outcome.victims()) {
    // x is never removed: it is monitored again, and it keeps every node on
    // the cursor path from passing the leaf test.
    if (v != x) prune_upward(v);
  }
}

void HcctBuilder::on_return() {
  if (finalized_) throw std::logic_error("builder already finalized");
  if (cursor_ == root_) {
    throw UnbalancedTrace("return at the root of the calling context tree");
  }
  cursor_ = cursor_->parent;
}

void HcctBuilder::on_event(const TraceEvent& ev) {
  if (ev.is_call()) {
    on_call(ev.frame());
  } else {
    on_return();
  }
}

void HcctBuilder::close_open_calls() { cursor_ = root_; }

void HcctBuilder::run(const Trace& trace) {
  for (const auto& ev : trace.events) on_event(ev);
  close_open_calls();
}

HcctReport HcctBuilder::snapshot(const std::vector<McctNode*>& hot,
                                 double phi) const {
  std::unordered_set<const McctNode*> hot_set(hot.begin(), hot.end());
  std::unordered_set<const McctNode*> keep;
  for (const McctNode* h : hot) {
    for (const McctNode* a = h; a != root_; a = a->parent) {
      if (!keep.insert(a).second) break;
    }
  }

  HcctReport r;
  r.n_events = pool_.n_seen();
  r.phi = phi;
  r.epsilon = pool_.epsilon();
  r.pool_capacity = pool_.capacity();
  r.mcct_live_nodes = stats_.live;
  r.mcct_peak_nodes = stats_.peak_live;

  std::vector<std::pair<const McctNode*, NodeIndex>> stack;
  std::vector<const McctNode*> kids;
  auto push_children = [&](const McctNode* n, NodeIndex d) {
    kids.clear();
    for (const McctNode* c = n->first_child; c != nullptr; c = c->next_sibling) {
      if (keep.count(c) != 0) kids.push_back(c);
    }
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.emplace_back(*it, d);
  };
  push_children(root_, ContextTree::root());
  while (!stack.empty()) {
    auto [n, parent] = stack.back();
    stack.pop_back();
    ContextTreeNode out;
    out.frame = n->frame;
    out.count = n->count;
    out.error_bound = n->monitored ? n->error_bound : 0;
    out.cls = hot_set.count(n) != 0 ? NodeClass::Hot : NodeClass::ColdAncestor;
    out.tracked = n->monitored;
    NodeIndex d = r.tree.append(parent, out);
    push_children(n, d);
  }
  return r;
}

HcctReport HcctBuilder::query_hcct(double phi) const {
  if (finalized_) throw std::logic_error("builder already finalized");
  return snapshot(pool_.query(phi, min_one_), phi);
}

HcctReport HcctBuilder::finalize(double phi) {
  if (finalized_) throw std::logic_error("builder already finalized");
  std::vector<McctNode*> hot = pool_.query(phi, min_one_);
  close_open_calls();
  std::unordered_set<const McctNode*> hot_set(hot.begin(), hot.end());

  // Postorder sweep: a node goes once none of its children survived and it
  // was not reported.
  std::vector<std::pair<McctNode*, bool>> stack{{root_, false}};
  while (!stack.empty()) {
    auto [n, expanded] = stack.back();
    if (!expanded) {
      stack.back().second = true;
      for (McctNode* c = n->first_child; c != nullptr; c = c->next_sibling) {
        stack.emplace_back(c, false);
      }
      continue;
    }
    stack.pop_back();
    if (n != root_ && n->is_leaf() && hot_set.count(n) == 0) {
      unlink(n);
      arena_.release(n);
      ++stats_.pruned;
      --stats_.live;
    }
  }
  HcctReport r = snapshot(hot, phi);
  finalized_ = true;
  return r;
}

ContextTree HcctBuilder::mcct_snapshot() const {
  ContextTree t;
  std::vector<std::pair<const McctNode*, NodeIndex>> stack;
  std::vector<const McctNode*> kids;
  auto push_children = [&](const McctNode* n, NodeIndex d) {
    kids.clear();
    for (const McctNode* c = n->first_child; c != nullptr; c = c->next_sibling) {
      kids.push_back(c);
    }
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.emplace_back(*it, d);
  };
  push_children(root_, ContextTree::root());
  while (!stack.empty()) {
    auto [n, parent] = stack.back();
    stack.pop_back();
    ContextTreeNode out;
    out.frame = n->frame;
    out.count = n->count;
    out.error_bound = n->monitored ? n->error_bound : 0;
    out.cls = n->monitored ? NodeClass::Hot : NodeClass::ColdAncestor;
    out.tracked = n->monitored;
    NodeIndex d = t.append(parent, out);
    push_children(n, d);
  }
  return t;
}

void HcctBuilder::verify() const {
  auto fail = [](const std::string& what) { throw std::logic_error("MCCT invariant: " + what); };
  if (finalized_) fail("verify() on a finalized builder");

  std::unordered_set<const McctNode*> on_path;
  for (const McctNode* a = cursor_; a != nullptr; a = a->parent) on_path.insert(a);
  if (on_path.count(root_) == 0) fail("cursor is not connected to the root");

  std::unordered_map<const McctNode*, int> in_pool;
  for (const McctNode* e : pool_.entries()) {
    if (++in_pool[e] > 1) fail("node referenced twice by the pool");
    if (!e->monitored) fail("pool entry without monitored flag");
    if (e->count < e->error_bound) fail("count below error bound");
  }

  // Postorder: has_monitored[n] = n or a descendant is monitored.
  std::unordered_map<const McctNode*, bool> has_monitored;
  std::uint64_t live = 0;
  std::vector<std::pair<const McctNode*, bool>> stack{{root_, false}};
  while (!stack.empty()) {
    auto [n, expanded] = stack.back();
    if (!expanded) {
      stack.back().second = true;
      std::unordered_set<Frame> frames;
      for (const McctNode* c = n->first_child; c != nullptr; c = c->next_sibling) {
        if (c->parent != n) fail("broken parent link");
        if (!frames.insert(c->frame).second) fail("duplicate child frame");
        stack.emplace_back(c, false);
      }
      continue;
    }
    stack.pop_back();
    bool m = n->monitored;
    if (m && in_pool.count(n) == 0) fail("monitored node missing from the pool");
    for (const McctNode* c = n->first_child; c != nullptr; c = c->next_sibling) {
      m = m || has_monitored[c];
    }
    has_monitored[n] = m;
    if (n == root_) continue;
    ++live;
    if (!m && on_path.count(n) == 0) {
      fail("node off the cursor path without a monitored descendant");
    }
  }
  if (live != stats_.live) fail("live node count out of sync");
  if (stats_.created - stats_.pruned != stats_.live) fail("created - pruned != live");
  if (in_pool.size() != pool_.size()) fail("pool size mismatch");
}

}  // namespace hcct
