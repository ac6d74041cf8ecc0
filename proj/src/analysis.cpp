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

#include "hcct/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <ostream>

#include "json.hpp"

#include "hcct/errors.hpp"
#include "hcct/threshold.hpp"

namespace hcct {

std::vector<NodeIndex> map_onto(const ExactCct& exact, const ContextTree& tree) {
  auto nodes = tree.nodes();
  std::vector<NodeIndex> to_exact(nodes.size(), kNoNode);
  to_exact[ContextTree::root()] = ExactCct::root();
  // Preorder guarantees the parent is mapped first.
  for (NodeIndex i = 1; i < nodes.size(); ++i) {
    NodeIndex e = exact.find_child(to_exact[nodes[i].parent], nodes[i].frame);
    if (e == kNoNode) {
      throw MismatchedRun("context at depth " + std::to_string(tree.path(i).size()) +
                          " is absent from the exact tree");
    }
    to_exact[i] = e;
  }
  return to_exact;
}

namespace {

struct ErrorAccumulator {
  CounterErrorStats s;
  long double sum = 0;
  std::uint64_t exact = 0;

  void add(std::uint64_t estimate, std::uint64_t truth) {
    auto err = static_cast<std::int64_t>(estimate) - static_cast<std::int64_t>(truth);
    if (s.samples == 0 || err > s.max_error) s.max_error = err;
    ++s.samples;
    sum += err;
    if (err == 0) ++exact;
    if (err < 0) ++s.underestimates;
  }

  CounterErrorStats done() {
    if (s.samples > 0) {
      s.avg_error = static_cast<double>(sum / s.samples);
      s.exact_fraction = static_cast<double>(exact) / static_cast<double>(s.samples);
    }
    return s;
  }
};

}  // namespace

AccuracyReport compare(const ExactCct& exact, const HcctReport& report,
                       bool min_threshold_one) {
  if (exact.n_events() != report.n_events) {
    throw MismatchedRun("exact tree saw " + std::to_string(exact.n_events()) +
                        " calls, streaming report " + std::to_string(report.n_events));
  }
  AccuracyReport r;
  r.n_events = exact.n_events();
  r.phi = report.phi;
  r.epsilon = report.epsilon;
  r.hot_threshold = hot_threshold(report.phi, r.n_events, min_threshold_one);
  r.mcct_peak_nodes = report.mcct_peak_nodes;
  r.mcct_live_nodes = report.mcct_live_nodes;
  r.exact_cct_nodes = exact.node_count();
  r.pool_capacity = report.pool_capacity;
  r.error_slack = r.pool_capacity != 0
                      ? r.n_events / r.pool_capacity
                      : static_cast<std::uint64_t>(
                            std::floor(r.epsilon * static_cast<double>(r.n_events)));

  const auto to_exact = map_onto(exact, report.tree);
  const std::uint64_t ceiling = false_positive_ceiling(report.phi, report.epsilon, r.n_events);
  std::vector<char> returned(exact.nodes().size(), 0);
  ErrorAccumulator errors;
  auto nodes = report.tree.nodes();
  for (NodeIndex i = 1; i < nodes.size(); ++i) {
    if (nodes[i].cls != NodeClass::Hot) continue;
    const std::uint64_t truth = exact.node(to_exact[i]).count;
    returned[to_exact[i]] = 1;
    ++r.hot_returned;
    if (truth < r.hot_threshold) {
      ++r.false_positives;
      r.max_false_positive_deficit =
          std::max(r.max_false_positive_deficit, r.hot_threshold - truth);
      if (truth <= ceiling) ++r.false_positive_bound_violations;
    }
    errors.add(nodes[i].count, truth);
  }
  r.counter_error = errors.done();

  for (NodeIndex h : exact_hot_set(exact, report.phi, min_threshold_one)) {
    ++r.hot_true;
    if (!returned[h]) ++r.false_negatives;
  }
  return r;
}

CounterErrorStats tracked_counter_errors(const ExactCct& exact,
                                         const ContextTree& tree) {
  const auto to_exact = map_onto(exact, tree);
  ErrorAccumulator errors;
  auto nodes = tree.nodes();
  for (NodeIndex i = 1; i < nodes.size(); ++i) {
    if (nodes[i].tracked) errors.add(nodes[i].count, exact.node(to_exact[i]).count);
  }
  return errors.done();
}

bool contexts_subset(const ContextTree& inner, const ContextTree& outer) {
  auto in = inner.nodes();
  std::vector<NodeIndex> to_outer(in.size(), kNoNode);
  to_outer[ContextTree::root()] = ContextTree::root();
  for (NodeIndex i = 1; i < in.size(); ++i) {
    NodeIndex p = to_outer[in[i].parent];
    NodeIndex match = kNoNode;
    for (NodeIndex c = outer.node(p).first_child; c != kNoNode; c = outer.node(c).next_sibling) {
      if (outer.node(c).frame == in[i].frame) {
        match = c;
        break;
      }
    }
    if (match == kNoNode) return false;
    to_outer[i] = match;
  }
  return true;
}

namespace {

std::vector<std::uint64_t> counts_descending(const ExactCct& exact) {
  std::vector<std::uint64_t> counts;
  counts.reserve(exact.node_count());
  for (const auto& n : exact.nodes().subspan(1)) counts.push_back(n.count);
  std::sort(counts.begin(), counts.end(), std::greater<>());
  return counts;
}

}  // namespace

SkewnessCurve skewness(const ExactCct& exact) {
  if (exact.n_events() == 0) throw EmptyTrace("skewness of an empty trace");
  const auto counts = counts_descending(exact);
  const auto total = static_cast<double>(exact.n_events());
  SkewnessCurve curve;
  curve.points.reserve(100);
  std::uint64_t covered = 0;
  std::size_t taken = 0;
  for (int pct = 1; pct <= 100; ++pct) {
    // Contexts up to rank ceil(pct% * C).
    auto upto = static_cast<std::size_t>(
        (static_cast<std::uint64_t>(counts.size()) * pct + 99) / 100);
    for (; taken < upto; ++taken) covered += counts[taken];
    curve.points.emplace_back(pct / 100.0, static_cast<double>(covered) / total);
  }
  return curve;
}

double top_share(const ExactCct& exact, double fraction) {
  if (exact.n_events() == 0) throw EmptyTrace("top_share of an empty trace");
  const auto counts = counts_descending(exact);
  auto k = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(counts.size())));
  k = std::min(k, counts.size());
  std::uint64_t covered = 0;
  for (std::size_t i = 0; i < k; ++i) covered += counts[i];
  return static_cast<double>(covered) / static_cast<double>(exact.n_events());
}

void write_report(const AccuracyReport& r, std::ostream& out) {
  out << "n_events: " << r.n_events << '\n'
      << "phi: " << r.phi << '\n'
      << "epsilon: " << r.epsilon << '\n'
      << "hot_threshold: " << r.hot_threshold << '\n'
      << "hot_true: " << r.hot_true << '\n'
      << "hot_returned: " << r.hot_returned << '\n'
      << "false_negatives: " << r.false_negatives << '\n'
      << "false_positives: " << r.false_positives << '\n'
      << "max_false_positive_deficit: " << r.max_false_positive_deficit << '\n'
      << "false_positive_bound_violations: " << r.false_positive_bound_violations << '\n'
      << "max_counter_error: " << r.counter_error.max_error << '\n'
      << "avg_counter_error: " << r.counter_error.avg_error << '\n'
      << "exact_counter_fraction: " << r.counter_error.exact_fraction << '\n'
      << "counter_underestimates: " << r.counter_error.underestimates << '\n'
      << "mcct_peak_nodes: " << r.mcct_peak_nodes << '\n'
      << "mcct_live_nodes: " << r.mcct_live_nodes << '\n'
      << "exact_cct_nodes: " << r.exact_cct_nodes << '\n'
      << "pool_capacity: " << r.pool_capacity << '\n'
      << "error_slack: " << r.error_slack << '\n'
      << "guarantees_hold: " << (r.guarantees_hold() ? "true" : "false") << '\n';
}

std::string report_to_json(const AccuracyReport& r) {
  nlohmann::ordered_json j;
  j["n_events"] = r.n_events;
  j["phi"] = r.phi;
  j["epsilon"] = r.epsilon;
  j["hot_threshold"] = r.hot_threshold;
  j["hot_true"] = r.hot_true;
  j["hot_returned"] = r.hot_returned;
  j["false_negatives"] = r.false_negatives;
  j["false_positives"] = r.false_positives;
  j["max_false_positive_deficit"] = r.max_false_positive_deficit;
  j["false_positive_bound_violations"] = r.false_positive_bound_violations;
  j["max_counter_error"] = r.counter_error.max_error;
  j["avg_counter_error"] = r.counter_error.avg_error;
  j["exact_counter_fraction"] = r.counter_error.exact_fraction;
  j["counter_underestimates"] = r.counter_error.underestimates;
  j["mcct_peak_nodes"] = r.mcct_peak_nodes;
  j["mcct_live_nodes"] = r.mcct_live_nodes;
  j["exact_cct_nodes"] = r.exact_cct_nodes;
  j["pool_capacity"] = r.pool_capacity;
  j["error_slack"] = r.error_slack;
  j["guarantees_hold"] = r.guarantees_hold();
  return j.dump();
}

}  // namespace hcct
