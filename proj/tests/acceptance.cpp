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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. Thresholds are fixed below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hcct/exact_cct.hpp"
#include "hcct/hcct_builder.hpp"
#include "hcct/monitor_pool.hpp"
#include "hcct/threshold.hpp"
#include "hcct/trace.hpp"

using namespace hcct;
using Clock = std::chrono::steady_clock;

namespace {

// Criterion 1
constexpr double kExampleMaxMillis = 1.0;
// Criteria 2-5
constexpr int kSweepTraces = 520;
constexpr std::uint64_t kSweepMaxCalls = 1000000;
constexpr double kSweepMaxSeconds = 60.0;
constexpr int kQueryPointsPerTrace = 10;
// Criterion 6
constexpr std::uint64_t kAdversarialOps = 1000000;
constexpr std::uint64_t kOracleOps = 100000;
// Criterion 7
constexpr double kSpaceEpsilon = 1e-4;
constexpr std::uint64_t kSpaceCalls = 1000000;
constexpr double kSpaceMaxRatio = 0.20;
// Measured peak-MCCT / exact-CCT ratio on the fixed space workload.
constexpr double kPinnedSpaceRatio = 10013.0 / 114433.0;
constexpr double kPinnedSpaceTolerance = 1e-9;
// Criterion 8
constexpr std::uint64_t kThroughputEvents = 10000000;
constexpr double kMinEventsPerSecond = 1e6;

int failures = 0;

void report(int id, const char* name, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", id, name, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Exact-tree index of every node of a context tree, or kNoNode where the
// context is missing from the exact tree.
std::vector<NodeIndex> locate(const ExactCct& exact, const ContextTree& t) {
  std::vector<NodeIndex> out(t.size(), kNoNode);
  out[0] = ExactCct::root();
  for (NodeIndex i = 1; i < t.size(); ++i) {
    NodeIndex p = out[t.node(i).parent];
    out[i] = p == kNoNode ? kNoNode : exact.find_child(p, t.node(i).frame);
  }
  return out;
}

// ---------------------------------------------------------------- 1

void criterion_example() {
  const Trace trace = main_p_q_trace(8);
  const Frame main{kMainRoutine, CallSiteId{0}};
  const Frame q{kQRoutine, CallSiteId{2}};

  auto t0 = Clock::now();
  HcctBuilder b(0.25, 3);
  b.run(trace);
  HcctReport r = b.query_hcct(0.5);
  const double ms = since(t0) * 1e3;

  bool ok = r.n_events == 8 && r.pool_capacity == 3 && r.tree.size() == 3;
  std::vector<std::pair<ContextPath, NodeClass>> got;
  for (NodeIndex i = 1; i < r.tree.size(); ++i) got.emplace_back(r.tree.path(i), r.tree.node(i).cls);
  ok = ok && got.size() == 2 && got[0].first == ContextPath{main} &&
       got[0].second == NodeClass::ColdAncestor && got[1].first == ContextPath{main, q} &&
       got[1].second == NodeClass::Hot && r.tree.node(2).count == 6;
  report(1, "example query returns exactly {main->q}=6 inside {main, main->q}",
         ok && ms < kExampleMaxMillis, fmt("%.4f ms", ms));
}

// ---------------------------------------------------------------- 2-5

struct SweepTotals {
  std::uint64_t traces = 0;
  std::uint64_t calls = 0;
  std::uint64_t queries = 0;
  std::uint64_t false_negatives = 0;
  std::uint64_t fp_bound_violations = 0;
  std::uint64_t hot_at_ceiling = 0;
  std::uint64_t counter_checks = 0;
  std::uint64_t counter_violations = 0;
  std::uint64_t containment_checks = 0;
  std::uint64_t containment_violations = 0;
  std::uint64_t pool_over_capacity = 0;
  double seconds = 0;
};

// Checks every criterion 2-5 property of one query point.
void check_point(const HcctBuilder& b, const ExactCct& exact, double phi, double eps,
                 SweepTotals& s) {
  const std::uint64_t n = b.n_events();
  ++s.queries;

  // Counter error over every monitored context.
  ContextTree mcct = b.mcct_snapshot();
  auto mcct_at = locate(exact, mcct);
  const auto slack = static_cast<std::uint64_t>(std::floor(eps * static_cast<double>(n)));
  for (NodeIndex i = 1; i < mcct.size(); ++i) {
    if (mcct_at[i] == kNoNode) continue;  // counted as a containment violation below
    if (!mcct.node(i).tracked) continue;
    ++s.counter_checks;
    const std::uint64_t est = mcct.node(i).count;
    const std::uint64_t truth = exact.node(mcct_at[i]).count;
    if (est < truth || est - truth > slack) ++s.counter_violations;
  }

  HcctReport r = b.query_hcct(phi);
  auto report_at = locate(exact, r.tree);

  // False negatives and false-positive bound.
  std::uint64_t t = static_cast<std::uint64_t>(std::floor(phi * static_cast<double>(n)));
  if (t == 0) t = 1;
  const auto ceiling = static_cast<std::uint64_t>(std::floor((phi - eps) * static_cast<double>(n)));
  std::vector<char> returned(exact.nodes().size(), 0), in_report(exact.nodes().size(), 0),
      in_mcct(exact.nodes().size(), 0);
  for (NodeIndex i = 1; i < r.tree.size(); ++i) {
    if (report_at[i] == kNoNode) continue;
    in_report[report_at[i]] = 1;
    if (r.tree.node(i).cls == NodeClass::Hot) {
      returned[report_at[i]] = 1;
      const std::uint64_t truth = exact.node(report_at[i]).count;
      if (truth <= ceiling) ++(truth < t ? s.fp_bound_violations : s.hot_at_ceiling);
    }
  }
  for (NodeIndex i = 1; i < mcct.size(); ++i) {
    if (mcct_at[i] != kNoNode) in_mcct[mcct_at[i]] = 1;
  }

  // Containment: exact HCCT <= report <= MCCT <= CCT.
  std::uint64_t bad = 0;
  for (NodeIndex i = 1; i < r.tree.size(); ++i) {
    if (report_at[i] == kNoNode || !in_mcct[report_at[i]]) ++bad;
  }
  for (NodeIndex i = 1; i < mcct.size(); ++i) bad += mcct_at[i] == kNoNode ? 1 : 0;
  std::vector<char> in_exact_hcct(exact.nodes().size(), 0);
  for (NodeIndex e = 1; e < exact.nodes().size(); ++e) {
    if (exact.node(e).count < t) continue;
    if (!returned[e]) ++s.false_negatives;
    for (NodeIndex a = e; a != ExactCct::root() && !in_exact_hcct[a]; a = exact.node(a).parent) {
      in_exact_hcct[a] = 1;
    }
  }
  for (NodeIndex e = 1; e < exact.nodes().size(); ++e) {
    if (in_exact_hcct[e] && !in_report[e]) ++bad;
  }
  ++s.containment_checks;
  s.containment_violations += bad;
}

SweepTotals run_sweep() {
  SweepTotals s;
  std::mt19937_64 rng(20260101);
  const double skews[] = {0.0, 0.5, 1.0, 1.5};
  const double phis[] = {0.01, 0.05, 0.1};
  auto t0 = Clock::now();
  for (int run = 0; run < kSweepTraces; ++run) {
    ZipfWorkloadSpec spec;
    spec.skew = skews[run % 4];
    spec.seed = rng();
    spec.distinct_routines = std::uniform_int_distribution<std::uint32_t>(10, 300)(rng);
    spec.max_depth = std::uniform_int_distribution<std::uint32_t>(2, 16)(rng);
    spec.call_sites = std::uniform_int_distribution<std::uint32_t>(1, 4)(rng);
    spec.contexts = std::uniform_int_distribution<std::uint64_t>(100, 50000)(rng);
    if (run % 40 == 0) {
      spec.total_calls = kSweepMaxCalls;
    } else {
      // Log-uniform between 10^2 and 10^5.
      spec.total_calls = static_cast<std::uint64_t>(
          std::pow(10.0, std::uniform_real_distribution<double>(2.0, 5.0)(rng)));
    }
    const double phi = phis[(run / 4) % 3];
    const double eps = phi / 5;
    Trace trace = generate_zipf_trace(spec);

    // Query points at random call positions; the last one is end of stream.
    std::vector<std::uint64_t> points;
    std::uniform_int_distribution<std::uint64_t> pick(1, spec.total_calls);
    for (int k = 0; k < kQueryPointsPerTrace - 1; ++k) points.push_back(pick(rng));
    points.push_back(spec.total_calls);
    std::sort(points.begin(), points.end());

    HcctBuilder b(eps);
    ExactCctBuilder exact;
    std::size_t next = 0;
    for (const auto& ev : trace.events) {
      b.on_event(ev);
      exact.on_event(ev);
      if (b.pool().size() > b.pool().capacity()) ++s.pool_over_capacity;
      if (!ev.is_call()) continue;
      while (next < points.size() && points[next] == b.n_events()) {
        check_point(b, exact.tree(), phi, eps, s);
        ++next;
      }
    }
    ++s.traces;
    s.calls += b.n_events();
  }
  s.seconds = since(t0);
  return s;
}

// ---------------------------------------------------------------- 6

struct Item {
  std::uint64_t count = 0;
  std::uint64_t error_bound = 0;
  bool monitored = false;
};

void criterion_find_min() {
  const std::size_t cap = 128;
  std::uint64_t violations = 0;
  std::uint64_t checks = 0;
  auto check = [&](const MonitorPool<Item>& p) {
    ++checks;
    if (p.scan_steps() > 2 * cap * p.cached_min() + cap) ++violations;
  };

  {  // Always bump the entry find_min reports.
    std::vector<Item> items(cap);
    MonitorPool<Item> pool(1.0 / cap);
    for (auto& it : items) pool.update(it);
    for (std::uint64_t op = 0; op < kAdversarialOps; ++op) {
      pool.find_min();
      pool.update(*pool.entries()[pool.min_index()]);
      check(pool);
    }
  }
  {  // Round robin in reverse slot order, querying after each update.
    std::vector<Item> items(cap);
    MonitorPool<Item> pool(1.0 / cap);
    for (auto& it : items) pool.update(it);
    for (std::uint64_t op = 0; op < kAdversarialOps; ++op) {
      pool.update(items[cap - 1 - op % cap]);
      pool.find_min();
      check(pool);
    }
  }
  {  // Distinct items only: every update evicts.
    std::vector<Item> items(kAdversarialOps);
    MonitorPool<Item> pool(1.0 / cap);
    for (auto& it : items) {
      pool.update(it);
      check(pool);
    }
  }

  // Randomized run against a full scan.
  std::uint64_t mismatches = 0;
  std::uint64_t calls = 0;
  {
    std::mt19937_64 rng(6);
    std::vector<Item> items(4000);
    MonitorPool<Item> pool(1.0 / 64);
    for (std::uint64_t op = 0; op < kOracleOps; ++op) {
      std::size_t i = rng() % (op % 2 == 0 ? items.size() : 100);
      pool.update(items[i]);
      if (pool.size() == 0) continue;
      std::uint64_t m = ~std::uint64_t{0};
      std::size_t first = 0;
      auto e = pool.entries();
      for (std::size_t k = 0; k < e.size(); ++k) {
        if (e[k]->count < m) {
          m = e[k]->count;
          first = k;
        }
      }
      ++calls;
      if (pool.find_min() != m || pool.min_index() != first) ++mismatches;
    }
  }
  report(6, "lazy find-min scan work <= 2*cap*min + cap; find-min equals full scan",
         violations == 0 && mismatches == 0,
         fmt("%llu bound checks, %llu violations; %llu oracle calls, %llu mismatches",
             static_cast<unsigned long long>(checks), static_cast<unsigned long long>(violations),
             static_cast<unsigned long long>(calls), static_cast<unsigned long long>(mismatches)));
}

// ---------------------------------------------------------------- 7

void criterion_space(const SweepTotals& s) {
  ZipfWorkloadSpec spec;
  spec.distinct_routines = 1000;
  spec.max_depth = 12;
  spec.total_calls = kSpaceCalls;
  spec.skew = 1.0;
  spec.contexts = 1000000;
  spec.seed = 2026;
  Trace trace = generate_zipf_trace(spec);

  HcctBuilder b(kSpaceEpsilon);
  std::uint64_t over = 0;
  for (const auto& ev : trace.events) {
    b.on_event(ev);
    if (b.pool().size() > b.pool().capacity()) ++over;
  }
  const ExactCct exact = build_exact_cct(trace);
  const double ratio = static_cast<double>(b.stats().peak_live) /
                       static_cast<double>(exact.node_count());
  const bool pinned = std::abs(ratio - kPinnedSpaceRatio) <= kPinnedSpaceTolerance;
  report(7, "monitored entries <= ceil(1/eps); peak MCCT < 20% of exact CCT",
         over == 0 && s.pool_over_capacity == 0 && b.pool().capacity() == 10000 &&
             ratio < kSpaceMaxRatio && pinned,
         fmt("capacity %zu, peak MCCT %llu, exact CCT %zu, ratio %.9f (pinned %.9f)",
             b.pool().capacity(), static_cast<unsigned long long>(b.stats().peak_live),
             exact.node_count(), ratio, kPinnedSpaceRatio));
}

// ---------------------------------------------------------------- 8

void criterion_throughput() {
  ZipfWorkloadSpec spec;
  spec.distinct_routines = 1000;
  spec.max_depth = 12;
  spec.total_calls = kThroughputEvents / 2;  // each call has a matching return
  spec.skew = 1.0;
  spec.contexts = 100000;
  spec.seed = 99;
  Trace trace = generate_zipf_trace(spec);

  HcctBuilder b(kSpaceEpsilon);
  auto t0 = Clock::now();
  b.run(trace);
  HcctReport r = b.query_hcct(10 * kSpaceEpsilon);
  const double secs = since(t0);
  const double rate = static_cast<double>(trace.events.size()) / secs;

  // Same stream decoded from its text form, as the command-line tool runs it.
  std::istringstream text(write_trace_string(trace));
  HcctBuilder parsed(kSpaceEpsilon);
  t0 = Clock::now();
  const std::uint64_t decoded =
      for_each_event(text, [&](const TraceEvent& ev) { parsed.on_event(ev); });
  parsed.query_hcct(10 * kSpaceEpsilon);
  const double text_secs = since(t0);
  const double text_rate = static_cast<double>(decoded) / text_secs;

  report(8, "mine path sustains >= 10^6 events/s on a 10^7-event trace",
         trace.events.size() >= kThroughputEvents && decoded == trace.events.size() &&
             rate >= kMinEventsPerSecond && text_rate >= kMinEventsPerSecond,
         fmt("in memory %.3g events/s; decoding text %.3g events/s; %zu hot contexts", rate,
             text_rate, r.tree.count_class(NodeClass::Hot)));
}

}  // namespace

int main() {
  criterion_example();

  SweepTotals s = run_sweep();
  const std::string sweep = fmt("%llu traces, %llu calls, %llu query points, %.1f s",
                                static_cast<unsigned long long>(s.traces),
                                static_cast<unsigned long long>(s.calls),
                                static_cast<unsigned long long>(s.queries), s.seconds);
  report(2, "no false negatives over the fuzzed sweep",
         s.traces >= 500 && s.false_negatives == 0 && s.seconds < kSweepMaxSeconds,
         sweep + fmt(", %llu false negatives", static_cast<unsigned long long>(s.false_negatives)));
  report(3, "every returned non-hot context exceeds floor((phi-eps)N)",
         s.traces >= 500 && s.fp_bound_violations == 0,
         fmt("%llu violations; %llu truly hot returns sat at the ceiling",
             static_cast<unsigned long long>(s.fp_bound_violations),
             static_cast<unsigned long long>(s.hot_at_ceiling)));
  report(4, "0 <= estimate - exact <= floor(eps*N) at every query point",
         s.queries >= 10 * s.traces && s.counter_violations == 0,
         fmt("%llu counters checked, %llu violations",
             static_cast<unsigned long long>(s.counter_checks),
             static_cast<unsigned long long>(s.counter_violations)));
  report(5, "exact HCCT <= reported HCCT <= MCCT <= CCT",
         s.containment_checks >= 10 * s.traces && s.containment_violations == 0,
         fmt("%llu snapshots, %llu violations",
             static_cast<unsigned long long>(s.containment_checks),
             static_cast<unsigned long long>(s.containment_violations)));

  criterion_find_min();
  criterion_space(s);
  criterion_throughput();

  std::printf("%s: %d criteria failed\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
  return failures == 0 ? 0 : 1;
}
