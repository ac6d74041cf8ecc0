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
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "hcct/context_tree.hpp"
#include "hcct/exact_cct.hpp"
#include "hcct/hcct_builder.hpp"

namespace hcct {

struct CounterErrorStats {
  std::uint64_t samples = 0;
  std::int64_t max_error = 0;
  double avg_error = 0.0;
  /// Fraction of samples with error 0; 1.0 when there are no samples.
  double exact_fraction = 1.0;
  /// Samples whose estimate is below the true count.
  std::uint64_t underestimates = 0;
};

/// Streaming result checked against the exact tree of the same stream.
struct AccuracyReport {
  std::uint64_t n_events = 0;
  double phi = 0;
  double epsilon = 0;
  std::uint64_t hot_threshold = 0;
  std::uint64_t hot_true = 0;
  std::uint64_t hot_returned = 0;
  std::uint64_t false_negatives = 0;
  /// Returned contexts whose true count is below the hot threshold.
  std::uint64_t false_positives = 0;
  /// max over false positives of (hot threshold - true count).
  std::uint64_t max_false_positive_deficit = 0;
  /// False positives with true count <= floor((phi - epsilon) N). Hot
  /// contexts are exempt: when floor(phi N) == floor((phi - epsilon) N) a
  /// context at exactly that count is both required and below the ceiling.
  std::uint64_t false_positive_bound_violations = 0;
  CounterErrorStats counter_error;
  std::uint64_t mcct_peak_nodes = 0;
  std::uint64_t mcct_live_nodes = 0;
  std::uint64_t exact_cct_nodes = 0;
  std::uint64_t pool_capacity = 0;
  /// Largest overestimate a counter may carry: floor(N / pool_capacity),
  /// or floor(epsilon N) when the capacity is unknown.
  std::uint64_t error_slack = 0;

  /// No false negatives, no underestimated counter, and neither counter
  /// error nor false-positive deficit above error_slack.
  bool guarantees_hold() const {
    return false_negatives == 0 && counter_error.underestimates == 0 &&
           counter_error.max_error <= static_cast<std::int64_t>(error_slack) &&
           max_false_positive_deficit <= error_slack;
  }
};

/// Joins `report` onto `exact` by context path. Throws MismatchedRun if the
/// two were not built from the same stream.
AccuracyReport compare(const ExactCct& exact, const HcctReport& report,
                       bool min_threshold_one = true);

/// Estimated minus true count over every tracked node of `tree`.
CounterErrorStats tracked_counter_errors(const ExactCct& exact,
                                         const ContextTree& tree);

/// Exact node index for every node of `tree` (kNoNode for the root), or
/// throws MismatchedRun if some context does not occur in `exact`.
std::vector<NodeIndex> map_onto(const ExactCct& exact, const ContextTree& tree);

/// Every context of `inner` is also a context of `outer`.
bool contexts_subset(const ContextTree& inner, const ContextTree& outer);

struct SkewnessCurve {
  /// (fraction of contexts, fraction of calls they cover), hottest first.
  std::vector<std::pair<double, double>> points;
};

/// Cumulative share of calls covered by the hottest contexts, sampled at
/// every percentile of the context ranking. Throws EmptyTrace if N = 0.
SkewnessCurve skewness(const ExactCct& exact);

/// Share of all calls taken by the hottest `fraction` of contexts.
double top_share(const ExactCct& exact, double fraction);

void write_report(const AccuracyReport& r, std::ostream& out);
std::string report_to_json(const AccuracyReport& r);

}  // namespace hcct
