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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hcct {

struct RoutineId {
  std::uint32_t value = 0;
  auto operator<=>(const RoutineId&) const = default;
};

struct CallSiteId {
  std::uint32_t value = 0;
  auto operator<=>(const CallSiteId&) const = default;
};

/// One level of a calling context. Two calls denote the same child context
/// iff both routine and call site match.
struct Frame {
  RoutineId routine;
  CallSiteId call_site;
  auto operator<=>(const Frame&) const = default;
};

using ContextPath = std::vector<Frame>;

struct TraceEvent {
  enum class Kind : std::uint8_t { Call, Return };

  Kind kind = Kind::Return;
  RoutineId routine;     // Call only
  CallSiteId call_site;  // Call only

  static constexpr TraceEvent call(RoutineId r, CallSiteId cs) {
    return TraceEvent{Kind::Call, r, cs};
  }
  static constexpr TraceEvent call(std::uint32_t r, std::uint32_t cs) {
    return call(RoutineId{r}, CallSiteId{cs});
  }
  static constexpr TraceEvent ret() { return TraceEvent{}; }

  bool is_call() const noexcept { return kind == Kind::Call; }
  Frame frame() const noexcept { return {routine, call_site}; }

  bool operator==(const TraceEvent&) const = default;
};

/// An ordered event sequence. A trace may end with calls still open (a
/// truncated log); consumers close them implicitly at the end.
struct Trace {
  std::vector<TraceEvent> events;

  /// Number of routine invocations, i.e. the stream length N.
  std::uint64_t call_count() const noexcept;
  /// Calls left open at the end of the trace.
  std::size_t open_calls() const noexcept;

  bool operator==(const Trace&) const = default;
};

/// Throws UnbalancedTrace at the first return that has no open call.
void check_well_formed(const Trace& trace);

/// Incremental decoder for the line-oriented text format:
///
///   C <routine_id> <call_site>
///   R
///   # comment
///
/// Every line ends with '\n' (a missing final newline is tolerated).
class TraceReader {
 public:
  explicit TraceReader(std::istream& in);

  /// Next event, or nullopt at end of input. Throws MalformedRecord or
  /// UnbalancedTrace.
  std::optional<TraceEvent> next();

  std::size_t line() const noexcept { return line_; }
  std::size_t depth() const noexcept { return depth_; }

 private:
  bool refill();
  std::optional<std::string_view> next_line();

  std::istream& in_;
  std::vector<char> buf_;
  std::size_t begin_ = 0;
  std::size_t end_ = 0;
  bool eof_ = false;
  std::string carry_;
  std::size_t line_ = 0;
  std::size_t depth_ = 0;
};

/// Decodes one line. Returns nullopt for comment lines.
std::optional<TraceEvent> parse_trace_line(std::string_view line,
                                           std::size_t line_no);

Trace read_trace(std::istream& in);
Trace read_trace_string(std::string_view text);
Trace read_trace_file(const std::string& path);

/// Feeds every event of a trace file to `sink` without materializing it.
/// Returns the number of events delivered.
std::uint64_t for_each_event(std::istream& in,
                             const std::function<void(const TraceEvent&)>& sink);

/// Writes the canonical form: no comments, and calls left open by a
/// truncated trace are closed with trailing returns.
void write_trace(const Trace& trace, std::ostream& out);
std::string write_trace_string(const Trace& trace);
void write_trace_file(const Trace& trace, const std::string& path);

struct ZipfWorkloadSpec {
  std::uint32_t distinct_routines = 100;
  std::uint32_t max_depth = 8;
  std::uint64_t total_calls = 100000;
  double skew = 1.0;
  std::uint64_t seed = 1;
  /// Size of the candidate context pool that popularity ranks are drawn over.
  std::uint64_t contexts = 10000;
  /// Distinct call sites a caller may use for the same callee.
  std::uint32_t call_sites = 4;

  /// Throws std::invalid_argument if a field is out of range.
  void validate() const;
};

/// Synthetic trace whose sampled calling contexts follow a Zipf(skew)
/// popularity law over a random pool of contexts. Deterministic per seed.
Trace generate_zipf_trace(const ZipfWorkloadSpec& spec);

/// Routine ids used by main_p_q_trace.
inline constexpr RoutineId kMainRoutine{1};
inline constexpr RoutineId kPRoutine{2};
inline constexpr RoutineId kQRoutine{3};

/// `main` calls `p` once and then `q` (n - 2) times: n calls over the three
/// contexts main, main->p and main->q. Requires n >= 8.
Trace main_p_q_trace(std::uint64_t n);

}  // namespace hcct

template <>
struct std::hash<hcct::Frame> {
  std::size_t operator()(const hcct::Frame& f) const noexcept {
    return std::hash<std::uint64_t>{}(
        (std::uint64_t{f.routine.value} << 32) | f.call_site.value);
  }
};
