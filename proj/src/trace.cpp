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

#include "hcct/trace.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "hcct/errors.hpp"

namespace hcct {

namespace {

constexpr std::size_t kReadChunk = 1 << 20;

bool parse_u32(std::string_view s, std::uint32_t& out) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace

std::uint64_t Trace::call_count() const noexcept {
  std::uint64_t n = 0;
  for (const auto& ev : events) n += ev.is_call() ? 1 : 0;
  return n;
}

std::size_t Trace::open_calls() const noexcept {
  std::size_t depth = 0;
  for (const auto& ev : events) {
    if (ev.is_call()) {
      ++depth;
    } else if (depth > 0) {
      --depth;
    }
  }
  return depth;
}

void check_well_formed(const Trace& trace) {
  std::size_t depth = 0;
  for (std::size_t i = 0; i < trace.events.size(); ++i) {
    if (trace.events[i].is_call()) {
      ++depth;
    } else if (depth == 0) {
      throw UnbalancedTrace("return without open call at event " +
                            std::to_string(i));
    } else {
      --depth;
    }
  }
}

std::optional<TraceEvent> parse_trace_line(std::string_view line,
                                           std::size_t line_no) {
  if (!line.empty() && line.front() == '#') return std::nullopt;
  if (line == "R") return TraceEvent::ret();
  if (line.size() < 5 || line[0] != 'C' || line[1] != ' ') {
    throw MalformedRecord(line_no, "expected 'C <routine> <site>' or 'R'");
  }
  std::string_view rest = line.substr(2);
  auto sp = rest.find(' ');
  if (sp == std::string_view::npos) {
    throw MalformedRecord(line_no, "call record needs two fields");
  }
  std::uint32_t routine = 0;
  std::uint32_t site = 0;
  if (!parse_u32(rest.substr(0, sp), routine)) {
    throw MalformedRecord(line_no, "bad routine id");
  }
  if (!parse_u32(rest.substr(sp + 1), site)) {
    throw MalformedRecord(line_no, "bad call site");
  }
  return TraceEvent::call(routine, site);
}

TraceReader::TraceReader(std::istream& in) : in_(in), buf_(kReadChunk) {}

bool TraceReader::refill() {
  if (eof_) return false;
  in_.read(buf_.data(), static_cast<std::streamsize>(buf_.size()));
  end_ = static_cast<std::size_t>(in_.gcount());
  begin_ = 0;
  if (end_ < buf_.size()) eof_ = true;
  return end_ > 0;
}

std::optional<std::string_view> TraceReader::next_line() {
  carry_.clear();
  for (;;) {
    if (begin_ == end_ && !refill()) {
      if (carry_.empty()) return std::nullopt;
      // Last line without '\n'.
      return std::string_view(carry_);
    }
    const char* start = buf_.data() + begin_;
    const char* stop = buf_.data() + end_;
    const char* nl = static_cast<const char*>(
        std::char_traits<char>::find(start, static_cast<std::size_t>(stop - start), '\n'));
    if (nl != nullptr) {
      auto len = static_cast<std::size_t>(nl - start);
      begin_ += len + 1;
      if (carry_.empty()) return std::string_view(start, len);
      carry_.append(start, len);
      return std::string_view(carry_);
    }
    carry_.append(start, static_cast<std::size_t>(stop - start));
    begin_ = end_;
  }
}

std::optional<TraceEvent> TraceReader::next() {
  for (;;) {
    auto line = next_line();
    if (!line) return std::nullopt;
    ++line_;
    auto ev = parse_trace_line(*line, line_);
    if (!ev) continue;
    if (ev->is_call()) {
      ++depth_;
    } else {
      if (depth_ == 0) {
        throw UnbalancedTrace("line " + std::to_string(line_) +
                              ": return without open call");
      }
      --depth_;
    }
    return ev;
  }
}

std::uint64_t for_each_event(std::istream& in,
                             const std::function<void(const TraceEvent&)>& sink) {
  TraceReader reader(in);
  std::uint64_t n = 0;
  while (auto ev = reader.next()) {
    sink(*ev);
    ++n;
  }
  return n;
}

Trace read_trace(std::istream& in) {
  Trace t;
  TraceReader reader(in);
  while (auto ev = reader.next()) t.events.push_back(*ev);
  return t;
}

Trace read_trace_string(std::string_view text) {
  std::istringstream in{std::string(text)};
  return read_trace(in);
}

Trace read_trace_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open trace file: " + path);
  return read_trace(in);
}

void write_trace(const Trace& trace, std::ostream& out) {
  check_well_formed(trace);
  std::string buf;
  buf.reserve(kReadChunk + 64);
  auto flush = [&] {
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    buf.clear();
  };
  char num[16];
  auto put_u32 = [&](std::uint32_t v) {
    auto [p, ec] = std::to_chars(num, num + sizeof num, v);
    buf.append(num, p);
  };
  std::size_t depth = 0;
  for (const auto& ev : trace.events) {
    if (ev.is_call()) {
      buf += "C ";
      put_u32(ev.routine.value);
      buf += ' ';
      put_u32(ev.call_site.value);
      buf += '\n';
      ++depth;
    } else {
      buf += "R\n";
      --depth;
    }
    if (buf.size() >= kReadChunk) flush();
  }
  for (; depth > 0; --depth) buf += "R\n";
  flush();
  if (!out) throw Error("trace write failed");
}

std::string write_trace_string(const Trace& trace) {
  std::ostringstream out;
  write_trace(trace, out);
  return std::move(out).str();
}

void write_trace_file(const Trace& trace, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot create trace file: " + path);
  write_trace(trace, out);
  out.flush();
  if (!out) throw Error("trace write failed: " + path);
}

Trace main_p_q_trace(std::uint64_t n) {
  if (n < 8) throw std::invalid_argument("main_p_q_trace requires n >= 8");
  Trace t;
  t.events.reserve(2 * n);
  t.events.push_back(TraceEvent::call(kMainRoutine, CallSiteId{0}));
  t.events.push_back(TraceEvent::call(kPRoutine, CallSiteId{1}));
  t.events.push_back(TraceEvent::ret());
  for (std::uint64_t i = 0; i + 2 < n; ++i) {
    t.events.push_back(TraceEvent::call(kQRoutine, CallSiteId{2}));
    t.events.push_back(TraceEvent::ret());
  }
  t.events.push_back(TraceEvent::ret());
  return t;
}

}  // namespace hcct
