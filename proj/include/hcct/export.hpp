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
#include <string_view>
#include <unordered_map>

#include "hcct/context_tree.hpp"
#include "hcct/hcct_builder.hpp"

namespace hcct {

/// Routine id -> display name. Unknown ids print as their decimal value.
class SymbolTable {
 public:
  void add(RoutineId id, std::string name);
  std::string name(RoutineId id) const;
  bool empty() const { return names_.empty(); }

  /// Lines of `<routine_id> <name>`; '#' starts a comment line.
  static SymbolTable parse(std::istream& in);
  static SymbolTable load(const std::string& path);
  void write(std::ostream& out) const;

 private:
  std::unordered_map<std::uint32_t, std::string> names_;
};

/// Names for the routines of main_p_q_trace.
SymbolTable main_p_q_symbols();

enum class ExportFormat { Dot, Folded, JsonLines, Report };

/// "dot", "folded", "json-lines" or "report". Throws std::invalid_argument.
ExportFormat parse_export_format(std::string_view s);

/// Graphviz digraph with one node per context, labeled
/// `routine@callsite\ncount±error`. Hot nodes are filled, cold ancestors
/// dashed, untracked counters marked with '?'.
void write_dot(const ContextTree& tree, std::ostream& out,
               const SymbolTable& symbols = {});

/// Flame-graph folded stacks: one `r0;r1;...;rk <count>` line per leaf,
/// root-most frame first.
void write_folded(const ContextTree& tree, std::ostream& out,
                  const SymbolTable& symbols = {});

/// One JSON object per node in preorder: id, parent (null for the root),
/// routine, name, call_site, count, error_bound, class, tracked.
void write_json_lines(const ContextTree& tree, std::ostream& out,
                      const SymbolTable& symbols = {});

/// Indented, human-readable tree listing.
void write_tree_listing(const ContextTree& tree, std::ostream& out,
                        const SymbolTable& symbols = {});

/// Run header followed by the tree listing.
void write_hcct_report(const HcctReport& report, std::ostream& out,
                       const SymbolTable& symbols = {});

void write_tree(ExportFormat format, const ContextTree& tree, std::ostream& out,
                const SymbolTable& symbols = {});

}  // namespace hcct
