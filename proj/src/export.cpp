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

#include "hcct/export.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "json.hpp"

#include "hcct/errors.hpp"

namespace hcct {

void SymbolTable::add(RoutineId id, std::string name) {
  names_[id.value] = std::move(name);
}

std::string SymbolTable::name(RoutineId id) const {
  auto it = names_.find(id.value);
  return it == names_.end() ? std::to_string(id.value) : it->second;
}

SymbolTable SymbolTable::parse(std::istream& in) {
  SymbolTable t;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    auto sp = line.find(' ');
    std::uint32_t id = 0;
    auto [p, ec] = std::from_chars(line.data(), line.data() + (sp == std::string::npos ? line.size() : sp), id);
    if (sp == std::string::npos || ec != std::errc{} || p != line.data() + sp ||
        sp + 1 >= line.size()) {
      throw MalformedRecord(line_no, "expected '<routine_id> <name>'");
    }
    t.add(RoutineId{id}, line.substr(sp + 1));
  }
  return t;
}

SymbolTable SymbolTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open symbol file: " + path);
  return parse(in);
}

void SymbolTable::write(std::ostream& out) const {
  std::map<std::uint32_t, std::string> sorted(names_.begin(), names_.end());
  for (const auto& [id, name] : sorted) out << id << ' ' << name << '\n';
}

SymbolTable main_p_q_symbols() {
  SymbolTable t;
  t.add(kMainRoutine, "main");
  t.add(kPRoutine, "p");
  t.add(kQRoutine, "q");
  return t;
}

ExportFormat parse_export_format(std::string_view s) {
  if (s == "dot") return ExportFormat::Dot;
  if (s == "folded") return ExportFormat::Folded;
  if (s == "json-lines") return ExportFormat::JsonLines;
  if (s == "report") return ExportFormat::Report;
  throw std::invalid_argument("unknown export format: " + std::string(s));
}

namespace {

std::string dot_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

std::string frame_label(const ContextTreeNode& n, const SymbolTable& symbols) {
  return symbols.name(n.frame.routine) + "@" + std::to_string(n.frame.call_site.value);
}

}  // namespace

void write_dot(const ContextTree& tree, std::ostream& out, const SymbolTable& symbols) {
  auto nodes = tree.nodes();
  out << "digraph hcct {\n"
      << "  node [shape=box, fontname=\"monospace\"];\n"
      << "  n0 [label=\"root\", shape=ellipse];\n";
  for (NodeIndex i = 1; i < nodes.size(); ++i) {
    const auto& n = nodes[i];
    out << "  n" << i << " [label=\"" << dot_escape(frame_label(n, symbols)) << "\\n"
        << n.count << "\xC2\xB1" << n.error_bound << (n.tracked ? "" : "?") << '"';
    switch (n.cls) {
      case NodeClass::Hot: out << ", style=filled, fillcolor=\"#f4a582\""; break;
      case NodeClass::ColdAncestor: out << ", style=dashed"; break;
      default: break;
    }
    out << "];\n";
  }
  for (NodeIndex i = 1; i < nodes.size(); ++i) {
    out << "  n" << nodes[i].parent << " -> n" << i << ";\n";
  }
  out << "}\n";
}

void write_folded(const ContextTree& tree, std::ostream& out, const SymbolTable& symbols) {
  auto nodes = tree.nodes();
  std::vector<std::string> names;
  for (NodeIndex i = 1; i < nodes.size(); ++i) {
    if (!tree.is_leaf(i)) continue;
    names.clear();
    for (NodeIndex a = i; a != ContextTree::root(); a = nodes[a].parent) {
      names.push_back(symbols.name(nodes[a].frame.routine));
    }
    for (auto it = names.rbegin(); it != names.rend(); ++it) {
      if (it != names.rbegin()) out << ';';
      out << *it;
    }
    out << ' ' << nodes[i].count << '\n';
  }
}

void write_json_lines(const ContextTree& tree, std::ostream& out,
                      const SymbolTable& symbols) {
  auto nodes = tree.nodes();
  for (NodeIndex i = 0; i < nodes.size(); ++i) {
    const auto& n = nodes[i];
    nlohmann::ordered_json j;
    j["id"] = i;
    if (i == ContextTree::root()) {
      j["parent"] = nullptr;
    } else {
      j["parent"] = n.parent;
      j["routine"] = n.frame.routine.value;
      if (!symbols.empty()) j["name"] = symbols.name(n.frame.routine);
      j["call_site"] = n.frame.call_site.value;
    }
    j["count"] = n.count;
    j["error_bound"] = n.error_bound;
    j["class"] = to_string(n.cls);
    j["tracked"] = n.tracked;
    out << j.dump() << '\n';
  }
}

void write_tree_listing(const ContextTree& tree, std::ostream& out,
                        const SymbolTable& symbols) {
  auto nodes = tree.nodes();
  std::vector<std::size_t> depth(nodes.size(), 0);
  for (NodeIndex i = 1; i < nodes.size(); ++i) {
    const auto& n = nodes[i];
    depth[i] = depth[n.parent] + 1;
    out << std::string(2 * (depth[i] - 1), ' ') << frame_label(n, symbols)
        << "  count=" << n.count << "  error=" << n.error_bound << "  "
        << to_string(n.cls) << (n.tracked ? "" : " (untracked)") << '\n';
  }
}

void write_hcct_report(const HcctReport& report, std::ostream& out,
                       const SymbolTable& symbols) {
  out << "n_events: " << report.n_events << '\n'
      << "phi: " << report.phi << '\n'
      << "epsilon: " << report.epsilon << '\n'
      << "pool_capacity: " << report.pool_capacity << '\n'
      << "mcct_live_nodes: " << report.mcct_live_nodes << '\n'
      << "mcct_peak_nodes: " << report.mcct_peak_nodes << '\n'
      << "hot_contexts: " << report.tree.count_class(NodeClass::Hot) << '\n'
      << "tree_nodes: " << report.tree.size() - 1 << '\n';
  write_tree_listing(report.tree, out, symbols);
}

void write_tree(ExportFormat format, const ContextTree& tree, std::ostream& out,
                const SymbolTable& symbols) {
  switch (format) {
    case ExportFormat::Dot: write_dot(tree, out, symbols); break;
    case ExportFormat::Folded: write_folded(tree, out, symbols); break;
    case ExportFormat::JsonLines: write_json_lines(tree, out, symbols); break;
    case ExportFormat::Report: write_tree_listing(tree, out, symbols); break;
  }
}

}  // namespace hcct
