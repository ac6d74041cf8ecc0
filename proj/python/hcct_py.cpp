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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "hcct/analysis.hpp"
#include "hcct/errors.hpp"
#include "hcct/exact_cct.hpp"
#include "hcct/export.hpp"
#include "hcct/hcct_builder.hpp"
#include "hcct/trace.hpp"

namespace py = pybind11;

namespace {

using Path = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

Path to_py(const hcct::ContextPath& p) {
  Path out;
  out.reserve(p.size());
  for (const auto& f : p) out.emplace_back(f.routine.value, f.call_site.value);
  return out;
}

py::list tree_nodes(const hcct::ContextTree& t) {
  py::list out;
  for (hcct::NodeIndex i = 1; i < t.size(); ++i) {
    const auto& n = t.node(i);
    py::dict d;
    d["path"] = to_py(t.path(i));
    d["parent"] = n.parent;
    d["count"] = n.count;
    d["error_bound"] = n.error_bound;
    d["class"] = std::string(hcct::to_string(n.cls));
    d["tracked"] = n.tracked;
    out.append(std::move(d));
  }
  return out;
}

hcct::SymbolTable symbols_from(const std::optional<std::map<std::uint32_t, std::string>>& names) {
  hcct::SymbolTable t;
  if (names) {
    for (const auto& [id, name] : *names) t.add(hcct::RoutineId{id}, name);
  }
  return t;
}

std::string export_tree(const hcct::ContextTree& t, const std::string& format,
                        const std::optional<std::map<std::uint32_t, std::string>>& names) {
  std::ostringstream out;
  hcct::write_tree(hcct::parse_export_format(format), t, out, symbols_from(names));
  return out.str();
}

}  // namespace

PYBIND11_MODULE(_hcct, m) {
  m.doc() = "Streaming hot calling context tree profiler";

  auto error = py::register_exception<hcct::Error>(m, "Error");
  py::register_exception<hcct::MalformedRecord>(m, "MalformedRecord", error.ptr());
  py::register_exception<hcct::UnbalancedTrace>(m, "UnbalancedTrace", error.ptr());
  py::register_exception<hcct::InvalidThreshold>(m, "InvalidThreshold", error.ptr());
  py::register_exception<hcct::EmptyPool>(m, "EmptyPool", error.ptr());
  py::register_exception<hcct::EmptyTrace>(m, "EmptyTrace", error.ptr());
  py::register_exception<hcct::MismatchedRun>(m, "MismatchedRun", error.ptr());

  py::class_<hcct::Trace>(m, "Trace")
      .def(py::init<>())
      .def_static("parse", &hcct::read_trace_string, py::arg("text"))
      .def_static("load", &hcct::read_trace_file, py::arg("path"))
      .def("dumps", &hcct::write_trace_string)
      .def("save", [](const hcct::Trace& t, const std::string& path) { hcct::write_trace_file(t, path); })
      .def("call", [](hcct::Trace& t, std::uint32_t r, std::uint32_t cs) {
        t.events.push_back(hcct::TraceEvent::call(r, cs));
      }, py::arg("routine"), py::arg("call_site") = 0)
      .def("ret", [](hcct::Trace& t) { t.events.push_back(hcct::TraceEvent::ret()); })
      .def_property_readonly("call_count", &hcct::Trace::call_count)
      .def_property_readonly("open_calls", &hcct::Trace::open_calls)
      .def("__len__", [](const hcct::Trace& t) { return t.events.size(); })
      .def("__eq__", [](const hcct::Trace& a, const hcct::Trace& b) { return a == b; });

  m.def("generate_zipf", [](std::uint32_t routines, std::uint32_t depth, std::uint64_t calls,
                            double skew, std::uint64_t seed, std::uint64_t contexts,
                            std::uint32_t call_sites) {
    hcct::ZipfWorkloadSpec s;
    s.distinct_routines = routines;
    s.max_depth = depth;
    s.total_calls = calls;
    s.skew = skew;
    s.seed = seed;
    s.contexts = contexts;
    s.call_sites = call_sites;
    return hcct::generate_zipf_trace(s);
  }, py::arg("routines") = 100, py::arg("depth") = 8, py::arg("calls") = 100000,
     py::arg("skew") = 1.0, py::arg("seed") = 1, py::arg("contexts") = 10000,
     py::arg("call_sites") = 4);
  m.def("main_p_q", &hcct::main_p_q_trace, py::arg("n"),
        "main calls p once and q n-2 times");
  m.attr("MAIN_P_Q_SYMBOLS") = std::map<std::uint32_t, std::string>{{1, "main"}, {2, "p"}, {3, "q"}};

  py::class_<hcct::ExactCct>(m, "ExactCct")
      .def(py::init(&hcct::build_exact_cct), py::arg("trace"))
      .def_property_readonly("node_count", &hcct::ExactCct::node_count)
      .def_property_readonly("n_events", &hcct::ExactCct::n_events)
      .def("count", [](const hcct::ExactCct& c, const Path& p) -> std::optional<std::uint64_t> {
        hcct::ContextPath path;
        for (auto [r, cs] : p) path.push_back({hcct::RoutineId{r}, hcct::CallSiteId{cs}});
        auto i = c.find(path);
        if (!i) return std::nullopt;
        return c.node(*i).count;
      }, py::arg("path"))
      .def("hot", [](const hcct::ExactCct& c, double phi, bool min_one) {
        std::vector<std::pair<Path, std::uint64_t>> out;
        for (auto i : hcct::exact_hot_set(c, phi, min_one)) out.emplace_back(to_py(c.path(i)), c.node(i).count);
        return out;
      }, py::arg("phi"), py::arg("min_threshold_one") = true)
      .def("hcct", [](const hcct::ExactCct& c, double phi, bool min_one) {
        return tree_nodes(hcct::classify_exact(hcct::exact_hcct(c, phi, min_one), phi, min_one));
      }, py::arg("phi"), py::arg("min_threshold_one") = true)
      .def("top_share", &hcct::top_share, py::arg("fraction"))
      .def("skewness", [](const hcct::ExactCct& c) { return hcct::skewness(c).points; });

  py::class_<hcct::HcctReport>(m, "HcctReport")
      .def_readonly("n_events", &hcct::HcctReport::n_events)
      .def_readonly("phi", &hcct::HcctReport::phi)
      .def_readonly("epsilon", &hcct::HcctReport::epsilon)
      .def_readonly("pool_capacity", &hcct::HcctReport::pool_capacity)
      .def_readonly("mcct_live_nodes", &hcct::HcctReport::mcct_live_nodes)
      .def_readonly("mcct_peak_nodes", &hcct::HcctReport::mcct_peak_nodes)
      .def("nodes", [](const hcct::HcctReport& r) { return tree_nodes(r.tree); })
      .def("hot", [](const hcct::HcctReport& r) {
        std::vector<std::pair<Path, std::uint64_t>> out;
        for (hcct::NodeIndex i = 1; i < r.tree.size(); ++i) {
          if (r.tree.node(i).cls == hcct::NodeClass::Hot) out.emplace_back(to_py(r.tree.path(i)), r.tree.node(i).count);
        }
        return out;
      })
      .def("export", [](const hcct::HcctReport& r, const std::string& format,
                        const std::optional<std::map<std::uint32_t, std::string>>& names) {
        if (format == "report") {
          std::ostringstream out;
          hcct::write_hcct_report(r, out, symbols_from(names));
          return out.str();
        }
        return export_tree(r.tree, format, names);
      }, py::arg("format") = "report", py::arg("symbols") = py::none());

  py::class_<hcct::HcctBuilder>(m, "HcctBuilder")
      .def(py::init<double, std::optional<std::size_t>, bool>(), py::arg("epsilon"),
           py::arg("pool_capacity") = py::none(), py::arg("min_threshold_one") = true)
      .def("run", &hcct::HcctBuilder::run, py::arg("trace"))
      .def("call", [](hcct::HcctBuilder& b, std::uint32_t r, std::uint32_t cs) {
        b.on_call(hcct::Frame{hcct::RoutineId{r}, hcct::CallSiteId{cs}});
      }, py::arg("routine"), py::arg("call_site") = 0)
      .def("ret", &hcct::HcctBuilder::on_return)
      .def("close_open_calls", &hcct::HcctBuilder::close_open_calls)
      .def("query", &hcct::HcctBuilder::query_hcct, py::arg("phi"))
      .def("finalize", &hcct::HcctBuilder::finalize, py::arg("phi"))
      .def("mcct", [](const hcct::HcctBuilder& b) { return tree_nodes(b.mcct_snapshot()); })
      .def("verify", &hcct::HcctBuilder::verify)
      .def_property_readonly("n_events", &hcct::HcctBuilder::n_events)
      .def_property_readonly("pool_capacity", [](const hcct::HcctBuilder& b) { return b.pool().capacity(); })
      .def_property_readonly("pool_size", [](const hcct::HcctBuilder& b) { return b.pool().size(); })
      .def_property_readonly("stats", [](const hcct::HcctBuilder& b) {
        const auto& s = b.stats();
        py::dict d;
        d["created"] = s.created;
        d["pruned"] = s.pruned;
        d["live"] = s.live;
        d["peak_live"] = s.peak_live;
        return d;
      });

  m.def("compare", [](const hcct::ExactCct& exact, const hcct::HcctReport& r, bool min_one) {
    return py::module_::import("json").attr("loads")(hcct::report_to_json(hcct::compare(exact, r, min_one)));
  }, py::arg("exact"), py::arg("report"), py::arg("min_threshold_one") = true);
}
