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

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "hcct/analysis.hpp"
#include "hcct/errors.hpp"
#include "hcct/exact_cct.hpp"
#include "hcct/export.hpp"
#include "hcct/hcct_builder.hpp"
#include "hcct/threshold.hpp"
#include "hcct/trace.hpp"

namespace {

using hcct::ExportFormat;

// Exit codes.
constexpr int kOk = 0;
constexpr int kGuaranteeViolated = 1;
constexpr int kFailure = 2;

struct Options {
  // gen
  hcct::ZipfWorkloadSpec spec;
  std::uint64_t example = 0;
  std::string symbols_out;

  // shared
  std::string trace = "-";
  std::string output = "-";
  std::string symbols;
  std::string format = "report";
  double phi = 0.01;
  double eps = 0.002;
  std::optional<std::size_t> pool_capacity;
  bool final_prune = false;
  bool min_one = true;
  bool exact_full = false;
  std::string tree = "hcct";
  std::string json_out;
};

class Output {
 public:
  explicit Output(const std::string& path) {
    if (path != "-") {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw hcct::Error("cannot open output file: " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }
  void close() {
    stream().flush();
    if (!stream()) throw hcct::Error("write failed");
  }

 private:
  std::unique_ptr<std::ofstream> file_;
};

class Input {
 public:
  explicit Input(const std::string& path) {
    if (path != "-") {
      file_ = std::make_unique<std::ifstream>(path, std::ios::binary);
      if (!*file_) throw hcct::Error("cannot open trace file: " + path);
    }
  }
  std::istream& stream() { return file_ ? *file_ : std::cin; }

 private:
  std::unique_ptr<std::ifstream> file_;
};

hcct::SymbolTable load_symbols(const Options& o) {
  return o.symbols.empty() ? hcct::SymbolTable{} : hcct::SymbolTable::load(o.symbols);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Streams the trace through a builder without materializing it.
hcct::HcctBuilder mine_stream(const Options& o, double* wall) {
  hcct::check_phi_eps(o.phi, o.eps);
  hcct::HcctBuilder b(o.eps, o.pool_capacity, o.min_one);
  Input in(o.trace);
  auto t0 = std::chrono::steady_clock::now();
  hcct::for_each_event(in.stream(), [&](const hcct::TraceEvent& ev) { b.on_event(ev); });
  b.close_open_calls();
  *wall = seconds_since(t0);
  return b;
}

hcct::HcctReport query(hcct::HcctBuilder& b, const Options& o) {
  return o.final_prune ? b.finalize(o.phi) : b.query_hcct(o.phi);
}

void print_run_summary(const hcct::HcctReport& r, double wall) {
  std::fprintf(stderr, "N=%llu pool_capacity=%zu peak_mcct_nodes=%llu wall_time=%.6fs\n",
               static_cast<unsigned long long>(r.n_events), r.pool_capacity,
               static_cast<unsigned long long>(r.mcct_peak_nodes), wall);
}

int cmd_gen(const Options& o) {
  hcct::Trace t;
  if (o.example != 0) {
    t = hcct::main_p_q_trace(o.example);
    if (!o.symbols_out.empty()) {
      std::ofstream s(o.symbols_out);
      if (!s) throw hcct::Error("cannot open output file: " + o.symbols_out);
      hcct::main_p_q_symbols().write(s);
    }
  } else {
    t = hcct::generate_zipf_trace(o.spec);
  }
  Output out(o.output);
  hcct::write_trace(t, out.stream());
  out.close();
  return kOk;
}

int cmd_exact(const Options& o) {
  Input in(o.trace);
  auto t0 = std::chrono::steady_clock::now();
  hcct::ExactCctBuilder builder;
  hcct::for_each_event(in.stream(), [&](const hcct::TraceEvent& ev) { builder.on_event(ev); });
  hcct::ExactCct cct = std::move(builder).finish();
  const double wall = seconds_since(t0);
  std::fprintf(stderr, "N=%llu cct_nodes=%zu wall_time=%.6fs\n",
               static_cast<unsigned long long>(cct.n_events()), cct.node_count(), wall);

  hcct::ContextTree tree = o.exact_full
                               ? hcct::classify_exact(cct, o.phi, o.min_one)
                               : hcct::classify_exact(hcct::exact_hcct(cct, o.phi, o.min_one),
                                                      o.phi, o.min_one);
  Output out(o.output);
  hcct::write_tree(hcct::parse_export_format(o.format), tree, out.stream(), load_symbols(o));
  out.close();
  return kOk;
}

int cmd_mine(const Options& o) {
  const auto format = hcct::parse_export_format(o.format);
  double wall = 0;
  hcct::HcctBuilder b = mine_stream(o, &wall);
  hcct::HcctReport r = query(b, o);
  print_run_summary(r, wall);
  Output out(o.output);
  if (format == ExportFormat::Report) {
    hcct::write_hcct_report(r, out.stream(), load_symbols(o));
  } else {
    hcct::write_tree(format, r.tree, out.stream(), load_symbols(o));
  }
  out.close();
  return kOk;
}

int cmd_compare(const Options& o) {
  hcct::check_phi_eps(o.phi, o.eps);
  hcct::Trace t;
  {
    Input in(o.trace);
    t = hcct::read_trace(in.stream());
  }
  hcct::HcctBuilder b(o.eps, o.pool_capacity, o.min_one);
  auto t0 = std::chrono::steady_clock::now();
  b.run(t);
  const double wall = seconds_since(t0);
  hcct::HcctReport r = query(b, o);
  print_run_summary(r, wall);
  hcct::AccuracyReport acc = hcct::compare(hcct::build_exact_cct(t), r, o.min_one);

  Output out(o.output);
  if (o.format == "json") {
    out.stream() << hcct::report_to_json(acc) << '\n';
  } else {
    hcct::write_report(acc, out.stream());
  }
  out.close();
  if (!o.json_out.empty()) {
    Output j(o.json_out);
    j.stream() << hcct::report_to_json(acc) << '\n';
    j.close();
  }
  return acc.guarantees_hold() ? kOk : kGuaranteeViolated;
}

int cmd_export(const Options& o) {
  const auto format = hcct::parse_export_format(o.format);
  hcct::ContextTree tree;
  if (o.tree == "cct") {
    Input in(o.trace);
    hcct::ExactCctBuilder builder;
    hcct::for_each_event(in.stream(), [&](const hcct::TraceEvent& ev) { builder.on_event(ev); });
    tree = hcct::classify_exact(std::move(builder).finish(), o.phi, o.min_one);
  } else {
    double wall = 0;
    hcct::HcctBuilder b = mine_stream(o, &wall);
    tree = o.tree == "mcct" ? b.mcct_snapshot() : query(b, o).tree;
  }
  Output out(o.output);
  hcct::write_tree(format, tree, out.stream(), load_symbols(o));
  out.close();
  return kOk;
}

int cmd_stats(const Options& o) {
  Input in(o.trace);
  hcct::ExactCctBuilder builder;
  hcct::for_each_event(in.stream(), [&](const hcct::TraceEvent& ev) { builder.on_event(ev); });
  hcct::ExactCct cct = std::move(builder).finish();
  hcct::SkewnessCurve curve = hcct::skewness(cct);

  std::size_t max_depth = 0;
  std::vector<std::size_t> depth(cct.nodes().size(), 0);
  for (hcct::NodeIndex i = 1; i < cct.nodes().size(); ++i) {
    depth[i] = depth[cct.node(i).parent] + 1;
    max_depth = std::max(max_depth, depth[i]);
  }

  Output out(o.output);
  auto& s = out.stream();
  s << "n_events: " << cct.n_events() << '\n'
    << "cct_nodes: " << cct.node_count() << '\n'
    << "max_depth: " << max_depth << '\n'
    << "hot_contexts: " << hcct::exact_hot_set(cct, o.phi, o.min_one).size() << '\n'
    << "hcct_nodes: " << hcct::exact_hcct(cct, o.phi, o.min_one).node_count() << '\n'
    << "# top_fraction_of_contexts share_of_calls\n";
  for (auto [x, y] : curve.points) s << x << ' ' << y << '\n';
  out.close();
  return kOk;
}

void add_trace(CLI::App* sub, Options& o) {
  sub->add_option("-t,--trace", o.trace, "Trace file ('-' for stdin)");
}

void add_output(CLI::App* sub, Options& o) {
  sub->add_option("-o,--output", o.output, "Output file ('-' for stdout)");
}

void add_thresholds(CLI::App* sub, Options& o, bool with_eps) {
  sub->add_option("--phi", o.phi, "Hotness threshold phi")->capture_default_str();
  if (with_eps) {
    sub->add_option("--eps", o.eps, "Counter accuracy epsilon")->capture_default_str();
    sub->add_option("--pool-capacity", o.pool_capacity,
                    "Override the number of counters (default ceil(1/eps))");
    sub->add_flag("--final", o.final_prune, "Prune the MCCT in place at end of stream");
  }
}

void add_format(CLI::App* sub, Options& o) {
  sub->add_option("--format", o.format, "dot, folded, json-lines or report")
      ->check(CLI::IsMember({"dot", "folded", "json-lines", "report"}))
      ->capture_default_str();
  sub->add_option("--symbols", o.symbols, "File of '<routine_id> <name>' lines");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Streaming hot calling context tree profiler"};
  app.require_subcommand(1);
  Options o;
  app.add_flag("--min-threshold-one,!--no-min-threshold-one", o.min_one,
               "Treat a hot threshold of 0 as 1 (default on)");

  auto* gen = app.add_subcommand("gen", "Generate a Zipf workload trace");
  gen->add_option("--routines", o.spec.distinct_routines, "Distinct routines")->capture_default_str();
  gen->add_option("--depth", o.spec.max_depth, "Maximum call depth")->capture_default_str();
  gen->add_option("--calls", o.spec.total_calls, "Number of call events")->capture_default_str();
  gen->add_option("--skew", o.spec.skew, "Zipf exponent")->capture_default_str();
  gen->add_option("--seed", o.spec.seed, "Random seed")->capture_default_str();
  gen->add_option("--contexts", o.spec.contexts, "Size of the context pool")->capture_default_str();
  gen->add_option("--call-sites", o.spec.call_sites, "Call sites per caller/callee pair")
      ->capture_default_str();
  gen->add_option("--example", o.example,
                  "Emit the main/p/q example with this many calls instead");
  gen->add_option("--symbols-out", o.symbols_out, "Write the example's symbol file here");
  add_output(gen, o);

  auto* exact = app.add_subcommand("exact", "Build the exact calling context tree");
  add_trace(exact, o);
  add_thresholds(exact, o, false);
  exact->add_flag("--full", o.exact_full, "Export the whole CCT, not only the exact HCCT");
  add_format(exact, o);
  add_output(exact, o);

  auto* mine = app.add_subcommand("mine", "Stream a trace and report the hot contexts");
  add_trace(mine, o);
  add_thresholds(mine, o, true);
  add_format(mine, o);
  add_output(mine, o);

  auto* cmp = app.add_subcommand("compare", "Check a streaming run against the exact tree");
  add_trace(cmp, o);
  add_thresholds(cmp, o, true);
  o.format = "report";
  cmp->add_option("--format", o.format, "report or json")->check(CLI::IsMember({"report", "json"}));
  cmp->add_option("--json", o.json_out, "Also write the JSON report to this file");
  add_output(cmp, o);

  auto* exp = app.add_subcommand("export", "Export a tree in an interchange format");
  add_trace(exp, o);
  add_thresholds(exp, o, true);
  exp->add_option("--tree", o.tree, "cct, hcct or mcct")
      ->check(CLI::IsMember({"cct", "hcct", "mcct"}))
      ->capture_default_str();
  add_format(exp, o);
  add_output(exp, o);

  auto* stats = app.add_subcommand("stats", "Context statistics and skewness curve");
  add_trace(stats, o);
  add_thresholds(stats, o, false);
  add_output(stats, o);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      try {
        if (o.example == 0) o.spec.validate();
      } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n' << gen->help();
        return kFailure;
      }
      return cmd_gen(o);
    }
    if (*exact) return cmd_exact(o);
    if (*mine) return cmd_mine(o);
    if (*cmp) return cmd_compare(o);
    if (*exp) return cmd_export(o);
    if (*stats) return cmd_stats(o);
  } catch (const hcct::InvalidThreshold& e) {
    std::cerr << "invalid threshold: " << e.what() << '\n';
  } catch (const hcct::MalformedRecord& e) {
    std::cerr << "malformed trace: " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return kFailure;
}
