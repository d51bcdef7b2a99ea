// src/bench.cc

// Copyright 2026  The pvd Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "pvd/bench.h"

#include <algorithm>
#include <chrono>
#include <cstdio>

#include "pvd/error.h"
#include "pvd/reference.h"

namespace pvd {

std::string ToString(GraphShape shape) {
  return shape == GraphShape::kSkewed ? "skewed" : "uniform";
}

GraphShape ParseGraphShape(const std::string &name) {
  if (name == "uniform") return GraphShape::kUniform;
  if (name == "skewed") return GraphShape::kSkewed;
  throw UsageError("unknown graph shape '" + name + "' (expected uniform or skewed)");
}

namespace {

double Ms(std::int64_t ns) { return static_cast<double>(ns) / 1e6; }

}  // namespace

std::vector<BenchRow> RunBench(const BenchOptions &opt) {
  std::vector<BenchRow> rows;
  for (GraphShape shape : opt.shapes) {
    const Wfst fst =
        SyntheticGraph(opt.num_states, opt.num_arcs, opt.num_labels, shape, opt.seed);
    const CostMatrix costs = SyntheticCosts(opt.num_frames, opt.num_labels, opt.seed + 1);
    DecodeConfig config;
    config.beam = opt.beam;
    config.lattice_beam = opt.lattice_beam;
    const std::size_t first = rows.size();

    if (opt.include_serial) {
      const auto start = std::chrono::steady_clock::now();
      const SerialResult s = SerialDecode(fst, costs, config);
      BenchRow row;
      row.config = ToString(shape);
      row.scheduler = "serial";
      row.wall_ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - start).count();
      row.token_passing_ms = row.wall_ms;
      row.best_cost = s.best_cost;
      rows.push_back(row);
    }
    for (unsigned workers : opt.workers)
      for (SchedulerKind kind : {SchedulerKind::kStatic, SchedulerKind::kDynamic}) {
        config.num_workers = workers;
        config.scheduler = kind;
        const DecodeResult r = DecodeUtterance(fst, costs, config);
        BenchRow row;
        row.config = ToString(shape);
        row.workers = workers;
        row.scheduler = ToString(kind);
        row.wall_ms = Ms(r.stats.total_ns);
        row.token_passing_ms = Ms(r.stats.token_passing_ns);
        row.partition_ms = Ms(r.stats.partition_ns);
        row.lattice_prune_ms = Ms(r.stats.lattice_prune_ns);
        row.other_ms = std::max(0.0, row.wall_ms - row.token_passing_ms - row.lattice_prune_ms);
        row.best_cost = r.best_cost;
        rows.push_back(row);
      }
    for (std::size_t i = first; i < rows.size(); ++i)
      rows[i].speedup = rows[first].wall_ms / rows[i].wall_ms;
  }
  return rows;
}

void WriteBenchCsv(const std::vector<BenchRow> &rows, std::ostream &out) {
  out << "config,workers,scheduler,wall_ms,speedup\n";
  char line[256];
  for (const BenchRow &r : rows) {
    std::snprintf(line, sizeof(line), "%s,%u,%s,%.3f,%.3f\n", r.config.c_str(), r.workers,
                  r.scheduler.c_str(), r.wall_ms, r.speedup);
    out << line;
  }
}

void WriteBenchTable(const std::vector<BenchRow> &rows, std::ostream &out) {
  char line[256];
  std::snprintf(line, sizeof(line), "%-8s %7s %-9s %11s %8s %14s %11s %11s %10s\n", "graph",
                "workers", "scheduler", "wall_ms", "speedup", "token_pass_ms",
                "prefix_ms", "prune_ms", "other_ms");
  out << line;
  for (const BenchRow &r : rows) {
    std::snprintf(line, sizeof(line),
                  "%-8s %7u %-9s %11.2f %8.2f %14.2f %11.2f %11.2f %10.2f\n",
                  r.config.c_str(), r.workers, r.scheduler.c_str(), r.wall_ms, r.speedup,
                  r.token_passing_ms, r.partition_ms, r.lattice_prune_ms, r.other_ms);
    out << line;
  }
}

}  // namespace pvd
