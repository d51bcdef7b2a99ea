// include/pvd/bench.h

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

#ifndef PVD_BENCH_H_
#define PVD_BENCH_H_

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "pvd/decoder.h"
#include "pvd/synth.h"

// Wall-clock comparison of the serial reference decoder against the parallel
// decoder under both schedulers, on synthetic emitting-only graphs.

namespace pvd {

struct BenchOptions {
  std::uint32_t num_arcs = 100000;
  StateId num_states = 5000;
  std::uint32_t num_frames = 500;
  Label num_labels = 64;
  double beam = 4.0;
  double lattice_beam = 2.0;
  std::vector<unsigned> workers = {1, 2, 4, 8};
  std::vector<GraphShape> shapes = {GraphShape::kUniform, GraphShape::kSkewed};
  bool include_serial = true;
  std::uint64_t seed = 1;
};

struct BenchRow {
  std::string config;     // graph shape
  unsigned workers = 1;
  std::string scheduler;  // "serial", "static" or "dynamic"
  double wall_ms = 0.0;
  double speedup = 0.0;   // serial wall time / this wall time
  double token_passing_ms = 0.0;
  double partition_ms = 0.0;  // static prefix sums, part of token passing
  double lattice_prune_ms = 0.0;
  double other_ms = 0.0;
  double best_cost = 0.0;
};

std::string ToString(GraphShape shape);
GraphShape ParseGraphShape(const std::string &name);

// Runs every configuration once per shape. Speedups are relative to the
// serial row of the same shape, or to the first row when the serial
// reference is excluded.
std::vector<BenchRow> RunBench(const BenchOptions &options);

// "config,workers,scheduler,wall_ms,speedup" plus one line per row.
void WriteBenchCsv(const std::vector<BenchRow> &rows, std::ostream &out);
// Aligned table including the time breakdown.
void WriteBenchTable(const std::vector<BenchRow> &rows, std::ostream &out);

}  // namespace pvd

#endif  // PVD_BENCH_H_
