// include/pvd/reference.h

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

#ifndef PVD_REFERENCE_H_
#define PVD_REFERENCE_H_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "pvd/acoustics.h"
#include "pvd/decoder.h"
#include "pvd/lattice.h"
#include "pvd/wfst.h"

// Slow, single-threaded oracles. Nothing here shares expansion or pruning
// code with the parallel decoder; only the data types are common.

namespace pvd {

struct SerialResult {
  std::vector<Label> words;
  std::vector<std::pair<Label, std::uint32_t>> alignment;
  double best_cost = 0.0;
  bool partial = false;
  // How clearly the best path wins: the smaller of the gap between the two
  // best final totals and, for every state on the best path, the gap between
  // its winning and runner-up incoming candidates. Word sequences of two
  // correct decoders may legitimately differ only when this is tiny.
  double margin = kInfCost;
  std::uint64_t tokens = 0;
};

// Textbook token passing with an ordered map per frame: full candidate
// generation, sequential min, beam filter against the frame minimum,
// Dijkstra for the epsilon closure. Uses beam, acoustic_scale and nothing
// else from the config; beam may be 0 here.
SerialResult SerialDecode(const Wfst &fst, const CostMatrix &costs,
                          const DecodeConfig &config);

// Exact extra costs of the non-pruned arcs of frames [0, frontier] by
// forward/backward dynamic programming over a topological order:
// extra(a) = fwd(from) + cost(a) + bwd(to) - best_total, with bwd seeded by
// `terminal` on the frontier nodes. Values come in Lattice::ForEachArc order;
// pruned arcs get +inf. Throws UsageError if the arcs form a cycle.
std::vector<double> BruteForceExtraCosts(const Lattice &lat, std::uint32_t frontier,
                                         std::span<const double> terminal);

}  // namespace pvd

#endif  // PVD_REFERENCE_H_
