// include/pvd/synth.h

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

#ifndef PVD_SYNTH_H_
#define PVD_SYNTH_H_

#include <cstdint>

#include "pvd/acoustics.h"
#include "pvd/wfst.h"

// Seeded generators for test instances and benchmark workloads.

namespace pvd {

struct RandomInstanceOptions {
  StateId max_states = 50;
  std::uint32_t max_arcs = 200;
  std::uint32_t max_frames = 20;
  std::uint32_t max_labels = 8;
  Label max_olabel = 10;
  double epsilon_fraction = 0.2;  // share of the optional arcs that are epsilon
};

struct RandomInstance {
  Wfst fst;
  CostMatrix costs;
};

// Every state gets at least one emitting arc; the remaining arcs are random,
// including epsilon arcs that may form cycles (some of weight 0). One to
// three final states. Weights and acoustic costs are continuous.
RandomInstance GenerateInstance(std::uint64_t seed,
                                const RandomInstanceOptions &options = {});

enum class GraphShape { kUniform, kSkewed };

// Emitting-only graph with about `num_arcs` arcs spread evenly over the
// states, or, for kSkewed, with 30% of them leaving one hub state that every
// other state can reach cheaply. All states are final.
Wfst SyntheticGraph(StateId num_states, std::uint32_t num_arcs, Label num_labels,
                    GraphShape shape, std::uint64_t seed);

CostMatrix SyntheticCosts(std::uint32_t num_frames, Label num_labels,
                          std::uint64_t seed);

}  // namespace pvd

#endif  // PVD_SYNTH_H_
