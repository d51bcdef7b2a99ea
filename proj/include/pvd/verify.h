// include/pvd/verify.h

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

#ifndef PVD_VERIFY_H_
#define PVD_VERIFY_H_

#include <cstdint>
#include <string>

#include "pvd/decoder.h"
#include "pvd/synth.h"

// Oracle comparisons on generated instances, shared by the verify command
// and the test suites.

namespace pvd {

struct Tolerances {
  double cost = 1e-4;         // |parallel - serial| best cost
  double word_margin = 1e-3;  // words compared only above this margin
  double extra_cost = 1e-4;   // |parallel - brute force| arc extra cost
  double beam_guard = 1e-3;   // survivor sets compared away from the beam edge
};

struct CheckOutcome {
  bool ok = true;
  bool skipped = false;  // e.g. both sides reported a decode failure
  bool words_compared = false;
  std::string detail;    // first mismatch, empty when ok
};

// Mixes a run seed and an instance index into a generator seed.
std::uint64_t InstanceSeed(std::uint64_t seed, std::uint64_t index);

// Parallel decode against SerialDecode: best cost within tol.cost, partial
// flags equal, and words plus alignment equal when the serial margin exceeds
// tol.word_margin. Both sides failing to decode counts as agreement.
CheckOutcome CheckDecodeEquivalence(const RandomInstance &inst, const DecodeConfig &config,
                                    const Tolerances &tol = {});

// Decodes with an unbounded lattice beam, then prunes the raw lattice with
// `lattice_beam` and compares every arc's extra cost with
// BruteForceExtraCosts, and the survivor set wherever no arc lies within
// tol.beam_guard of the beam. A second prune must change nothing.
CheckOutcome CheckPruning(const RandomInstance &inst, const DecodeConfig &config,
                          double lattice_beam, const Tolerances &tol = {});

}  // namespace pvd

#endif  // PVD_VERIFY_H_
