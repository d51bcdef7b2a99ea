// include/pvd/eval.h

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

#ifndef PVD_EVAL_H_
#define PVD_EVAL_H_

#include <cstdint>
#include <span>

#include "pvd/lattice.h"
#include "pvd/wfst.h"

namespace pvd {

struct WerResult {
  std::uint32_t substitutions = 0;
  std::uint32_t insertions = 0;
  std::uint32_t deletions = 0;
  double percent = 0.0;
  std::uint32_t errors() const { return substitutions + insertions + deletions; }
};

// Unit-cost Levenshtein alignment of hyp against ref. Among equal-cost
// alignments, substitutions are preferred over insertions over deletions.
// Throws UsageError if ref is empty.
WerResult Wer(std::span<const Label> hyp, std::span<const Label> ref);

struct OracleWerResult {
  std::uint32_t errors = 0;
  double percent = 0.0;
};

// Smallest edit distance between ref and the output labels (epsilons
// skipped) of any start-to-final path of the lattice. Throws UsageError for
// an empty ref and DecodeFailure when the lattice has no complete path.
OracleWerResult OracleWer(const FinalLattice &lat, std::span<const Label> ref);

// Arcs per frame; 0 for an empty lattice. Throws UsageError if frames == 0.
double LatticeDensity(const FinalLattice &lat, std::uint32_t frames);

// Number of emitting arcs on a start-to-final path, i.e. the frame count of
// the utterance the lattice came from. Throws DecodeFailure if there is no
// complete path.
std::uint32_t LatticeFrameCount(const FinalLattice &lat);

}  // namespace pvd

#endif  // PVD_EVAL_H_
