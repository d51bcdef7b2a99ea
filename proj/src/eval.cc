// src/eval.cc

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

#include "pvd/eval.h"

#include <algorithm>
#include <limits>
#include <vector>

#include "pvd/error.h"

namespace pvd {

WerResult Wer(std::span<const Label> hyp, std::span<const Label> ref) {
  if (ref.empty()) throw UsageError("word error rate needs a non-empty reference");
  const std::size_t H = hyp.size(), R = ref.size();
  std::vector<std::vector<std::uint32_t>> d(H + 1, std::vector<std::uint32_t>(R + 1));
  for (std::size_t i = 0; i <= H; ++i) d[i][0] = static_cast<std::uint32_t>(i);
  for (std::size_t j = 0; j <= R; ++j) d[0][j] = static_cast<std::uint32_t>(j);
  for (std::size_t i = 1; i <= H; ++i)
    for (std::size_t j = 1; j <= R; ++j)
      d[i][j] = std::min({d[i - 1][j - 1] + (hyp[i - 1] != ref[j - 1] ? 1u : 0u),
                          d[i - 1][j] + 1, d[i][j - 1] + 1});

  WerResult r;
  std::size_t i = H, j = R;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      const bool sub = hyp[i - 1] != ref[j - 1];
      if (d[i][j] == d[i - 1][j - 1] + (sub ? 1u : 0u)) {
        r.substitutions += sub;
        --i;
        --j;
        continue;
      }
    }
    if (i > 0 && d[i][j] == d[i - 1][j] + 1) {
      ++r.insertions;
      --i;
    } else {
      ++r.deletions;
      --j;
    }
  }
  r.percent = 100.0 * r.errors() / static_cast<double>(R);
  return r;
}

OracleWerResult OracleWer(const FinalLattice &lat, std::span<const Label> ref) {
  if (ref.empty()) throw UsageError("oracle error rate needs a non-empty reference");
  const std::size_t R = ref.size();
  constexpr std::uint32_t kUnreached = std::numeric_limits<std::uint32_t>::max();

  std::vector<std::vector<std::size_t>> out(lat.num_nodes);
  for (std::size_t i = 0; i < lat.arcs.size(); ++i) out[lat.arcs[i].from].push_back(i);

  // cost[v][j]: fewest edits turning ref[0, j) into the labels of some
  // start-to-v path.
  std::vector<std::vector<std::uint32_t>> cost(
      lat.num_nodes, std::vector<std::uint32_t>(R + 1, kUnreached));
  cost[lat.start][0] = 0;
  for (std::uint32_t v : TopologicalOrder(lat)) {
    auto &c = cost[v];
    for (std::size_t j = 1; j <= R; ++j)  // deletions of reference words
      if (c[j - 1] != kUnreached) c[j] = std::min(c[j], c[j - 1] + 1);
    for (std::size_t e : out[v]) {
      const FinalArc &a = lat.arcs[e];
      auto &n = cost[a.to];
      for (std::size_t j = 0; j <= R; ++j) {
        if (c[j] == kUnreached) continue;
        if (a.olabel == kEpsilon) {
          n[j] = std::min(n[j], c[j]);
          continue;
        }
        n[j] = std::min(n[j], c[j] + 1);  // inserted word
        if (j < R) n[j + 1] = std::min(n[j + 1], c[j] + (a.olabel != ref[j] ? 1u : 0u));
      }
    }
  }

  std::uint32_t best = kUnreached;
  for (const auto &[node, weight] : lat.finals) best = std::min(best, cost[node][R]);
  if (best == kUnreached) throw DecodeFailure("lattice has no complete path");
  return OracleWerResult{best, 100.0 * best / static_cast<double>(R)};
}

double LatticeDensity(const FinalLattice &lat, std::uint32_t frames) {
  if (frames == 0) throw UsageError("lattice density needs at least one frame");
  return static_cast<double>(lat.arcs.size()) / frames;
}

std::uint32_t LatticeFrameCount(const FinalLattice &lat) {
  constexpr std::uint32_t kUnreached = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::vector<std::size_t>> out(lat.num_nodes);
  for (std::size_t i = 0; i < lat.arcs.size(); ++i) out[lat.arcs[i].from].push_back(i);
  std::vector<std::uint32_t> emitted(lat.num_nodes, kUnreached);
  emitted[lat.start] = 0;
  for (std::uint32_t v : TopologicalOrder(lat)) {
    if (emitted[v] == kUnreached) continue;
    for (std::size_t e : out[v]) {
      const FinalArc &a = lat.arcs[e];
      if (emitted[a.to] == kUnreached)
        emitted[a.to] = emitted[v] + (a.ilabel != kEpsilon ? 1u : 0u);
    }
  }
  for (const auto &[node, weight] : lat.finals)
    if (emitted[node] != kUnreached) return emitted[node];
  throw DecodeFailure("lattice has no complete path");
}

}  // namespace pvd
