// include/pvd/lattice.h

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

#ifndef PVD_LATTICE_H_
#define PVD_LATTICE_H_

#include <atomic>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "pvd/thread_pool.h"
#include "pvd/wfst.h"

namespace pvd {

inline constexpr double kInfCost = std::numeric_limits<double>::infinity();

// A lattice node is a surviving token, addressed by the frame it lives in and
// its position in that frame's token list. Positions never change once a
// frame is recorded.
struct LatticeNodeId {
  std::uint32_t frame = 0;
  std::uint32_t idx = 0;
  auto operator<=>(const LatticeNodeId &) const = default;
};

struct LatticeNode {
  StateId state = 0;
  double cost = 0.0;  // best forward cost (the token's cost)
  double extra_cost = kInfCost;
};

struct LatticeArc {
  LatticeNodeId from;
  LatticeNodeId to;
  Label ilabel = kEpsilon;
  Label olabel = kEpsilon;
  float graph_cost = 0.0f;
  float acoustic_cost = 0.0f;
  ArcId arc_id = kNoArc;  // graph arc this pass came through
  double extra_cost = kInfCost;
  bool pruned = false;

  double cost() const {
    return static_cast<double>(graph_cost) + static_cast<double>(acoustic_cost);
  }
};

// Raw lattice produced during decoding. Node frames run 0..num_frames()
// (frame f holds tokens that have consumed f acoustic frames). Arcs are
// grouped by the frame of their destination node: emitting arcs into frame f
// come from frame f-1, epsilon arcs stay inside frame f. Storage for every
// frame is allocated up front, so recording frame f+1 never touches the data
// of frames <= f; pruning of earlier frames may run concurrently with it.
class Lattice {
 public:
  Lattice() = default;
  explicit Lattice(std::uint32_t num_frames);

  std::uint32_t num_frames() const { return num_frames_; }
  std::uint32_t frames_recorded() const {
    return frames_recorded_.value.load(std::memory_order_acquire);
  }

  // Records frame f; frames must be recorded in order starting at 0.
  void AddFrame(std::uint32_t f, std::vector<LatticeNode> nodes,
                std::vector<LatticeArc> emitting, std::vector<LatticeArc> epsilon);

  std::vector<LatticeNode> &nodes(std::uint32_t f) { return nodes_[f]; }
  const std::vector<LatticeNode> &nodes(std::uint32_t f) const { return nodes_[f]; }
  const LatticeNode &node(LatticeNodeId id) const { return nodes_[id.frame][id.idx]; }
  LatticeNode &node(LatticeNodeId id) { return nodes_[id.frame][id.idx]; }

  // Emitting arcs entering frame f (empty for f == 0).
  std::vector<LatticeArc> &emitting_arcs(std::uint32_t f) { return emitting_[f]; }
  const std::vector<LatticeArc> &emitting_arcs(std::uint32_t f) const { return emitting_[f]; }
  // Epsilon arcs inside frame f.
  std::vector<LatticeArc> &epsilon_arcs(std::uint32_t f) { return epsilon_[f]; }
  const std::vector<LatticeArc> &epsilon_arcs(std::uint32_t f) const { return epsilon_[f]; }

  std::uint32_t start_node() const { return start_node_; }
  void set_start_node(std::uint32_t idx) { start_node_ = idx; }

  // Final costs for the nodes of the last frame (+inf for non-final nodes).
  const std::vector<float> &final_costs() const { return final_costs_; }
  void set_final_costs(std::vector<float> costs);

  std::size_t NumNodes() const;
  std::size_t NumArcs() const;
  std::size_t NumSurvivingArcs() const;

  // Visits every arc whose source node lies in frames [0, upto], in a fixed
  // order: for each frame f, epsilon arcs of f then emitting arcs out of f.
  template <typename Fn>
  void ForEachArc(std::uint32_t upto, Fn &&fn) {
    for (std::uint32_t f = 0; f <= upto; ++f) {
      for (auto &a : epsilon_[f]) fn(a);
      if (f + 1 <= upto)
        for (auto &a : emitting_[f + 1]) fn(a);
    }
  }
  template <typename Fn>
  void ForEachArc(std::uint32_t upto, Fn &&fn) const {
    for (std::uint32_t f = 0; f <= upto; ++f) {
      for (const auto &a : epsilon_[f]) fn(a);
      if (f + 1 <= upto)
        for (const auto &a : emitting_[f + 1]) fn(a);
    }
  }

 private:
  // Copyable atomic: a pruning thread may read it while the next frame is
  // being recorded.
  struct FrameCounter {
    std::atomic<std::uint32_t> value{0};
    FrameCounter() = default;
    FrameCounter(const FrameCounter &o) : value(o.value.load()) {}
    FrameCounter &operator=(const FrameCounter &o) {
      value.store(o.value.load());
      return *this;
    }
  };

  std::uint32_t num_frames_ = 0;
  FrameCounter frames_recorded_;
  std::uint32_t start_node_ = 0;
  std::vector<std::vector<LatticeNode>> nodes_;
  std::vector<std::vector<LatticeArc>> emitting_;
  std::vector<std::vector<LatticeArc>> epsilon_;
  std::vector<float> final_costs_;
};

// Terminal costs for the nodes of `frame` when it is the live frontier of a
// decode in progress: best frontier cost minus the node's cost, which gives
// every frontier node zero extra cost (any of them may still lead to the best
// path).
std::vector<double> FrontierTerminalCosts(const Lattice &lat, std::uint32_t frame);
// Terminal costs from the final costs of the last frame.
std::vector<double> FinalTerminalCosts(const Lattice &lat);

struct PruneStats {
  std::uint32_t sweeps = 0;
  std::size_t arcs_pruned = 0;  // newly pruned by this call
  std::size_t arcs_alive = 0;
};

// Extra-cost pruning of frames [0, frontier]. Node extra costs are
// initialised from `terminal` on the frontier and +inf elsewhere, then
// relaxed backwards frame by frame (parallel over a frame's arcs, atomic min
// into the source node) until nothing changes. Arcs whose extra cost exceeds
// lattice_beam are flagged pruned; nothing is removed. Already-pruned arcs
// are ignored and keep their stored extra cost.
PruneStats PruneLattice(Lattice &lat, std::uint32_t frontier,
                        std::span<const double> terminal, double lattice_beam,
                        ThreadPool &pool);

// Compact lattice: dense node ids in (frame, idx) order over referenced nodes.
struct FinalArc {
  std::uint32_t from = 0;
  std::uint32_t to = 0;
  Label ilabel = kEpsilon;
  Label olabel = kEpsilon;
  float graph_cost = 0.0f;
  float acoustic_cost = 0.0f;
  bool operator==(const FinalArc &) const = default;
};

struct FinalLattice {
  std::uint32_t num_nodes = 0;
  std::uint32_t start = 0;
  std::vector<std::pair<std::uint32_t, float>> finals;  // ascending node id
  std::vector<FinalArc> arcs;                           // by from, then slot
  bool operator==(const FinalLattice &) const = default;
};

// Collects the surviving arcs of a fully pruned lattice. Throws DecodeFailure
// if nothing survives.
FinalLattice FinalizeLattice(const Lattice &lat);

// "NODES n ARCS m START s", then "F node cost" lines, then
// "A from to ilabel olabel graph_cost acoustic_cost" lines.
void WriteLatticeText(const FinalLattice &lat, std::ostream &out);
FinalLattice ReadLatticeText(std::istream &in);
FinalLattice ReadLatticeFile(const std::string &path);

// Node ids of `lat` in a topological order. Throws UsageError on a cycle.
std::vector<std::uint32_t> TopologicalOrder(const FinalLattice &lat);

}  // namespace pvd

#endif  // PVD_LATTICE_H_
