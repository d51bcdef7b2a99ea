// include/pvd/wfst.h

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

#ifndef PVD_WFST_H_
#define PVD_WFST_H_

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace pvd {

using StateId = std::uint32_t;
using ArcId = std::uint32_t;
using Label = std::uint32_t;

inline constexpr Label kEpsilon = 0;
// Arc id reserved for "no incoming arc" (the initial token).
inline constexpr ArcId kNoArc = std::numeric_limits<ArcId>::max();

struct Arc {
  StateId src = 0;
  StateId dst = 0;
  Label ilabel = kEpsilon;  // 0 = non-emitting, otherwise cost-matrix column + 1
  Label olabel = kEpsilon;  // 0 = no word
  float weight = 0.0f;      // graph cost, -log scale, >= 0
  ArcId id = 0;             // position in Wfst::arcs()

  bool emitting() const { return ilabel != kEpsilon; }
  bool operator==(const Arc &) const = default;
};

// Immutable decoding graph. Arcs are sorted by source state so each state's
// out-arcs occupy one contiguous range of the global arc array, and an arc id
// is its index in that array.
class Wfst {
 public:
  // Builds and validates a graph. `arcs` may arrive in any order; they are
  // stably sorted by src and given dense ids. `final_costs` lists
  // (state, cost) pairs; later duplicates overwrite earlier ones.
  static Wfst Build(StateId num_states, StateId start, std::vector<Arc> arcs,
                    const std::vector<std::pair<StateId, float>> &final_costs);

  StateId num_states() const { return num_states_; }
  StateId start() const { return start_; }
  std::size_t num_arcs() const { return arcs_.size(); }
  std::span<const Arc> arcs() const { return arcs_; }
  const Arc &arc(ArcId id) const { return arcs_[id]; }
  std::span<const std::uint32_t> arc_offsets() const { return arc_offsets_; }

  // Out-arcs of `state` in stored order. Throws UsageError when out of range.
  std::span<const Arc> OutArcs(StateId state) const;
  std::uint32_t OutDegree(StateId state) const {
    return arc_offsets_[state + 1] - arc_offsets_[state];
  }

  bool IsFinal(StateId s) const {
    return final_costs_[s] != std::numeric_limits<float>::infinity();
  }
  // +infinity for non-final states.
  float FinalCost(StateId s) const { return final_costs_[s]; }
  // Final states in ascending id order.
  std::vector<std::pair<StateId, float>> Finals() const;

  // Largest input label used by any arc (0 if all arcs are epsilon).
  Label MaxInputLabel() const { return max_ilabel_; }

 private:
  Wfst() = default;

  StateId num_states_ = 0;
  StateId start_ = 0;
  Label max_ilabel_ = 0;
  std::vector<std::uint32_t> arc_offsets_;
  std::vector<Arc> arcs_;
  std::vector<float> final_costs_;
};

// Reads the OpenFST-style text format: "src dst ilabel olabel [weight]" arc
// lines, "state [final_cost]" final lines, blank lines ignored. The src of the
// first line is the start state.
Wfst LoadWfstText(std::istream &in);
Wfst LoadWfstFile(const std::string &path);

// Writes the start state's arcs first so that re-reading recovers the same
// start state; other arcs follow in id order, then final lines by state.
void WriteWfstText(const Wfst &fst, std::ostream &out);

// "word<TAB>id" symbol table used for printing and reading word sequences.
class SymbolTable {
 public:
  static SymbolTable Load(std::istream &in);
  static SymbolTable LoadFile(const std::string &path);

  void Add(const std::string &word, Label id);
  std::optional<std::string> Find(Label id) const;
  std::optional<Label> Find(const std::string &word) const;
  std::size_t size() const { return to_word_.size(); }

 private:
  std::unordered_map<Label, std::string> to_word_;
  std::unordered_map<std::string, Label> to_id_;
};

}  // namespace pvd

#endif  // PVD_WFST_H_
