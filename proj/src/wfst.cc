// src/wfst.cc

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

#include "pvd/wfst.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "pvd/error.h"
#include "text_util.h"

namespace pvd {

namespace {

bool ValidCost(float c) { return std::isfinite(c) && c >= 0.0f; }

}  // namespace

Wfst Wfst::Build(StateId num_states, StateId start, std::vector<Arc> arcs,
                 const std::vector<std::pair<StateId, float>> &final_costs) {
  if (num_states == 0) throw ValidationError("graph has no states");
  if (start >= num_states)
    throw ValidationError("start state " + std::to_string(start) +
                          " out of range");
  if (arcs.size() >= static_cast<std::size_t>(kNoArc))
    throw ValidationError("too many arcs");
  for (const Arc &a : arcs) {
    if (a.src >= num_states || a.dst >= num_states)
      throw ValidationError("arc " + std::to_string(a.src) + "->" +
                            std::to_string(a.dst) + " references a missing state");
    if (!ValidCost(a.weight))
      throw ValidationError("arc " + std::to_string(a.src) + "->" +
                            std::to_string(a.dst) +
                            " has a negative or non-finite weight");
  }

  Wfst fst;
  fst.num_states_ = num_states;
  fst.start_ = start;
  fst.final_costs_.assign(num_states, std::numeric_limits<float>::infinity());
  bool any_final = false;
  for (const auto &[s, c] : final_costs) {
    if (s >= num_states)
      throw ValidationError("final state " + std::to_string(s) + " out of range");
    if (!ValidCost(c))
      throw ValidationError("final state " + std::to_string(s) +
                            " has a negative or non-finite cost");
    fst.final_costs_[s] = c;
    any_final = true;
  }
  if (!any_final) throw ValidationError("graph has no final state");

  std::stable_sort(arcs.begin(), arcs.end(),
                   [](const Arc &a, const Arc &b) { return a.src < b.src; });
  fst.arc_offsets_.assign(static_cast<std::size_t>(num_states) + 1, 0);
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    arcs[i].id = static_cast<ArcId>(i);
    ++fst.arc_offsets_[arcs[i].src + 1];
    fst.max_ilabel_ = std::max(fst.max_ilabel_, arcs[i].ilabel);
  }
  for (StateId s = 0; s < num_states; ++s)
    fst.arc_offsets_[s + 1] += fst.arc_offsets_[s];
  fst.arcs_ = std::move(arcs);
  return fst;
}

std::span<const Arc> Wfst::OutArcs(StateId state) const {
  if (state >= num_states_)
    throw UsageError("state " + std::to_string(state) + " out of range");
  return std::span<const Arc>(arcs_).subspan(
      arc_offsets_[state], arc_offsets_[state + 1] - arc_offsets_[state]);
}

std::vector<std::pair<StateId, float>> Wfst::Finals() const {
  std::vector<std::pair<StateId, float>> out;
  for (StateId s = 0; s < num_states_; ++s)
    if (IsFinal(s)) out.emplace_back(s, final_costs_[s]);
  return out;
}

Wfst LoadWfstText(std::istream &in) {
  std::vector<Arc> arcs;
  std::vector<std::pair<StateId, float>> finals;
  std::optional<StateId> start;
  std::uint64_t max_state = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto fields = text::SplitWhitespace(line);
    if (fields.empty()) continue;
    if (fields.size() != 1 && fields.size() != 2 && fields.size() != 4 &&
        fields.size() != 5)
      throw ParseError(lineno, "expected 1, 2, 4 or 5 fields, got " +
                                   std::to_string(fields.size()));
    StateId src = 0;
    if (!text::ParseNumber(fields[0], &src))
      throw ParseError(lineno, "bad state id '" + std::string(fields[0]) + "'");
    if (!start) start = src;
    max_state = std::max<std::uint64_t>(max_state, src);

    if (fields.size() <= 2) {
      float cost = 0.0f;
      if (fields.size() == 2 && !text::ParseNumber(fields[1], &cost))
        throw ParseError(lineno, "bad final cost '" + std::string(fields[1]) + "'");
      if (!ValidCost(cost))
        throw ValidationError("line " + std::to_string(lineno) +
                              ": final cost must be finite and non-negative");
      finals.emplace_back(src, cost);
      continue;
    }

    Arc arc;
    arc.src = src;
    if (!text::ParseNumber(fields[1], &arc.dst))
      throw ParseError(lineno, "bad state id '" + std::string(fields[1]) + "'");
    if (!text::ParseNumber(fields[2], &arc.ilabel))
      throw ParseError(lineno, "bad ilabel '" + std::string(fields[2]) + "'");
    if (!text::ParseNumber(fields[3], &arc.olabel))
      throw ParseError(lineno, "bad olabel '" + std::string(fields[3]) + "'");
    if (fields.size() == 5 && !text::ParseNumber(fields[4], &arc.weight))
      throw ParseError(lineno, "bad weight '" + std::string(fields[4]) + "'");
    if (!ValidCost(arc.weight))
      throw ValidationError("line " + std::to_string(lineno) +
                            ": weight must be finite and non-negative");
    max_state = std::max<std::uint64_t>(max_state, arc.dst);
    arcs.push_back(arc);
  }
  if (!start) throw ValidationError("empty graph");
  if (max_state >= std::numeric_limits<StateId>::max())
    throw ValidationError("state id too large");
  return Wfst::Build(static_cast<StateId>(max_state + 1), *start,
                     std::move(arcs), finals);
}

Wfst LoadWfstFile(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  return LoadWfstText(in);
}

void WriteWfstText(const Wfst &fst, std::ostream &out) {
  auto write_arc = [&out](const Arc &a) {
    out << a.src << ' ' << a.dst << ' ' << a.ilabel << ' ' << a.olabel << ' '
        << text::FormatFloat(a.weight) << '\n';
  };
  const StateId start = fst.start();
  const auto start_arcs = fst.OutArcs(start);
  if (start_arcs.empty()) {
    // Only a final line can name the start state then.
    if (!fst.IsFinal(start))
      throw UsageError("start state has no arcs and is not final; "
                       "the text format cannot express it");
    out << start << ' ' << text::FormatFloat(fst.FinalCost(start)) << '\n';
  }
  for (const Arc &a : start_arcs) write_arc(a);
  for (const Arc &a : fst.arcs())
    if (a.src != start) write_arc(a);
  for (const auto &[s, c] : fst.Finals()) {
    if (start_arcs.empty() && s == start) continue;
    out << s << ' ' << text::FormatFloat(c) << '\n';
  }
}

SymbolTable SymbolTable::Load(std::istream &in) {
  SymbolTable table;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto fields = text::SplitWhitespace(line);
    if (fields.empty()) continue;
    Label id = 0;
    if (fields.size() != 2 || !text::ParseNumber(fields[1], &id))
      throw ParseError(lineno, "expected 'word<TAB>id'");
    table.Add(std::string(fields[0]), id);
  }
  return table;
}

SymbolTable SymbolTable::LoadFile(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  return Load(in);
}

void SymbolTable::Add(const std::string &word, Label id) {
  to_word_[id] = word;
  to_id_[word] = id;
}

std::optional<std::string> SymbolTable::Find(Label id) const {
  auto it = to_word_.find(id);
  if (it == to_word_.end()) return std::nullopt;
  return it->second;
}

std::optional<Label> SymbolTable::Find(const std::string &word) const {
  auto it = to_id_.find(word);
  if (it == to_id_.end()) return std::nullopt;
  return it->second;
}

}  // namespace pvd
