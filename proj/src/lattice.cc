// src/lattice.cc

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

#include "pvd/lattice.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "pvd/error.h"
#include "text_util.h"

namespace pvd {

namespace {

// Below this many items a parallel loop runs on the calling thread.
constexpr std::size_t kInlineThreshold = 2048;

template <typename Fn>
void ParallelFor(ThreadPool &pool, std::size_t n, Fn &&fn) {
  if (n == 0) return;
  if (pool.size() == 1 || n < kInlineThreshold) {
    for (std::size_t i = 0; i < n; ++i) fn(0u, i);
    return;
  }
  const std::size_t workers = pool.size();
  pool.Run([&](unsigned w) {
    const std::size_t b = n * w / workers;
    const std::size_t e = n * (w + 1) / workers;
    for (std::size_t i = b; i < e; ++i) fn(w, i);
  });
}

// Lowers `target` to `value` if smaller; returns whether it did.
bool AtomicMinDouble(double &target, double value) {
  std::atomic_ref<double> ref(target);
  double old = ref.load(std::memory_order_relaxed);
  while (value < old) {
    if (ref.compare_exchange_weak(old, value, std::memory_order_relaxed))
      return true;
  }
  return false;
}

// Extra cost of `arc` given the current extra cost of its destination.
double ArcExtraCost(Lattice &lat, const LatticeArc &arc) {
  const double e_to = std::atomic_ref<double>(lat.node(arc.to).extra_cost)
                          .load(std::memory_order_relaxed);
  if (e_to == kInfCost) return kInfCost;
  // Rounding can leave a winning arc a hair below zero.
  return std::max(0.0, e_to + (lat.node(arc.from).cost + arc.cost() -
                               lat.node(arc.to).cost));
}

}  // namespace

Lattice::Lattice(std::uint32_t num_frames)
    : num_frames_(num_frames),
      nodes_(num_frames + 1),
      emitting_(num_frames + 1),
      epsilon_(num_frames + 1) {}

void Lattice::AddFrame(std::uint32_t f, std::vector<LatticeNode> nodes,
                       std::vector<LatticeArc> emitting,
                       std::vector<LatticeArc> epsilon) {
  if (f != frames_recorded() || f > num_frames_)
    throw UsageError("lattice frames must be recorded in order");
  if (f == 0 && !emitting.empty())
    throw UsageError("frame 0 cannot have incoming emitting arcs");
  nodes_[f] = std::move(nodes);
  emitting_[f] = std::move(emitting);
  epsilon_[f] = std::move(epsilon);
  frames_recorded_.value.store(f + 1, std::memory_order_release);
}

void Lattice::set_final_costs(std::vector<float> costs) {
  if (frames_recorded() != num_frames_ + 1 ||
      costs.size() != nodes_[num_frames_].size())
    throw UsageError("final costs must cover the last frame's nodes");
  final_costs_ = std::move(costs);
}

std::size_t Lattice::NumNodes() const {
  std::size_t n = 0;
  for (const auto &v : nodes_) n += v.size();
  return n;
}

std::size_t Lattice::NumArcs() const {
  std::size_t n = 0;
  for (std::uint32_t f = 0; f < frames_recorded(); ++f)
    n += emitting_[f].size() + epsilon_[f].size();
  return n;
}

std::size_t Lattice::NumSurvivingArcs() const {
  std::size_t n = 0;
  for (std::uint32_t f = 0; f < frames_recorded(); ++f) {
    for (const auto &a : emitting_[f]) n += !a.pruned;
    for (const auto &a : epsilon_[f]) n += !a.pruned;
  }
  return n;
}

std::vector<double> FrontierTerminalCosts(const Lattice &lat, std::uint32_t frame) {
  const auto &nodes = lat.nodes(frame);
  double best = kInfCost;
  for (const auto &n : nodes) best = std::min(best, n.cost);
  std::vector<double> terminal(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) terminal[i] = best - nodes[i].cost;
  return terminal;
}

std::vector<double> FinalTerminalCosts(const Lattice &lat) {
  const auto &finals = lat.final_costs();
  return std::vector<double>(finals.begin(), finals.end());
}

PruneStats PruneLattice(Lattice &lat, std::uint32_t frontier,
                        std::span<const double> terminal, double lattice_beam,
                        ThreadPool &pool) {
  if (frontier >= lat.frames_recorded())
    throw UsageError("prune frontier " + std::to_string(frontier) +
                     " has not been recorded");
  auto &front = lat.nodes(frontier);
  if (terminal.size() != front.size())
    throw UsageError("terminal cost count does not match the frontier");
  if (front.empty()) throw DecodeFailure("empty frontier; nothing to prune against");

  double best_total = kInfCost;
  for (std::size_t i = 0; i < front.size(); ++i)
    best_total = std::min(best_total, front[i].cost + terminal[i]);
  if (best_total == kInfCost)
    throw DecodeFailure("no frontier node can terminate a path");

  auto seed = [&](std::size_t i) {
    return terminal[i] == kInfCost
               ? kInfCost
               : std::max(0.0, front[i].cost + terminal[i] - best_total);
  };
  for (std::uint32_t f = 0; f < frontier; ++f)
    for (auto &n : lat.nodes(f)) n.extra_cost = kInfCost;
  for (std::size_t i = 0; i < front.size(); ++i) front[i].extra_cost = seed(i);

  // Relax one frame's outgoing arcs; true if any source node got cheaper.
  auto relax = [&](std::uint32_t f, bool include_emitting) {
    std::span<const LatticeArc> eps = lat.epsilon_arcs(f);
    std::span<const LatticeArc> emit;
    if (include_emitting && f + 1 <= frontier) emit = lat.emitting_arcs(f + 1);
    std::atomic<bool> changed{false};
    ParallelFor(pool, eps.size() + emit.size(), [&](unsigned, std::size_t i) {
      const LatticeArc &a = i < eps.size() ? eps[i] : emit[i - eps.size()];
      if (a.pruned) return;
      const double e = ArcExtraCost(lat, a);
      if (e == kInfCost) return;
      if (AtomicMinDouble(lat.node(a.from).extra_cost, e))
        changed.store(true, std::memory_order_relaxed);
    });
    return changed.load();
  };

  PruneStats stats;
  const std::uint32_t max_sweeps = frontier + 2;
  for (;;) {
    if (stats.sweeps == max_sweeps)
      throw InvariantViolation("lattice pruning did not converge in " +
                               std::to_string(max_sweeps) + " sweeps");
    ++stats.sweeps;
    bool any_change = false;
    for (std::uint32_t f = frontier + 1; f-- > 0;) {
      bool changed = relax(f, true);
      any_change |= changed;
      // Epsilon chains inside a frame need repeated passes.
      const std::size_t max_inner = lat.epsilon_arcs(f).size() + 1;
      std::size_t inner = 0;
      while (changed && !lat.epsilon_arcs(f).empty()) {
        if (++inner > max_inner)
          throw InvariantViolation("epsilon relaxation in frame " +
                                   std::to_string(f) + " did not converge");
        changed = relax(f, false);
      }
    }
    if (!any_change) break;
  }

  // Arc extra costs and pruning decisions.
  std::vector<LatticeArc *> live;
  lat.ForEachArc(frontier, [&](LatticeArc &a) {
    if (!a.pruned) live.push_back(&a);
  });
  std::atomic<std::size_t> newly_pruned{0};
  ParallelFor(pool, live.size(), [&](unsigned, std::size_t i) {
    LatticeArc &a = *live[i];
    a.extra_cost = ArcExtraCost(lat, a);
    if (a.extra_cost > lattice_beam) {
      a.pruned = true;
      newly_pruned.fetch_add(1, std::memory_order_relaxed);
    }
  });

  // Node extra costs over the surviving arcs only, so that a second pass
  // with the same beam reproduces them exactly.
  for (std::uint32_t f = 0; f < frontier; ++f)
    for (auto &n : lat.nodes(f)) n.extra_cost = kInfCost;
  for (std::size_t i = 0; i < front.size(); ++i) front[i].extra_cost = seed(i);
  for (const LatticeArc *a : live)
    if (!a->pruned) {
      double &e = lat.node(a->from).extra_cost;
      e = std::min(e, a->extra_cost);
    }

  stats.arcs_pruned = newly_pruned.load();
  stats.arcs_alive = live.size() - stats.arcs_pruned;
  return stats;
}

FinalLattice FinalizeLattice(const Lattice &lat) {
  const std::uint32_t last = lat.num_frames();
  if (lat.frames_recorded() != last + 1)
    throw UsageError("lattice is incomplete");
  if (lat.final_costs().size() != lat.nodes(last).size())
    throw UsageError("lattice final costs are not set");

  std::vector<std::vector<std::uint32_t>> new_id(last + 1);
  for (std::uint32_t f = 0; f <= last; ++f)
    new_id[f].assign(lat.nodes(f).size(), 0);
  // Mark with 1, then turn marks into dense ids.
  if (lat.nodes(0).empty()) throw DecodeFailure("lattice has no start node");
  new_id[0][lat.start_node()] = 1;
  std::size_t surviving = 0;
  lat.ForEachArc(last, [&](const LatticeArc &a) {
    if (a.pruned) return;
    ++surviving;
    new_id[a.from.frame][a.from.idx] = 1;
    new_id[a.to.frame][a.to.idx] = 1;
  });
  if (surviving == 0) throw DecodeFailure("no lattice arcs survived pruning");

  FinalLattice out;
  std::uint32_t next = 0;
  for (std::uint32_t f = 0; f <= last; ++f)
    for (auto &id : new_id[f]) id = id ? next++ : kNoArc;
  out.num_nodes = next;
  out.start = new_id[0][lat.start_node()];

  const auto &finals = lat.final_costs();
  for (std::uint32_t i = 0; i < finals.size(); ++i)
    if (new_id[last][i] != kNoArc && finals[i] != std::numeric_limits<float>::infinity())
      out.finals.emplace_back(new_id[last][i], finals[i]);
  if (out.finals.empty()) throw DecodeFailure("no final node survived pruning");

  lat.ForEachArc(last, [&](const LatticeArc &a) {
    if (a.pruned) return;
    out.arcs.push_back(FinalArc{new_id[a.from.frame][a.from.idx],
                                new_id[a.to.frame][a.to.idx], a.ilabel, a.olabel,
                                a.graph_cost, a.acoustic_cost});
  });
  std::stable_sort(out.arcs.begin(), out.arcs.end(),
                   [](const FinalArc &a, const FinalArc &b) { return a.from < b.from; });
  return out;
}

void WriteLatticeText(const FinalLattice &lat, std::ostream &out) {
  out << "NODES " << lat.num_nodes << " ARCS " << lat.arcs.size() << " START "
      << lat.start << '\n';
  for (const auto &[node, cost] : lat.finals)
    out << "F " << node << ' ' << text::FormatFloat(cost) << '\n';
  for (const auto &a : lat.arcs)
    out << "A " << a.from << ' ' << a.to << ' ' << a.ilabel << ' ' << a.olabel
        << ' ' << text::FormatFloat(a.graph_cost) << ' '
        << text::FormatFloat(a.acoustic_cost) << '\n';
}

FinalLattice ReadLatticeText(std::istream &in) {
  FinalLattice lat;
  std::string line;
  std::size_t lineno = 0;
  std::size_t num_arcs = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    auto f = text::SplitWhitespace(line);
    if (f.empty()) continue;
    if (!have_header) {
      if (f.size() != 6 || f[0] != "NODES" || f[2] != "ARCS" || f[4] != "START" ||
          !text::ParseNumber(f[1], &lat.num_nodes) ||
          !text::ParseNumber(f[3], &num_arcs) || !text::ParseNumber(f[5], &lat.start))
        throw ParseError(lineno, "expected 'NODES n ARCS m START s'");
      if (lat.start >= lat.num_nodes) throw ParseError(lineno, "start out of range");
      have_header = true;
      continue;
    }
    if (f[0] == "F") {
      std::uint32_t node = 0;
      float cost = 0.0f;
      if (f.size() != 3 || !text::ParseNumber(f[1], &node) ||
          !text::ParseNumber(f[2], &cost))
        throw ParseError(lineno, "expected 'F node cost'");
      if (node >= lat.num_nodes) throw ParseError(lineno, "final node out of range");
      lat.finals.emplace_back(node, cost);
    } else if (f[0] == "A") {
      FinalArc a;
      if (f.size() != 7 || !text::ParseNumber(f[1], &a.from) ||
          !text::ParseNumber(f[2], &a.to) || !text::ParseNumber(f[3], &a.ilabel) ||
          !text::ParseNumber(f[4], &a.olabel) ||
          !text::ParseNumber(f[5], &a.graph_cost) ||
          !text::ParseNumber(f[6], &a.acoustic_cost))
        throw ParseError(lineno, "expected 'A from to ilabel olabel graph acoustic'");
      if (a.from >= lat.num_nodes || a.to >= lat.num_nodes)
        throw ParseError(lineno, "arc endpoint out of range");
      lat.arcs.push_back(a);
    } else {
      throw ParseError(lineno, "unknown record '" + std::string(f[0]) + "'");
    }
  }
  if (!have_header) throw ParseError(lineno, "missing header");
  if (lat.arcs.size() != num_arcs)
    throw ParseError(lineno, "header declares " + std::to_string(num_arcs) +
                                 " arcs, found " + std::to_string(lat.arcs.size()));
  return lat;
}

FinalLattice ReadLatticeFile(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  return ReadLatticeText(in);
}

std::vector<std::uint32_t> TopologicalOrder(const FinalLattice &lat) {
  std::vector<std::uint32_t> indegree(lat.num_nodes, 0);
  std::vector<std::vector<std::uint32_t>> succ(lat.num_nodes);
  for (const auto &a : lat.arcs) {
    ++indegree[a.to];
    succ[a.from].push_back(a.to);
  }
  std::vector<std::uint32_t> order;
  order.reserve(lat.num_nodes);
  for (std::uint32_t n = 0; n < lat.num_nodes; ++n)
    if (indegree[n] == 0) order.push_back(n);
  for (std::size_t head = 0; head < order.size(); ++head)
    for (std::uint32_t s : succ[order[head]])
      if (--indegree[s] == 0) order.push_back(s);
  if (order.size() != lat.num_nodes) throw UsageError("lattice has a cycle");
  return order;
}

}  // namespace pvd
