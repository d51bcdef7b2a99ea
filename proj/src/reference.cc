// src/reference.cc

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

#include "pvd/reference.h"

#include <algorithm>
#include <functional>
#include <map>
#include <queue>
#include <string>

#include "pvd/error.h"

namespace pvd {

namespace {

struct Entry {
  double cost = kInfCost;
  double runner_up = kInfCost;  // best losing candidate
  ArcId pred_arc = kNoArc;
  StateId pred_state = 0;
};

using FrameMap = std::map<StateId, Entry>;

// True if following epsilon backpointers from `from` inside this frame
// reaches `target`; a candidate that went around such a loop is the winner
// itself coming back, not a competing path.
bool LoopsBack(const Wfst &fst, const FrameMap &frame, StateId from, StateId target) {
  StateId cur = from;
  for (std::size_t steps = 0; steps <= frame.size(); ++steps) {
    if (cur == target) return true;
    const Entry &e = frame.at(cur);
    if (e.pred_arc == kNoArc || fst.arc(e.pred_arc).emitting()) return false;
    cur = e.pred_state;
  }
  return false;
}

// Returns true if the candidate became the new winner.
bool Offer(FrameMap &frame, StateId dst, double cand, ArcId arc, StateId src,
           bool counts_as_rival) {
  auto [it, inserted] = frame.try_emplace(dst);
  Entry &e = it->second;
  if (inserted || cand < e.cost) {
    if (!inserted) e.runner_up = std::min(e.runner_up, e.cost);
    e.cost = cand;
    e.pred_arc = arc;
    e.pred_state = src;
    return true;
  }
  if (counts_as_rival) e.runner_up = std::min(e.runner_up, cand);
  return false;
}

void EpsilonClosure(const Wfst &fst, FrameMap &frame, double cutoff) {
  using Item = std::pair<double, StateId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  for (const auto &[s, e] : frame)
    if (e.cost <= cutoff) queue.emplace(e.cost, s);
  std::map<StateId, bool> done;
  while (!queue.empty()) {
    const auto [cost, s] = queue.top();
    queue.pop();
    if (done[s] || cost != frame.at(s).cost) continue;
    done[s] = true;
    for (const Arc &a : fst.OutArcs(s)) {
      if (a.emitting()) continue;
      const double cand = cost + static_cast<double>(a.weight);
      if (cand > cutoff) continue;
      const bool rival = !frame.contains(a.dst) || !LoopsBack(fst, frame, s, a.dst);
      if (Offer(frame, a.dst, cand, a.id, s, rival) && !done[a.dst])
        queue.emplace(cand, a.dst);
    }
  }
}

double FilterToBeam(FrameMap &frame, double beam, std::uint32_t t) {
  if (frame.empty())
    throw DecodeFailure("no tokens survived at frame " + std::to_string(t));
  double best = kInfCost;
  for (const auto &[s, e] : frame) best = std::min(best, e.cost);
  return best + beam;
}

}  // namespace

SerialResult SerialDecode(const Wfst &fst, const CostMatrix &costs,
                          const DecodeConfig &config) {
  if (!(config.beam >= 0.0)) throw UsageError("beam must be non-negative");
  if (costs.num_labels() < fst.MaxInputLabel())
    throw UsageError("cost matrix has fewer labels than the graph uses");
  const std::uint32_t T = costs.num_frames();
  std::vector<FrameMap> frames(T + 1);
  SerialResult res;

  for (std::uint32_t t = 0; t <= T; ++t) {
    FrameMap &cur = frames[t];
    if (t == 0) {
      cur[fst.start()] = Entry{0.0, kInfCost, kNoArc, 0};
    } else {
      for (const auto &[s, e] : frames[t - 1]) {
        for (const Arc &a : fst.OutArcs(s)) {
          if (!a.emitting()) continue;
          const double ac = AcousticCost(costs, t - 1, a.ilabel, config.acoustic_scale);
          const double cand = e.cost + static_cast<double>(a.weight) + ac;
          Offer(cur, a.dst, cand, a.id, s, true);
        }
      }
    }
    const double cutoff = FilterToBeam(cur, config.beam, t);
    EpsilonClosure(fst, cur, cutoff);
    std::erase_if(cur, [&](const auto &kv) { return kv.second.cost > cutoff; });
    res.tokens += cur.size();
  }

  // Final weights; without any final state fall back to plain token costs.
  const FrameMap &last = frames[T];
  bool any_final = false;
  for (const auto &[s, e] : last) any_final |= fst.IsFinal(s);
  res.partial = !any_final;
  double best_total = kInfCost, second_total = kInfCost;
  StateId best_state = 0;
  for (const auto &[s, e] : last) {
    const double total = e.cost + (any_final ? fst.FinalCost(s) : 0.0);
    if (total < best_total) {
      second_total = best_total;
      best_total = total;
      best_state = s;
    } else {
      second_total = std::min(second_total, total);
    }
  }
  if (best_total == kInfCost) throw DecodeFailure("no complete path");
  res.best_cost = best_total;
  res.margin = second_total - best_total;

  std::uint32_t t = T;
  StateId s = best_state;
  for (std::size_t steps = 0;; ++steps) {
    if (steps > res.tokens + 1) throw InvariantViolation("serial backtrace loops");
    const Entry &e = frames[t].at(s);
    res.margin = std::min(res.margin, e.runner_up - e.cost);
    if (e.pred_arc == kNoArc) break;
    const Arc &a = fst.arc(e.pred_arc);
    if (a.olabel != kEpsilon) res.words.push_back(a.olabel);
    if (a.emitting()) {
      res.alignment.emplace_back(a.ilabel, t - 1);
      --t;
    }
    s = e.pred_state;
  }
  std::reverse(res.words.begin(), res.words.end());
  std::reverse(res.alignment.begin(), res.alignment.end());
  return res;
}

std::vector<double> BruteForceExtraCosts(const Lattice &lat, std::uint32_t frontier,
                                         std::span<const double> terminal) {
  if (frontier >= lat.frames_recorded())
    throw UsageError("frontier frame has not been recorded");
  if (terminal.size() != lat.nodes(frontier).size())
    throw UsageError("terminal cost count does not match the frontier");

  // Dense node numbering over frames [0, frontier].
  std::vector<std::size_t> offset(frontier + 2, 0);
  for (std::uint32_t f = 0; f <= frontier; ++f)
    offset[f + 1] = offset[f] + lat.nodes(f).size();
  const std::size_t n = offset.back();
  auto id = [&](LatticeNodeId x) { return offset[x.frame] + x.idx; };

  struct Edge {
    std::size_t from, to;
    double cost;
    bool live;
  };
  std::vector<Edge> edges;
  lat.ForEachArc(frontier, [&](const LatticeArc &a) {
    edges.push_back(Edge{id(a.from), id(a.to), a.cost(), !a.pruned});
  });

  std::vector<std::vector<std::size_t>> out(n);
  std::vector<std::size_t> indegree(n, 0);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (!edges[i].live) continue;
    out[edges[i].from].push_back(i);
    ++indegree[edges[i].to];
  }
  std::vector<std::size_t> order;
  std::queue<std::size_t> ready;
  for (std::size_t v = 0; v < n; ++v)
    if (indegree[v] == 0) ready.push(v);
  while (!ready.empty()) {
    const std::size_t v = ready.front();
    ready.pop();
    order.push_back(v);
    for (std::size_t e : out[v])
      if (--indegree[edges[e].to] == 0) ready.push(edges[e].to);
  }
  if (order.size() != n) throw UsageError("lattice contains a cycle");

  std::vector<double> fwd(n, kInfCost), bwd(n, kInfCost);
  if (!lat.nodes(0).empty()) fwd[lat.start_node()] = 0.0;
  for (std::size_t v : order)
    for (std::size_t e : out[v])
      fwd[edges[e].to] = std::min(fwd[edges[e].to], fwd[v] + edges[e].cost);
  for (std::size_t i = 0; i < terminal.size(); ++i) bwd[offset[frontier] + i] = terminal[i];
  for (auto it = order.rbegin(); it != order.rend(); ++it)
    for (std::size_t e : out[*it])
      bwd[*it] = std::min(bwd[*it], edges[e].cost + bwd[edges[e].to]);

  double best_total = kInfCost;
  for (std::size_t v = 0; v < n; ++v) best_total = std::min(best_total, fwd[v] + bwd[v]);

  std::vector<double> extra(edges.size(), kInfCost);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const Edge &e = edges[i];
    if (!e.live) continue;
    const double through = fwd[e.from] + e.cost + bwd[e.to];
    if (through != kInfCost) extra[i] = through - best_total;
  }
  return extra;
}

}  // namespace pvd
