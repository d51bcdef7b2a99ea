// src/decoder.cc

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

#include "pvd/decoder.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>
#include <tuple>

#include "pvd/error.h"

namespace pvd {

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t ElapsedNs(Clock::time_point since) {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - since)
      .count();
}

// Pack without the range checks of Pack(): decoding costs may be negative
// when acoustic costs are, and the order-preserving encoding handles that.
inline std::uint64_t PackCost(double cost, ArcId arc) {
  float c = static_cast<float>(cost);
  if (c == 0.0f) c = 0.0f;
  return (std::uint64_t{EncodeCost(c)} << 32) | arc;
}

// Runs fn(begin, end) over [0, n) split into one contiguous block per worker;
// small inputs run inline.
template <typename Fn>
void ParallelBlocks(ThreadPool &pool, std::size_t n, Fn &&fn) {
  if (n == 0) return;
  if (pool.size() == 1 || n < 4096) {
    fn(std::size_t{0}, n);
    return;
  }
  const std::size_t p = pool.size();
  pool.Run([&](unsigned w) {
    const std::size_t b = n * w / p;
    const std::size_t e = n * (w + 1) / p;
    if (b < e) fn(b, e);
  });
}

std::size_t ShardCapacity(const DecodeConfig &c) {
  const std::size_t used = std::max<std::size_t>(
      1, std::min<std::size_t>(c.num_shards, std::max(1u, c.num_workers)));
  return (c.max_lattice_arcs + used - 1) / used;
}

const DecodeConfig &Validated(const DecodeConfig &c) {
  c.Validate();
  return c;
}

}  // namespace

void DecodeConfig::Validate() const {
  if (!(beam > 0.0) || !std::isfinite(beam))
    throw UsageError("beam must be a positive finite number");
  if (!(lattice_beam >= 0.0) || !std::isfinite(lattice_beam))
    throw UsageError("lattice beam must be a non-negative finite number");
  if (!(acoustic_scale > 0.0f) || !std::isfinite(acoustic_scale))
    throw UsageError("acoustic scale must be positive");
  if (num_workers == 0) throw UsageError("worker count must be positive");
  if (group_size == 0) throw UsageError("group size must be positive");
  if (num_shards == 0) throw UsageError("shard count must be positive");
  if (prune_interval == 0) throw UsageError("prune interval must be positive");
  if (max_tokens_per_frame == 0)
    throw UsageError("max tokens per frame must be positive");
  if (max_lattice_arcs == 0) throw UsageError("max lattice arcs must be positive");
}

double ComputeCutoff(std::span<const Token> tokens, double beam) {
  if (tokens.empty()) throw DecodeFailure("no active tokens");
  double best = kInfCost;
  for (const Token &t : tokens) best = std::min(best, t.cost);
  return best + beam;
}

// ---------------------------------------------------------------------------
// FrameState

FrameState::FrameState(StateId num_states, std::size_t num_arcs, unsigned num_workers)
    : state_to_pack_(num_states),
      settled_bits_(num_states, ~std::uint32_t{0}),
      changed_stamp_(num_states),
      per_arc_buf_(num_arcs),
      lists_(std::max(1u, num_workers)),
      running_best_(kInfCost) {
  for (auto &p : state_to_pack_) p.store(PackedToken::kEmpty, std::memory_order_relaxed);
  for (auto &c : changed_stamp_) c.store(0, std::memory_order_relaxed);
}

bool FrameState::RecombineImpl(std::uint64_t pack, double cost, const Arc &arc,
                               const ArcTokenRecord &record, unsigned worker,
                               bool track_changes) {
  (void)cost;
  const std::uint64_t old = AtomicFetchMin(state_to_pack_[arc.dst], pack);
  WorkerLists &lists = lists_[worker];
  if (old == PackedToken::kEmpty) lists.touched.push_back(arc.dst);
  if (pack >= old) return false;
  per_arc_buf_[arc.id] = record;
  if (count_writes_) {
    const std::uint32_t n =
        write_counts_[arc.id].fetch_add(1, std::memory_order_relaxed) + 1;
    std::uint32_t cur = max_writes_.load(std::memory_order_relaxed);
    while (n > cur && !max_writes_.compare_exchange_weak(cur, n)) {
    }
  }
  if (track_changes &&
      changed_stamp_[arc.dst].exchange(round_, std::memory_order_relaxed) != round_)
    lists.changed.push_back(arc.dst);
  return true;
}

bool FrameState::Recombine(double cost, const Arc &arc, const ArcTokenRecord &record,
                           unsigned worker) {
  return RecombineImpl(PackCost(cost, arc.id), cost, arc, record, worker, false);
}

bool FrameState::RecombineEpsilon(double cost, const Arc &arc,
                                  const ArcTokenRecord &record, unsigned worker) {
  const std::uint64_t pack = PackCost(cost, arc.id);
  if (static_cast<std::uint32_t>(pack >> 32) >= settled_bits_[arc.dst]) return false;
  return RecombineImpl(pack, cost, arc, record, worker, true);
}

void FrameState::SeedStart(StateId state) {
  const std::uint64_t pack = PackCost(0.0, kNoArc);
  const std::uint64_t old = AtomicFetchMin(state_to_pack_[state], pack);
  if (old == PackedToken::kEmpty) lists_[0].touched.push_back(state);
  OfferCost(0.0);
}

double FrameState::WinnerCost(StateId s) const {
  const PackedToken p = winner(s);
  if (p.empty()) return kInfCost;
  if (p.arc() == kNoArc) return 0.0;
  return per_arc_buf_[p.arc()].cost;
}

void FrameState::OfferCost(double cost) {
  double cur = running_best_.load(std::memory_order_relaxed);
  while (cost < cur &&
         !running_best_.compare_exchange_weak(cur, cost, std::memory_order_relaxed)) {
  }
}

const std::vector<StateId> &FrameState::CollectTouched() {
  bool grew = false;
  for (auto &l : lists_) {
    if (l.touched.empty()) continue;
    touched_.insert(touched_.end(), l.touched.begin(), l.touched.end());
    l.touched.clear();
    grew = true;
  }
  if (grew) std::sort(touched_.begin(), touched_.end());
  return touched_;
}

void FrameState::BeginEpsilonRound(std::span<const StateId> frontier) {
  for (StateId s : frontier) settled_bits_[s] = winner(s).cost_bits();
  if (++round_ == 0) {
    // Stamp counter wrapped; clear stamps so stale values cannot collide.
    for (auto &c : changed_stamp_) c.store(0, std::memory_order_relaxed);
    round_ = 1;
  }
}

std::vector<StateId> FrameState::TakeChanged() {
  std::vector<StateId> out;
  for (auto &l : lists_) {
    out.insert(out.end(), l.changed.begin(), l.changed.end());
    l.changed.clear();
  }
  std::sort(out.begin(), out.end());
  return out;
}

void FrameState::Reset() {
  CollectTouched();
  for (StateId s : touched_) {
    state_to_pack_[s].store(PackedToken::kEmpty, std::memory_order_relaxed);
    settled_bits_[s] = ~std::uint32_t{0};
  }
  touched_.clear();
  for (auto &l : lists_) l.changed.clear();
  running_best_.store(kInfCost, std::memory_order_relaxed);
}

void FrameState::EnableWriteCounting(bool on) {
  count_writes_ = on;
  if (on && write_counts_.size() != per_arc_buf_.size())
    write_counts_ = std::vector<std::atomic<std::uint32_t>>(per_arc_buf_.size());
  max_writes_.store(0);
  BeginPass();
}

void FrameState::BeginPass() {
  if (!count_writes_) return;
  for (auto &c : write_counts_) c.store(0, std::memory_order_relaxed);
}

// ---------------------------------------------------------------------------
// Backtrace

BacktraceResult Backtrace(const Wfst &fst, std::span<const std::vector<Token>> frames,
                          LatticeNodeId best) {
  std::size_t limit = 1;
  for (const auto &f : frames) limit += f.size();

  BacktraceResult r;
  LatticeNodeId cur = best;
  for (std::size_t steps = 0;; ++steps) {
    if (steps > limit) throw InvariantViolation("backtrace does not terminate");
    if (cur.frame >= frames.size() || cur.idx >= frames[cur.frame].size())
      throw InvariantViolation("backpointer outside the token lists");
    r.nodes.push_back(cur);
    const Token &tok = frames[cur.frame][cur.idx];
    if (tok.pred_arc == kNoArc) {
      if (cur.frame != 0) throw InvariantViolation("backtrace stopped before frame 0");
      break;
    }
    const Arc &a = fst.arc(tok.pred_arc);
    r.arcs.push_back(a.id);
    if (a.olabel != kEpsilon) r.words.push_back(a.olabel);
    if (a.emitting()) {
      if (cur.frame == 0) throw InvariantViolation("emitting backpointer at frame 0");
      r.alignment.emplace_back(a.ilabel, cur.frame - 1);
      cur = LatticeNodeId{cur.frame - 1, tok.pred_token};
    } else {
      cur = LatticeNodeId{cur.frame, tok.pred_token};
    }
  }
  std::reverse(r.words.begin(), r.words.end());
  std::reverse(r.alignment.begin(), r.alignment.end());
  std::reverse(r.nodes.begin(), r.nodes.end());
  std::reverse(r.arcs.begin(), r.arcs.end());
  return r;
}

// ---------------------------------------------------------------------------
// Decoder

Decoder::Decoder(const Wfst &fst, const DecodeConfig &config)
    : fst_(fst),
      config_(Validated(config)),
      pool_(config.num_workers),
      prune_pool_(config.num_workers),
      frame_state_(fst.num_states(), fst.num_arcs(), config.num_workers),
      pending_(config.num_shards, ShardCapacity(config)),
      index_of_(fst.num_states(), kNoToken),
      has_epsilon_(fst.num_states(), 0) {
  for (const Arc &a : fst.arcs())
    if (!a.emitting()) has_epsilon_[a.src] = 1;
}

Decoder::~Decoder() {
  if (prune_thread_.joinable()) prune_thread_.join();
}

void Decoder::BeginFrame() {
  for (StateId s : frame_state_.CollectTouched()) index_of_[s] = kNoToken;
  frame_state_.Reset();
  frame_state_.BeginPass();
  pending_.Clear();
}

void Decoder::SeedStart() { frame_state_.SeedStart(fst_.start()); }

void Decoder::ExpandEmitting(std::span<const Token> prev, const CostMatrix &costs,
                             std::uint32_t t) {
  if (t >= costs.num_frames())
    throw UsageError("frame " + std::to_string(t) + " out of range");
  const Arc *arcs = fst_.arcs().data();
  const auto offsets = fst_.arc_offsets();
  const float scale = config_.acoustic_scale;
  const double beam = config_.beam;
  FrameState &fs = frame_state_;

  partition_ns_ += DistributeArcs(
      pool_, config_.scheduler, static_cast<std::uint32_t>(prev.size()),
      config_.group_size, [&](std::uint32_t i) { return fst_.OutDegree(prev[i].state); },
      [&](unsigned w, std::uint32_t i, std::uint32_t b, std::uint32_t e) {
        const Token &tok = prev[i];
        const Arc *base = arcs + offsets[tok.state];
        for (std::uint32_t k = b; k < e; ++k) {
          const Arc &a = base[k];
          if (!a.emitting()) continue;
          const double ac = ScaledCost(costs, t, a.ilabel, scale);
          const double cand = tok.cost + static_cast<double>(a.weight) + ac;
          if (cand < fs.running_best()) fs.OfferCost(cand);
          if (cand > fs.running_best() + beam) continue;
          fs.Recombine(cand, a, ArcTokenRecord{cand, i}, w);
          pending_.Push(PendingArc{a.id, i, cand, static_cast<float>(ac)}, w);
        }
      });
}

std::uint32_t Decoder::ExpandNonEmitting() {
  FrameState &fs = frame_state_;
  const Arc *arcs = fst_.arcs().data();
  const auto offsets = fst_.arc_offsets();
  const double beam = config_.beam;

  struct Source {
    StateId state;
    double cost;
  };
  std::vector<StateId> frontier = fs.CollectTouched();
  std::vector<Source> sources;
  std::uint32_t rounds = 0;
  while (true) {
    // Snapshot the round's sources before anything is relaxed, so that no
    // per-arc record is read while it may be rewritten.
    sources.clear();
    const double cutoff = fs.running_best() + beam;
    for (StateId s : frontier) {
      if (!has_epsilon_[s]) continue;
      const double c = fs.WinnerCost(s);
      if (c <= cutoff) sources.push_back(Source{s, c});
    }
    if (sources.empty()) break;
    if (++rounds > fst_.num_states() + 1)
      throw InvariantViolation("epsilon closure did not converge");
    fs.BeginEpsilonRound(frontier);
    fs.BeginPass();

    partition_ns_ += DistributeArcs(
        pool_, config_.scheduler, static_cast<std::uint32_t>(sources.size()),
        config_.group_size,
        [&](std::uint32_t i) { return fst_.OutDegree(sources[i].state); },
        [&](unsigned w, std::uint32_t i, std::uint32_t b, std::uint32_t e) {
          const Source src = sources[i];
          const Arc *base = arcs + offsets[src.state];
          for (std::uint32_t k = b; k < e; ++k) {
            const Arc &a = base[k];
            if (a.emitting()) continue;
            const double cand = src.cost + static_cast<double>(a.weight);
            if (cand > fs.running_best() + beam) continue;
            fs.RecombineEpsilon(cand, a, ArcTokenRecord{cand, src.state}, w);
            // Recorded even when it loses: a pass from the source's final
            // cost may tie the destination in single precision and still be
            // the lattice arc that explains the destination's winner.
            pending_.Push(PendingArc{a.id, src.state, cand, 0.0f}, w);
          }
        });
    frontier = fs.TakeChanged();
    fs.CollectTouched();
  }
  return rounds;
}

FrameTokens Decoder::AggregateFrame(std::uint32_t frame) {
  FrameState &fs = frame_state_;
  const std::vector<StateId> &touched = fs.CollectTouched();
  if (touched.size() > config_.max_tokens_per_frame)
    throw CapacityError("frame " + std::to_string(frame) + " has " +
                        std::to_string(touched.size()) +
                        " active states; raise --max-tokens-per-frame");

  std::vector<Token> cand(touched.size());
  ParallelBlocks(pool_, touched.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const StateId s = touched[i];
      const PackedToken p = fs.winner(s);
      Token &t = cand[i];
      t.state = s;
      t.frame = frame;
      t.pred_arc = p.arc();
      if (p.arc() == kNoArc) {
        t.cost = 0.0;
      } else {
        const ArcTokenRecord &r = fs.record(p.arc());
        t.cost = r.cost;
        t.pred_token = r.pred;
      }
    }
  });

  FrameTokens out;
  out.cutoff = ComputeCutoff(cand, config_.beam);
  out.best_cost = kInfCost;
  for (const Token &t : cand) out.best_cost = std::min(out.best_cost, t.cost);

  for (const Token &t : cand) {
    if (t.cost > out.cutoff) continue;
    index_of_[t.state] = static_cast<std::uint32_t>(out.tokens.size());
    out.tokens.push_back(t);
  }
  // Epsilon backpointers were recorded as source states; resolve them now
  // that this frame's indices are known.
  for (Token &t : out.tokens) {
    if (t.pred_arc == kNoArc || fst_.arc(t.pred_arc).emitting()) continue;
    const std::uint32_t idx = index_of_[t.pred_token];
    if (idx == kNoToken)
      throw InvariantViolation("epsilon predecessor of state " +
                               std::to_string(t.state) + " did not survive");
    t.pred_token = idx;
  }

  const double cutoff = out.cutoff;
  pending_.ForEach([&](const PendingArc &p) {
    if (p.cost > cutoff) return;
    const Arc &a = fst_.arc(p.arc);
    const std::uint32_t to = index_of_[a.dst];
    if (to == kNoToken) return;
    if (a.emitting()) {
      LatticeArc la;
      la.from = LatticeNodeId{frame - 1, p.from};
      la.to = LatticeNodeId{frame, to};
      la.ilabel = a.ilabel;
      la.olabel = a.olabel;
      la.graph_cost = a.weight;
      la.acoustic_cost = p.acoustic;
      la.arc_id = a.id;
      out.emitting.push_back(la);
      return;
    }
    const std::uint32_t from = index_of_[p.from];
    if (from == kNoToken) return;
    const Token &u = out.tokens[from];
    const Token &v = out.tokens[to];
    // Keep the pass made from u's final cost only; among equal-cost passes
    // keep just the winning one, so epsilon arcs never close a cycle.
    if (p.cost != u.cost + static_cast<double>(a.weight)) return;
    if (!(u.cost < v.cost) && v.pred_arc != a.id) return;
    LatticeArc la;
    la.from = LatticeNodeId{frame, from};
    la.to = LatticeNodeId{frame, to};
    la.ilabel = kEpsilon;
    la.olabel = a.olabel;
    la.graph_cost = a.weight;
    la.acoustic_cost = 0.0f;
    la.arc_id = a.id;
    out.epsilon.push_back(la);
  });

  auto by_source = [](const LatticeArc &x, const LatticeArc &y) {
    return std::tie(x.from.idx, x.arc_id) < std::tie(y.from.idx, y.arc_id);
  };
  auto same = [](const LatticeArc &x, const LatticeArc &y) {
    return x.from.idx == y.from.idx && x.arc_id == y.arc_id;
  };
  std::sort(out.emitting.begin(), out.emitting.end(), by_source);
  std::sort(out.epsilon.begin(), out.epsilon.end(), by_source);
  out.epsilon.erase(std::unique(out.epsilon.begin(), out.epsilon.end(), same),
                    out.epsilon.end());
  return out;
}

void Decoder::JoinPrune() {
  if (prune_thread_.joinable()) prune_thread_.join();
  if (prune_error_) {
    auto e = prune_error_;
    prune_error_ = nullptr;
    std::rethrow_exception(e);
  }
}

void Decoder::LaunchPrune(Lattice &lat, std::uint32_t frontier) {
  JoinPrune();
  auto job = [this, &lat, frontier] {
    const auto t0 = Clock::now();
    const auto terminal = FrontierTerminalCosts(lat, frontier);
    PruneLattice(lat, frontier, terminal, config_.lattice_beam, prune_pool_);
    prune_ns_ += ElapsedNs(t0);
  };
  if (!config_.overlap_pruning) {
    job();
    return;
  }
  prune_thread_ = std::thread([this, job] {
    try {
      job();
    } catch (...) {
      prune_error_ = std::current_exception();
    }
  });
}

DecodeResult Decoder::Decode(const CostMatrix &costs, DecodeTrace *trace) {
  if (costs.num_labels() < fst_.MaxInputLabel())
    throw UsageError("cost matrix has " + std::to_string(costs.num_labels()) +
                     " labels but the graph uses ilabel " +
                     std::to_string(fst_.MaxInputLabel()));
  const auto t_start = Clock::now();
  const std::uint32_t T = costs.num_frames();

  DecodeResult res;
  res.lattice = Lattice(T);
  Lattice &lat = res.lattice;
  std::vector<std::vector<Token>> frames(T + 1);
  partition_ns_ = 0;
  prune_ns_ = 0;
  std::int64_t token_ns = 0;
  frame_state_.EnableWriteCounting(trace != nullptr && trace->count_arc_writes);
  if (trace) {
    trace->winners.assign(T + 1, {});
    trace->epsilon_rounds.assign(T + 1, 0);
    trace->max_arc_writes_per_pass = 0;
  }

  try {
    for (std::uint32_t f = 0; f <= T; ++f) {
      const auto t0 = Clock::now();
      BeginFrame();
      if (f == 0)
        SeedStart();
      else
        ExpandEmitting(frames[f - 1], costs, f - 1);
      const std::uint32_t rounds = ExpandNonEmitting();
      FrameTokens ft = AggregateFrame(f);
      token_ns += ElapsedNs(t0);

      res.stats.max_epsilon_rounds = std::max(res.stats.max_epsilon_rounds, rounds);
      res.stats.tokens += ft.tokens.size();
      if (trace) {
        trace->epsilon_rounds[f] = rounds;
        auto &w = trace->winners[f];
        w.reserve(ft.tokens.size());
        for (const Token &t : ft.tokens)
          w.emplace_back(t.state, frame_state_.winner(t.state));
      }

      std::vector<LatticeNode> nodes(ft.tokens.size());
      for (std::size_t i = 0; i < nodes.size(); ++i)
        nodes[i] = LatticeNode{ft.tokens[i].state, ft.tokens[i].cost, kInfCost};
      if (f == 0) lat.set_start_node(index_of_[fst_.start()]);
      lat.AddFrame(f, std::move(nodes), std::move(ft.emitting), std::move(ft.epsilon));
      frames[f] = std::move(ft.tokens);

      if (f > 0 && f < T && f % config_.prune_interval == 0) {
        LaunchPrune(lat, f);
        ++res.stats.prune_runs;
      }
    }
    JoinPrune();
  } catch (...) {
    if (prune_thread_.joinable()) prune_thread_.join();
    prune_error_ = nullptr;
    throw;
  }
  if (trace) trace->max_arc_writes_per_pass = frame_state_.max_writes_per_pass();

  // Final costs; fall back to the best last-frame token when nothing is final.
  const std::vector<Token> &last = frames[T];
  std::vector<float> finals(last.size());
  bool any_final = false;
  for (std::size_t i = 0; i < last.size(); ++i) {
    finals[i] = fst_.FinalCost(last[i].state);
    any_final |= std::isfinite(finals[i]);
  }
  if (!any_final) {
    res.partial = true;
    std::fill(finals.begin(), finals.end(), 0.0f);
  }
  lat.set_final_costs(finals);

  const auto tp = Clock::now();
  PruneLattice(lat, T, FinalTerminalCosts(lat), config_.lattice_beam, prune_pool_);
  prune_ns_ += ElapsedNs(tp);
  ++res.stats.prune_runs;

  std::uint32_t best = 0;
  double best_total = kInfCost;
  for (std::uint32_t i = 0; i < last.size(); ++i) {
    const double total = last[i].cost + static_cast<double>(finals[i]);
    if (total < best_total) {
      best_total = total;
      best = i;
    }
  }
  BacktraceResult bt = Backtrace(fst_, frames, LatticeNodeId{T, best});
  res.words = std::move(bt.words);
  res.alignment = std::move(bt.alignment);
  res.best_path = std::move(bt.nodes);
  res.best_path_arcs = std::move(bt.arcs);
  res.best_cost = best_total;

  res.stats.frames = T;
  res.stats.lattice_arcs = lat.NumArcs();
  res.stats.token_passing_ns = token_ns;
  res.stats.partition_ns = partition_ns_;
  res.stats.lattice_prune_ns = prune_ns_;
  res.stats.total_ns = ElapsedNs(t_start);
  return res;
}

DecodeResult DecodeUtterance(const Wfst &fst, const CostMatrix &costs,
                             const DecodeConfig &config) {
  Decoder decoder(fst, config);
  return decoder.Decode(costs);
}

std::vector<BatchOutcome> DecodeBatch(const Wfst &fst,
                                      std::span<const CostMatrix> utterances,
                                      const DecodeConfig &config,
                                      unsigned pool_workers) {
  config.Validate();
  if (pool_workers == 0) throw UsageError("batch worker count must be positive");
  DecodeConfig single = config;
  single.num_workers = 1;

  std::vector<BatchOutcome> out(utterances.size());
  Dispatcher dispatcher(static_cast<std::uint32_t>(utterances.size()));
  ThreadPool pool(pool_workers);
  pool.Run([&](unsigned) {
    std::unique_ptr<Decoder> decoder;
    while (auto i = dispatcher.ClaimNext()) {
      try {
        if (!decoder) decoder = std::make_unique<Decoder>(fst, single);
        out[*i].result = decoder->Decode(utterances[*i]);
      } catch (...) {
        out[*i].error = std::current_exception();
        decoder.reset();  // start the next utterance from clean buffers
      }
    }
  });
  return out;
}

}  // namespace pvd
