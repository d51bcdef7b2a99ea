// include/pvd/decoder.h

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

#ifndef PVD_DECODER_H_
#define PVD_DECODER_H_

#include <atomic>
#include <cstdint>
#include <exception>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <thread>
#include <utility>
#include <vector>

#include "pvd/acoustics.h"
#include "pvd/lattice.h"
#include "pvd/packed_token.h"
#include "pvd/scheduler.h"
#include "pvd/sharded_store.h"
#include "pvd/thread_pool.h"
#include "pvd/wfst.h"

namespace pvd {

struct DecodeConfig {
  double beam = 14.0;
  double lattice_beam = 8.0;
  float acoustic_scale = 1.0f;
  unsigned num_workers = 1;
  std::uint32_t group_size = 32;  // N: arcs walked per chunk of a claimed token
  unsigned num_shards = 32;       // K: lattice arc vectors
  std::uint32_t prune_interval = 25;
  std::uint32_t max_tokens_per_frame = 1u << 20;
  // Lattice passes recordable in one frame, summed over all shards in use.
  std::size_t max_lattice_arcs = std::size_t{1} << 21;
  SchedulerKind scheduler = SchedulerKind::kDynamic;
  // Run interval pruning of frames <= t on a second thread while frame t+1
  // is decoded.
  bool overlap_pruning = true;

  // Throws UsageError on out-of-range values.
  void Validate() const;
};

inline constexpr std::uint32_t kNoToken = std::numeric_limits<std::uint32_t>::max();

// A surviving hypothesis. pred_token indexes the previous frame's token list
// when pred_arc is emitting and the same frame's list when it is epsilon.
struct Token {
  double cost = 0.0;
  StateId state = 0;
  ArcId pred_arc = kNoArc;
  std::uint32_t pred_token = kNoToken;
  std::uint32_t frame = 0;
  bool operator==(const Token &) const = default;
};

// Predecessor data kept per arc while a frame is expanded.
struct ArcTokenRecord {
  double cost = 0.0;
  // Previous-frame token index for emitting arcs, source state for epsilon
  // arcs (its token index is not known until aggregation).
  std::uint32_t pred = kNoToken;
};

// Min token cost plus beam. Throws DecodeFailure on an empty list.
double ComputeCutoff(std::span<const Token> tokens, double beam);

// Per-frame recombination state shared by all workers.
class FrameState {
 public:
  FrameState(StateId num_states, std::size_t num_arcs, unsigned num_workers);

  // Atomic min of Pack(cost, arc.id) into the destination state. On a strict
  // win the record is stored in the arc's buffer slot; each arc is expanded
  // at most once per pass, so that slot has a single writer. Returns whether
  // this candidate won strictly.
  bool Recombine(double cost, const Arc &arc, const ArcTokenRecord &record,
                 unsigned worker);

  // Epsilon-round variant: the candidate must also have a strictly lower
  // encoded cost than the destination held when the round began. Equal-cost
  // candidates arriving in a later round therefore cannot displace a winner,
  // which keeps backpointers acyclic across zero-weight epsilon cycles while
  // leaving each round's outcome independent of interleaving.
  bool RecombineEpsilon(double cost, const Arc &arc, const ArcTokenRecord &record,
                        unsigned worker);

  // Places the initial token (cost 0, no arc) at `state`.
  void SeedStart(StateId state);

  PackedToken winner(StateId s) const {
    return PackedToken{state_to_pack_[s].load(std::memory_order_acquire)};
  }
  const ArcTokenRecord &record(ArcId a) const { return per_arc_buf_[a]; }
  // Double-precision cost of the state's current winner.
  double WinnerCost(StateId s) const;

  // Running best cost of this frame (monotonically tightening).
  void OfferCost(double cost);
  double running_best() const { return running_best_.load(std::memory_order_relaxed); }

  // Sorted list of every state that received a candidate since Reset().
  const std::vector<StateId> &CollectTouched();

  // Starts an epsilon round: states that changed last round (`frontier`)
  // have their current cost recorded as the round-start reference.
  void BeginEpsilonRound(std::span<const StateId> frontier);
  // States whose winner changed during the current epsilon round.
  std::vector<StateId> TakeChanged();

  // Returns touched states to the empty sentinel.
  void Reset();

  void EnableWriteCounting(bool on);
  // Starts a new pass for write counting.
  void BeginPass();
  std::uint32_t max_writes_per_pass() const { return max_writes_.load(); }

 private:
  bool RecombineImpl(std::uint64_t pack, double cost, const Arc &arc,
                     const ArcTokenRecord &record, unsigned worker, bool track_changes);

  struct alignas(64) WorkerLists {
    std::vector<StateId> touched;
    std::vector<StateId> changed;
  };

  std::vector<std::atomic<std::uint64_t>> state_to_pack_;
  std::vector<std::uint32_t> settled_bits_;  // encoded cost at round start
  std::vector<std::atomic<std::uint32_t>> changed_stamp_;
  std::uint32_t round_ = 0;
  std::vector<ArcTokenRecord> per_arc_buf_;
  std::vector<WorkerLists> lists_;
  std::vector<StateId> touched_;
  std::atomic<double> running_best_;

  bool count_writes_ = false;
  std::vector<std::atomic<std::uint32_t>> write_counts_;
  std::atomic<std::uint32_t> max_writes_{0};
};

struct DecodeStats {
  std::uint32_t frames = 0;
  std::uint64_t tokens = 0;
  std::uint64_t lattice_arcs = 0;
  std::uint32_t max_epsilon_rounds = 0;
  std::uint32_t prune_runs = 0;
  std::int64_t token_passing_ns = 0;  // expansion, recombination, aggregation
  std::int64_t partition_ns = 0;      // static prefix sums (subset of the above)
  std::int64_t lattice_prune_ns = 0;  // interval and final pruning
  std::int64_t total_ns = 0;
};

// Optional instrumentation filled in by Decoder::Decode.
struct DecodeTrace {
  bool count_arc_writes = false;
  // Per token frame: (state, winning pack) of every surviving token.
  std::vector<std::vector<std::pair<StateId, PackedToken>>> winners;
  std::uint32_t max_arc_writes_per_pass = 0;
  std::vector<std::uint32_t> epsilon_rounds;  // per token frame
};

struct DecodeResult {
  std::vector<Label> words;
  std::vector<std::pair<Label, std::uint32_t>> alignment;  // (ilabel, frame)
  double best_cost = 0.0;  // includes the final cost unless partial
  bool partial = false;    // no token reached a final state
  std::vector<LatticeNodeId> best_path;  // token nodes, start to end
  std::vector<ArcId> best_path_arcs;     // graph arcs between them
  Lattice lattice;                       // raw lattice, final prune applied
  DecodeStats stats;
};

struct BacktraceResult {
  std::vector<Label> words;
  std::vector<std::pair<Label, std::uint32_t>> alignment;
  std::vector<LatticeNodeId> nodes;
  std::vector<ArcId> arcs;
};

// Follows predecessor links from `best` back to the initial token.
BacktraceResult Backtrace(const Wfst &fst,
                          std::span<const std::vector<Token>> frames,
                          LatticeNodeId best);

// Tokens and lattice pieces of one aggregated frame.
struct FrameTokens {
  std::vector<Token> tokens;  // ascending state id
  std::vector<LatticeArc> emitting;
  std::vector<LatticeArc> epsilon;
  double best_cost = 0.0;
  double cutoff = 0.0;
};

// Parallel token-passing decoder. One instance decodes utterances one after
// another; it owns the worker pools and per-frame buffers.
class Decoder {
 public:
  Decoder(const Wfst &fst, const DecodeConfig &config);
  ~Decoder();

  Decoder(const Decoder &) = delete;
  Decoder &operator=(const Decoder &) = delete;

  DecodeResult Decode(const CostMatrix &costs, DecodeTrace *trace = nullptr);

  // Frame-level steps, exposed for tests. One frame is BeginFrame, then
  // SeedStart (frame 0) or ExpandEmitting, then ExpandNonEmitting, then
  // AggregateFrame.
  void BeginFrame();
  void SeedStart();
  void ExpandEmitting(std::span<const Token> prev, const CostMatrix &costs,
                      std::uint32_t t);
  // Returns the number of epsilon rounds that relaxed at least one state.
  std::uint32_t ExpandNonEmitting();
  FrameTokens AggregateFrame(std::uint32_t frame);

  const FrameState &frame_state() const { return frame_state_; }
  FrameState &frame_state() { return frame_state_; }
  const DecodeConfig &config() const { return config_; }

 private:
  struct PendingArc {
    ArcId arc;
    std::uint32_t from;  // token index (emitting) or state id (epsilon)
    double cost;
    float acoustic;
  };

  void LaunchPrune(Lattice &lat, std::uint32_t frontier);
  void JoinPrune();

  const Wfst &fst_;
  DecodeConfig config_;
  ThreadPool pool_;
  ThreadPool prune_pool_;
  FrameState frame_state_;
  ShardedArcStore<PendingArc> pending_;
  std::vector<std::uint32_t> index_of_;  // state -> token index this frame
  std::vector<std::uint8_t> has_epsilon_;
  std::int64_t partition_ns_ = 0;

  std::thread prune_thread_;
  std::exception_ptr prune_error_;
  std::atomic<std::int64_t> prune_ns_{0};
};

// Convenience wrapper constructing a Decoder for one utterance.
DecodeResult DecodeUtterance(const Wfst &fst, const CostMatrix &costs,
                             const DecodeConfig &config);

struct BatchOutcome {
  std::optional<DecodeResult> result;
  std::exception_ptr error;
};

// Decodes independent utterances concurrently: `pool_workers` workers claim
// utterances from a dispatcher and each decodes its claims with a private
// single-worker Decoder. Results come back in input order and equal those of
// sequential decoding.
std::vector<BatchOutcome> DecodeBatch(const Wfst &fst,
                                      std::span<const CostMatrix> utterances,
                                      const DecodeConfig &config,
                                      unsigned pool_workers);

}  // namespace pvd

#endif  // PVD_DECODER_H_
