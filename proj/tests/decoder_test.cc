// tests/decoder_test.cc

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

#include <algorithm>
#include <cmath>
#include <set>
#include <thread>
#include <vector>

#include "doctest.h"
#include "pvd/decoder.h"
#include "pvd/error.h"
#include "pvd/reference.h"
#include "pvd/synth.h"
#include "test_util.h"

namespace pvd {
namespace {

using testing::kW1;
using testing::kW1Costs;
using testing::ParseCosts;
using testing::ParseWfst;

DecodeConfig Config(unsigned workers = 1, SchedulerKind kind = SchedulerKind::kDynamic) {
  DecodeConfig c;
  c.num_workers = workers;
  c.scheduler = kind;
  return c;
}

// Runs frame 0 and the emitting pass of frame 1 on `dec`.
std::vector<Token> Frame0(Decoder &dec) {
  dec.BeginFrame();
  dec.SeedStart();
  dec.ExpandNonEmitting();
  return dec.AggregateFrame(0).tokens;
}

TEST_SUITE("decoder") {

TEST_CASE("compute_cutoff") {
  std::vector<Token> toks(2);
  toks[0].cost = 2.0;
  toks[1].cost = 3.5;
  CHECK(ComputeCutoff(toks, 14.0) == 16.0);
  std::vector<Token> one(1);
  CHECK(ComputeCutoff(one, 14.0) == 14.0);
  CHECK_THROWS_AS(ComputeCutoff(std::vector<Token>{}, 14.0), DecodeFailure);
}

TEST_CASE("recombine keeps the minimum pack and writes the winner's record") {
  // Two arcs into state 1 with ids 3 and 7.
  FrameState fs(2, 8, 1);
  Arc a3{0, 1, 1, 0, 0.0f, 3};
  Arc a7{0, 1, 1, 0, 0.0f, 7};
  CHECK(fs.Recombine(1.0, a3, ArcTokenRecord{1.0, 0}, 0));
  CHECK(fs.winner(1) == Pack(1.0f, 3));
  CHECK(fs.Recombine(0.5, a7, ArcTokenRecord{0.5, 4}, 0));
  CHECK(fs.winner(1) == Pack(0.5f, 7));
  CHECK(fs.record(7).pred == 4);

  // A losing candidate leaves both the pack and the buffer alone.
  FrameState loss(2, 8, 1);
  loss.Recombine(0.5, a7, ArcTokenRecord{0.5, 1}, 0);
  CHECK_FALSE(loss.Recombine(1.0, a3, ArcTokenRecord{1.0, 9}, 0));
  CHECK(loss.winner(1) == Pack(0.5f, 7));
  CHECK(loss.record(3).pred == kNoToken);
}

TEST_CASE("equal costs resolve to the smaller arc id") {
  FrameState fs(2, 8, 1);
  fs.Recombine(0.25, Arc{0, 1, 1, 0, 0.0f, 6}, ArcTokenRecord{0.25, 0}, 0);
  fs.Recombine(0.25, Arc{0, 1, 1, 0, 0.0f, 2}, ArcTokenRecord{0.25, 0}, 0);
  fs.Recombine(0.25, Arc{0, 1, 1, 0, 0.0f, 5}, ArcTokenRecord{0.25, 0}, 0);
  CHECK(fs.winner(1).arc() == 2);
}

TEST_CASE("concurrent recombines onto one state end at the global minimum") {
  for (int rep = 0; rep < 20; ++rep) {
    constexpr int kN = 64;
    FrameState fs(2, kN, 8);
    std::vector<std::thread> threads;
    std::vector<float> costs(kN);
    for (int i = 0; i < kN; ++i) costs[i] = 1.0f + 0.01f * static_cast<float>((i * 37 + rep) % kN);
    for (unsigned w = 0; w < 8; ++w)
      threads.emplace_back([&, w] {
        for (int i = static_cast<int>(w); i < kN; i += 8)
          fs.Recombine(costs[i], Arc{0, 1, 1, 0, 0.0f, static_cast<ArcId>(i)},
                       ArcTokenRecord{costs[i], 0}, w);
      });
    for (auto &t : threads) t.join();
    PackedToken expect{PackedToken::kEmpty};
    for (int i = 0; i < kN; ++i) expect = std::min(expect, Pack(costs[i], i));
    CHECK(fs.winner(1) == expect);
  }
}

TEST_CASE("emitting pass on the two-arc graph") {
  const Wfst w = ParseWfst(kW1);
  const CostMatrix m = ParseCosts(kW1Costs);
  Decoder dec(w, Config());
  const auto f0 = Frame0(dec);
  REQUIRE(f0.size() == 1);
  dec.BeginFrame();
  dec.ExpandEmitting(f0, m, 0);
  CHECK(dec.frame_state().winner(1).cost() == doctest::Approx(0.8));
  CHECK(dec.frame_state().winner(2).cost() == doctest::Approx(1.1));
  CHECK(dec.ExpandNonEmitting() == 0);  // no epsilon arcs
  const FrameTokens ft = dec.AggregateFrame(1);
  REQUIRE(ft.tokens.size() == 2);
  CHECK(ft.tokens[0].state == 1);
  CHECK(ft.tokens[0].cost == doctest::Approx(0.8));
  CHECK(ft.tokens[0].pred_arc == 0);
  CHECK(ft.tokens[1].state == 2);
  CHECK(ft.tokens[1].cost == doctest::Approx(1.1));
  CHECK(ft.tokens[1].pred_arc == 1);
  CHECK(ft.emitting.size() == 2);
}

TEST_CASE("a tight beam keeps only the best state") {
  const Wfst w = ParseWfst(kW1);
  const CostMatrix m = ParseCosts(kW1Costs);
  DecodeConfig c = Config();
  c.beam = 0.1;
  Decoder dec(w, c);
  const auto f0 = Frame0(dec);
  dec.BeginFrame();
  dec.ExpandEmitting(f0, m, 0);
  dec.ExpandNonEmitting();
  const FrameTokens ft = dec.AggregateFrame(1);
  REQUIRE(ft.tokens.size() == 1);
  CHECK(ft.tokens[0].state == 1);
  CHECK(ft.emitting.size() == 1);
}

TEST_CASE("epsilon chain relaxes in one round") {
  const Wfst w = ParseWfst("0 1 1 1 0.5\n0 2 2 2 1.0\n1 3 0 0 0.0\n3 0.0\n2 0.0\n");
  const CostMatrix m = ParseCosts(kW1Costs);
  Decoder dec(w, Config());
  const auto f0 = Frame0(dec);
  dec.BeginFrame();
  dec.ExpandEmitting(f0, m, 0);
  CHECK(dec.ExpandNonEmitting() == 1);
  CHECK(dec.frame_state().winner(3).cost() == doctest::Approx(0.8));
}

TEST_CASE("zero-weight epsilon cycle terminates with acyclic backpointers") {
  const Wfst w = ParseWfst(
      "0 1 1 0 0.5\n1 2 0 0 0.0\n2 1 0 0 0.0\n2 3 0 7 0.0\n1 4 1 0 1.0\n3 0.0\n4 0.0\n");
  const CostMatrix m = ParseCosts("2 1\n0.25\n0.5\n");
  for (unsigned workers : {1u, 2u, 4u}) {
    const DecodeResult r = DecodeUtterance(w, m, Config(workers));
    const SerialResult s = SerialDecode(w, m, Config());
    CHECK(r.best_cost == doctest::Approx(s.best_cost));
    CHECK(r.words == s.words);
    CHECK(r.best_path.size() >= 2);
  }
}

TEST_CASE("decode on the two-arc graph") {
  const DecodeResult r = DecodeUtterance(ParseWfst(kW1), ParseCosts(kW1Costs), Config());
  CHECK(r.words == std::vector<Label>{1});
  CHECK(r.best_cost == doctest::Approx(0.8).epsilon(1e-6));
  CHECK_FALSE(r.partial);
  REQUIRE(r.alignment.size() == 1);
  CHECK(r.alignment[0] == std::pair<Label, std::uint32_t>{1, 0});
  CHECK(r.best_path_arcs == std::vector<ArcId>{0});
}

TEST_CASE("backtrace drops epsilon output labels") {
  const Wfst w = ParseWfst("0 1 1 1 0.1\n1 2 0 0 0.1\n2 3 1 2 0.1\n3 0.0\n");
  const DecodeResult r = DecodeUtterance(w, ParseCosts("2 1\n0.0\n0.0\n"), Config());
  CHECK(r.words == std::vector<Label>{1, 2});
  CHECK(r.alignment.size() == 2);
  CHECK(r.best_path_arcs.size() == 3);
}

TEST_CASE("no reachable final state gives a partial result") {
  const Wfst w = ParseWfst("0 1 1 3 0.5\n1 1 1 4 0.5\n2 0.0\n");
  const DecodeResult r = DecodeUtterance(w, ParseCosts("2 1\n1.0\n1.0\n"), Config());
  CHECK(r.partial);
  CHECK(r.words == std::vector<Label>{3, 4});
  CHECK(r.best_cost == doctest::Approx(3.0));
}

TEST_CASE("dead end raises decode failure") {
  const Wfst w = ParseWfst("0 1 1 1 0.5\n1 0.0\n");
  CHECK_THROWS_AS(DecodeUtterance(w, ParseCosts("2 1\n1.0\n1.0\n"), Config()),
                  DecodeFailure);
}

TEST_CASE("capacity limits are enforced") {
  const Wfst w = ParseWfst(kW1);
  const CostMatrix m = ParseCosts(kW1Costs);
  DecodeConfig c = Config();
  c.max_tokens_per_frame = 1;
  CHECK_THROWS_AS(DecodeUtterance(w, m, c), CapacityError);
  c = Config();
  c.max_lattice_arcs = 1;
  CHECK_THROWS_AS(DecodeUtterance(w, m, c), CapacityError);
}

TEST_CASE("config validation") {
  const Wfst w = ParseWfst(kW1);
  DecodeConfig c = Config();
  c.beam = 0.0;
  CHECK_THROWS_AS(Decoder(w, c), UsageError);
  c = Config();
  c.lattice_beam = -1.0;
  CHECK_THROWS_AS(Decoder(w, c), UsageError);
  c = Config();
  c.num_shards = 0;
  CHECK_THROWS_AS(Decoder(w, c), UsageError);
  c = Config();
  c.group_size = 0;
  CHECK_THROWS_AS(Decoder(w, c), UsageError);
  CHECK_THROWS_AS(DecodeUtterance(w, ParseCosts("1 1\n0.5\n"), Config()), UsageError);
}

TEST_CASE("matches the serial decoder on random instances") {
  int compared_words = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const RandomInstance inst = GenerateInstance(seed);
    DecodeConfig c = Config(1 + seed % 4, seed % 2 ? SchedulerKind::kStatic
                                                   : SchedulerKind::kDynamic);
    c.beam = 4.0 + static_cast<double>(seed % 7);
    c.prune_interval = 1 + seed % 5;
    SerialResult s;
    try {
      s = SerialDecode(inst.fst, inst.costs, c);
    } catch (const DecodeFailure &) {
      CHECK_THROWS_AS(DecodeUtterance(inst.fst, inst.costs, c), DecodeFailure);
      continue;
    }
    const DecodeResult r = DecodeUtterance(inst.fst, inst.costs, c);
    INFO("seed " << seed);
    CHECK(std::abs(r.best_cost - s.best_cost) <= 1e-4);
    CHECK(r.partial == s.partial);
    if (s.margin > 1e-3) {
      ++compared_words;
      CHECK(r.words == s.words);
      CHECK(r.alignment == s.alignment);
    }
    CHECK(r.alignment.size() == inst.costs.num_frames());
  }
  CHECK(compared_words > 100);
}

TEST_CASE("winning packs do not depend on workers or scheduler") {
  for (std::uint64_t seed = 300; seed < 330; ++seed) {
    const RandomInstance inst = GenerateInstance(seed);
    std::vector<std::vector<std::pair<StateId, PackedToken>>> reference;
    bool have_reference = false;
    for (unsigned workers : {1u, 2u, 4u, 8u})
      for (SchedulerKind kind : {SchedulerKind::kStatic, SchedulerKind::kDynamic}) {
        DecodeConfig c = Config(workers, kind);
        c.group_size = 2;
        DecodeTrace trace;
        try {
          Decoder(inst.fst, c).Decode(inst.costs, &trace);
        } catch (const DecodeFailure &) {
          continue;
        }
        if (!have_reference) {
          reference = trace.winners;
          have_reference = true;
        } else {
          CHECK(trace.winners == reference);
        }
      }
  }
}

TEST_CASE("each arc record is written at most once per pass") {
  for (std::uint64_t seed = 400; seed < 420; ++seed) {
    const RandomInstance inst = GenerateInstance(seed);
    DecodeTrace trace;
    trace.count_arc_writes = true;
    try {
      Decoder(inst.fst, Config(4)).Decode(inst.costs, &trace);
    } catch (const DecodeFailure &) {
      continue;
    }
    CHECK(trace.max_arc_writes_per_pass <= 1);
    for (std::uint32_t r : trace.epsilon_rounds) CHECK(r <= inst.fst.num_states());
  }
}

TEST_CASE("widening the beam never raises the best cost") {
  for (std::uint64_t seed = 500; seed < 540; ++seed) {
    const RandomInstance inst = GenerateInstance(seed);
    double previous = kInfCost;
    for (double beam : {2.0, 4.0, 8.0, 16.0}) {
      DecodeConfig c = Config();
      c.beam = beam;
      DecodeResult r;
      try {
        r = DecodeUtterance(inst.fst, inst.costs, c);
      } catch (const DecodeFailure &) {
        continue;
      }
      // A partial result carries no final cost and is not comparable.
      if (r.partial) continue;
      CHECK(r.best_cost <= previous + 1e-9);
      previous = r.best_cost;
    }
  }
}

TEST_CASE("overlapped pruning gives the same lattice as inline pruning") {
  for (std::uint64_t seed = 600; seed < 630; ++seed) {
    const RandomInstance inst = GenerateInstance(seed);
    DecodeConfig c = Config(2);
    c.prune_interval = 2;
    c.lattice_beam = 2.0;
    try {
      const DecodeResult a = DecodeUtterance(inst.fst, inst.costs, c);
      c.overlap_pruning = false;
      const DecodeResult b = DecodeUtterance(inst.fst, inst.costs, c);
      CHECK(FinalizeLattice(a.lattice) == FinalizeLattice(b.lattice));
    } catch (const DecodeFailure &) {
    }
  }
}

TEST_CASE("batch decoding equals one-by-one decoding") {
  std::vector<CostMatrix> utts;
  const RandomInstance base = GenerateInstance(77);
  for (std::uint64_t i = 0; i < 6; ++i) {
    RandomInstanceOptions o;
    utts.push_back(SyntheticCosts(5 + i, base.costs.num_labels(), 1000 + i));
  }
  DecodeConfig c = Config();
  const auto batch = DecodeBatch(base.fst, utts, c, 3);
  REQUIRE(batch.size() == utts.size());
  for (std::size_t i = 0; i < utts.size(); ++i) {
    try {
      const DecodeResult one = DecodeUtterance(base.fst, utts[i], c);
      REQUIRE(batch[i].result.has_value());
      CHECK(batch[i].result->words == one.words);
      CHECK(batch[i].result->best_cost == one.best_cost);
      CHECK(FinalizeLattice(batch[i].result->lattice) == FinalizeLattice(one.lattice));
    } catch (const DecodeFailure &) {
      CHECK(batch[i].error != nullptr);
    }
  }
}

}  // TEST_SUITE

}  // namespace
}  // namespace pvd
