// tests/reference_test.cc

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

#include <cmath>
#include <vector>

#include "doctest.h"
#include "pvd/decoder.h"
#include "pvd/error.h"
#include "pvd/reference.h"
#include "pvd/synth.h"
#include "test_util.h"

namespace pvd {
namespace {

using testing::MakeArc;
using testing::MakeChain;
using testing::MakeDiamond;

TEST_SUITE("reference") {

TEST_CASE("serial decode of the two-arc graph") {
  const SerialResult r = SerialDecode(testing::ParseWfst(testing::kW1),
                                      testing::ParseCosts(testing::kW1Costs),
                                      DecodeConfig{});
  CHECK(r.words == std::vector<Label>{1});
  CHECK(r.best_cost == doctest::Approx(0.8).epsilon(1e-6));
  CHECK(r.margin == doctest::Approx(0.3).epsilon(1e-6));
  CHECK_FALSE(r.partial);
}

TEST_CASE("a zero beam still yields a complete best-first path") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const RandomInstance inst = GenerateInstance(seed);
    DecodeConfig zero;
    zero.beam = 0.0;
    SerialResult narrow;
    try {
      narrow = SerialDecode(inst.fst, inst.costs, zero);
    } catch (const DecodeFailure &) {
      continue;
    }
    // One token per frame, so exactly T emitting steps and one token per
    // frame unless equal-cost states tie.
    CHECK(narrow.alignment.size() == inst.costs.num_frames());
    CHECK(narrow.tokens >= inst.costs.num_frames() + 1);
    DecodeConfig wide;
    wide.beam = 1000.0;
    const SerialResult full = SerialDecode(inst.fst, inst.costs, wide);
    if (!narrow.partial && !full.partial) CHECK(full.best_cost <= narrow.best_cost + 1e-9);
  }
}

TEST_CASE("brute force extra costs: single path is all zeros") {
  const Lattice lat = MakeChain(5);
  for (double e : BruteForceExtraCosts(lat, 5, FinalTerminalCosts(lat)))
    CHECK(e == doctest::Approx(0.0));
}

TEST_CASE("brute force extra costs: diamond") {
  const Lattice lat = MakeDiamond();
  const auto e = BruteForceExtraCosts(lat, 2, FinalTerminalCosts(lat));
  REQUIRE(e.size() == 4);
  CHECK(e[0] == doctest::Approx(0.0));
  CHECK(e[1] == doctest::Approx(0.4));
  CHECK(e[2] == doctest::Approx(0.0));
  CHECK(e[3] == doctest::Approx(0.4));
}

TEST_CASE("brute force rejects cycles") {
  Lattice lat(1);
  lat.AddFrame(0, {LatticeNode{0, 0.0}, LatticeNode{1, 0.0}}, {},
               {MakeArc({0, 0}, {0, 1}, 0, 0, 0.0f, 0.0f),
                MakeArc({0, 1}, {0, 0}, 0, 0, 0.0f, 0.0f)});
  lat.AddFrame(1, {LatticeNode{2, 1.0}}, {MakeArc({0, 1}, {1, 0}, 1, 1, 1.0f, 0.0f)}, {});
  lat.set_final_costs({0.0f});
  CHECK_THROWS_AS(BruteForceExtraCosts(lat, 1, FinalTerminalCosts(lat)), UsageError);
}

TEST_CASE("brute force extra costs are non-negative on decoded lattices") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const RandomInstance inst = GenerateInstance(seed);
    DecodeResult r;
    try {
      r = DecodeUtterance(inst.fst, inst.costs, DecodeConfig{});
    } catch (const DecodeFailure &) {
      continue;
    }
    const std::uint32_t T = r.lattice.num_frames();
    for (double e : BruteForceExtraCosts(r.lattice, T, FinalTerminalCosts(r.lattice)))
      CHECK(e >= -1e-6);
  }
}

TEST_CASE("parallel pruning agrees with brute force") {
  ThreadPool pool(4);
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const RandomInstance inst = GenerateInstance(seed);
    DecodeConfig c;
    c.lattice_beam = 1e9;  // keep everything; extra costs are still computed
    DecodeResult r;
    try {
      r = DecodeUtterance(inst.fst, inst.costs, c);
    } catch (const DecodeFailure &) {
      continue;
    }
    const std::uint32_t T = r.lattice.num_frames();
    const auto brute = BruteForceExtraCosts(r.lattice, T, FinalTerminalCosts(r.lattice));
    std::size_t i = 0;
    r.lattice.ForEachArc(T, [&](const LatticeArc &a) {
      const double b = brute[i++];
      if (std::isinf(b)) {
        CHECK(std::isinf(a.extra_cost));
      } else {
        CHECK(std::abs(a.extra_cost - std::max(0.0, b)) <= 1e-4);
      }
    });
  }
}

}  // TEST_SUITE

}  // namespace
}  // namespace pvd
