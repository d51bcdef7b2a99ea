// tests/eval_test.cc

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
#include <functional>
#include <random>
#include <vector>

#include "doctest.h"
#include "pvd/decoder.h"
#include "pvd/error.h"
#include "pvd/eval.h"
#include "pvd/synth.h"
#include "test_util.h"

namespace pvd {
namespace {

using Words = std::vector<Label>;

// Plain recursive edit distance, independent of the table-filling version.
std::uint32_t EditDistance(const Words &a, const Words &b) {
  std::vector<std::vector<int>> memo(a.size() + 1, std::vector<int>(b.size() + 1, -1));
  std::function<int(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t j) {
    if (i == a.size()) return static_cast<int>(b.size() - j);
    if (j == b.size()) return static_cast<int>(a.size() - i);
    int &m = memo[i][j];
    if (m >= 0) return m;
    m = std::min({go(i + 1, j + 1) + (a[i] != b[j]), go(i + 1, j) + 1, go(i, j + 1) + 1});
    return m;
  };
  return static_cast<std::uint32_t>(go(0, 0));
}

Words RandomWords(std::mt19937 &rng) {
  Words w(rng() % 11);
  for (auto &x : w) x = 1 + rng() % 4;
  return w;
}

FinalLattice DiamondWords() {
  FinalLattice lat;
  lat.num_nodes = 4;
  lat.start = 0;
  lat.finals = {{3, 0.0f}};
  lat.arcs = {FinalArc{0, 1, 1, 1, 0.5f, 0.0f}, FinalArc{0, 2, 2, 2, 0.7f, 0.0f},
              FinalArc{1, 3, 1, 0, 0.5f, 0.0f}, FinalArc{2, 3, 2, 0, 0.7f, 0.0f}};
  return lat;
}

TEST_SUITE("eval") {

TEST_CASE("word error rate examples") {
  const Words ref = {1, 2, 3};
  const WerResult same = Wer(ref, ref);
  CHECK(same.errors() == 0);
  CHECK(same.percent == 0.0);
  const WerResult ins = Wer(Words{1, 2, 3}, Words{1, 3});
  CHECK(ins.insertions == 1);
  CHECK(ins.substitutions == 0);
  CHECK(ins.deletions == 0);
  CHECK(ins.percent == doctest::Approx(50.0));
  const WerResult del = Wer(Words{}, Words{4, 5});
  CHECK(del.deletions == 2);
  CHECK(del.percent == doctest::Approx(100.0));
  CHECK_THROWS_AS(Wer(Words{1}, Words{}), UsageError);
}

TEST_CASE("substitution is preferred over an insertion plus a deletion") {
  const WerResult r = Wer(Words{1, 9}, Words{1, 8});
  CHECK(r.substitutions == 1);
  CHECK(r.insertions == 0);
  CHECK(r.deletions == 0);
}

TEST_CASE("error counts match an independent edit distance") {
  std::mt19937 rng(11);
  for (int i = 0; i < 1000; ++i) {
    Words h = RandomWords(rng), r = RandomWords(rng);
    if (r.empty()) r.push_back(1);
    CHECK(Wer(h, r).errors() == EditDistance(h, r));
  }
}

TEST_CASE("edit distance is a metric") {
  std::mt19937 rng(12);
  for (int i = 0; i < 300; ++i) {
    Words a = RandomWords(rng), b = RandomWords(rng), c = RandomWords(rng);
    a.push_back(1);
    b.push_back(2);
    c.push_back(3);
    CHECK(Wer(a, b).errors() == Wer(b, a).errors());
    CHECK(Wer(a, c).errors() <= Wer(a, b).errors() + Wer(b, c).errors());
  }
}

TEST_CASE("oracle error rate picks the closest path") {
  const FinalLattice lat = DiamondWords();
  CHECK(OracleWer(lat, Words{2}).errors == 0);
  CHECK(OracleWer(lat, Words{1}).errors == 0);
  CHECK(OracleWer(lat, Words{3}).errors == 1);
  CHECK(OracleWer(lat, Words{2, 2, 2}).errors == 2);
  CHECK(OracleWer(lat, Words{2, 2}).percent == doctest::Approx(50.0));
  CHECK_THROWS_AS(OracleWer(lat, Words{}), UsageError);
  FinalLattice broken = lat;
  broken.finals = {{1, 0.0f}};
  broken.arcs.pop_back();
  broken.arcs.pop_back();
  CHECK(OracleWer(broken, Words{1}).errors == 0);
  broken.finals = {{3, 0.0f}};
  CHECK_THROWS_AS(OracleWer(broken, Words{1}), DecodeFailure);
}

TEST_CASE("oracle error rate never exceeds the one-best error rate") {
  std::mt19937 rng(13);
  for (std::uint64_t seed = 1; seed <= 80; ++seed) {
    const RandomInstance inst = GenerateInstance(seed);
    DecodeResult r;
    try {
      r = DecodeUtterance(inst.fst, inst.costs, DecodeConfig{});
    } catch (const DecodeFailure &) {
      continue;
    }
    if (r.partial) continue;
    Words ref = RandomWords(rng);
    ref.push_back(1 + rng() % 10);
    const FinalLattice lat = FinalizeLattice(r.lattice);
    CHECK(OracleWer(lat, ref).errors <= Wer(r.words, ref).errors());
    // The one-best words themselves are always in the lattice.
    if (!r.words.empty()) CHECK(OracleWer(lat, r.words).errors == 0);
  }
}

TEST_CASE("lattice density") {
  FinalLattice lat;
  lat.num_nodes = 2;
  lat.finals = {{1, 0.0f}};
  for (int i = 0; i < 30; ++i) lat.arcs.push_back(FinalArc{0, 1, 1, 1, 0.0f, 0.0f});
  CHECK(LatticeDensity(lat, 1) == 30.0);
  CHECK(LatticeDensity(FinalLattice{}, 4) == 0.0);
  CHECK_THROWS_AS(LatticeDensity(lat, 0), UsageError);
  CHECK(LatticeFrameCount(lat) == 1);
  CHECK(LatticeFrameCount(DiamondWords()) == 2);
}

TEST_CASE("density grows with the lattice beam") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const RandomInstance inst = GenerateInstance(seed);
    double previous = 0.0;
    for (double beam : {0.0, 1.0, 3.0, 8.0}) {
      DecodeConfig c;
      c.lattice_beam = beam;
      DecodeResult r;
      try {
        r = DecodeUtterance(inst.fst, inst.costs, c);
      } catch (const DecodeFailure &) {
        break;
      }
      const double d = LatticeDensity(FinalizeLattice(r.lattice), inst.costs.num_frames());
      CHECK(d >= previous);
      previous = d;
    }
  }
}

}  // TEST_SUITE

}  // namespace
}  // namespace pvd
