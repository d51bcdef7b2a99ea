// tests/wfst_test.cc

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

#include <sstream>
#include <vector>

#include "doctest.h"
#include "pvd/error.h"
#include "pvd/synth.h"
#include "pvd/wfst.h"
#include "test_util.h"

namespace pvd {
namespace {

using testing::kW1;
using testing::ParseWfst;

std::string WriteText(const Wfst &w) {
  std::ostringstream out;
  WriteWfstText(w, out);
  return out.str();
}

TEST_SUITE("wfst") {

TEST_CASE("load the two-arc graph") {
  const Wfst w = ParseWfst(kW1);
  CHECK(w.num_states() == 3);
  CHECK(w.num_arcs() == 2);
  CHECK(w.start() == 0);
  CHECK(w.FinalCost(1) == 0.0f);
  CHECK(w.FinalCost(2) == 0.0f);
  CHECK_FALSE(w.IsFinal(0));
  CHECK(w.MaxInputLabel() == 2);
  const auto arcs = w.OutArcs(0);
  REQUIRE(arcs.size() == 2);
  CHECK(arcs[0] == Arc{0, 1, 1, 1, 0.5f, 0});
  CHECK(arcs[1] == Arc{0, 2, 2, 2, 1.0f, 1});
  CHECK(w.OutArcs(1).empty());
  CHECK_THROWS_AS(w.OutArcs(3), UsageError);
}

TEST_CASE("weight and final cost default to zero") {
  const Wfst w = ParseWfst("0 1 0 0 0.0\n1\n");
  CHECK(w.num_arcs() == 1);
  CHECK_FALSE(w.arc(0).emitting());
  CHECK(w.FinalCost(1) == 0.0f);
  CHECK(ParseWfst("0 1 1 1\n1 0.5\n").arc(0).weight == 0.0f);
}

TEST_CASE("start state is the source of the first line") {
  const Wfst w = ParseWfst("2 0 1 1 0.5\n0 1 1 1 0.5\n1 0.0\n");
  CHECK(w.start() == 2);
  CHECK(w.arc(0).src == 0);  // ids follow the source-sorted order
  CHECK(w.arc(1).src == 2);
}

TEST_CASE("parse and validation errors") {
  try {
    ParseWfst("0 1 x 1 0.5\n1\n");
    FAIL("expected a parse error");
  } catch (const ParseError &e) {
    CHECK(e.line() == 1);
  }
  try {
    ParseWfst("0 1 1 1 0.5\n1 0.0\n0 1 1\n");
    FAIL("expected a parse error");
  } catch (const ParseError &e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(ParseWfst("0 1 1 1 -0.5\n1\n"), ValidationError);
  CHECK_THROWS_AS(ParseWfst("0 1 1 1 0.5\n"), ValidationError);
  CHECK_THROWS_AS(ParseWfst(""), ValidationError);
  CHECK_THROWS_AS(ParseWfst("0 1 1 1 nan\n1\n"), ValidationError);
  CHECK_THROWS_AS(ParseWfst("0 1 1 1 0.5\n1 inf\n"), ValidationError);
}

TEST_CASE("out-arc ranges tile the arc array") {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const Wfst w = GenerateInstance(seed).fst;
    std::vector<Arc> concat;
    for (StateId s = 0; s < w.num_states(); ++s) {
      for (const Arc &a : w.OutArcs(s)) CHECK(a.src == s);
      const auto r = w.OutArcs(s);
      concat.insert(concat.end(), r.begin(), r.end());
    }
    CHECK(concat == std::vector<Arc>(w.arcs().begin(), w.arcs().end()));
    CHECK(w.arc_offsets().back() == w.num_arcs());
    for (std::size_t i = 0; i < w.num_arcs(); ++i) CHECK(w.arc(i).id == i);
  }
}

TEST_CASE("text round trip") {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const Wfst w = GenerateInstance(seed).fst;
    const std::string text = WriteText(w);
    const Wfst back = ParseWfst(text);
    CHECK(back.num_states() <= w.num_states());  // trailing isolated states vanish
    CHECK(back.start() == w.start());
    CHECK(back.Finals() == w.Finals());
    CHECK(std::vector<Arc>(back.arcs().begin(), back.arcs().end()) ==
          std::vector<Arc>(w.arcs().begin(), w.arcs().end()));
    CHECK(WriteText(back) == text);
  }
}

TEST_CASE("symbol table") {
  std::istringstream in("one\t1\ntwo 2\n\n");
  const SymbolTable t = SymbolTable::Load(in);
  CHECK(t.size() == 2);
  CHECK(t.Find(1) == "one");
  CHECK(t.Find("two") == Label{2});
  CHECK_FALSE(t.Find(3).has_value());
  std::istringstream bad("one\n");
  CHECK_THROWS_AS(SymbolTable::Load(bad), ParseError);
}

}  // TEST_SUITE

}  // namespace
}  // namespace pvd
