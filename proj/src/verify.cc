// src/verify.cc

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

#include "pvd/verify.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "pvd/error.h"
#include "pvd/lattice.h"
#include "pvd/reference.h"
#include "pvd/thread_pool.h"

namespace pvd {

std::uint64_t InstanceSeed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finaliser over the pair.
  std::uint64_t z = seed * 0x9E3779B97F4A7C15ull + index + 1;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

namespace {

template <typename T>
std::string Join(const std::vector<T> &v) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? " " : "") << v[i];
  out << ']';
  return out.str();
}

CheckOutcome Fail(const std::string &detail) {
  CheckOutcome o;
  o.ok = false;
  o.detail = detail;
  return o;
}

}  // namespace

CheckOutcome CheckDecodeEquivalence(const RandomInstance &inst, const DecodeConfig &config,
                                    const Tolerances &tol) {
  SerialResult serial;
  bool serial_failed = false;
  try {
    serial = SerialDecode(inst.fst, inst.costs, config);
  } catch (const DecodeFailure &) {
    serial_failed = true;
  }
  DecodeResult parallel;
  try {
    parallel = DecodeUtterance(inst.fst, inst.costs, config);
  } catch (const DecodeFailure &e) {
    if (serial_failed) {
      CheckOutcome o;
      o.skipped = true;
      return o;
    }
    return Fail(std::string("parallel decode failed: ") + e.what());
  }
  if (serial_failed) return Fail("serial decode failed but parallel succeeded");

  std::ostringstream why;
  if (!(std::abs(parallel.best_cost - serial.best_cost) <= tol.cost)) {
    why << "best cost " << parallel.best_cost << " vs serial " << serial.best_cost;
    return Fail(why.str());
  }
  if (parallel.partial != serial.partial) return Fail("partial flags differ");
  CheckOutcome o;
  if (serial.margin > tol.word_margin) {
    o.words_compared = true;
    if (parallel.words != serial.words)
      return Fail("words " + Join(parallel.words) + " vs serial " + Join(serial.words));
    if (parallel.alignment != serial.alignment) return Fail("alignments differ");
  }
  return o;
}

CheckOutcome CheckPruning(const RandomInstance &inst, const DecodeConfig &config,
                          double lattice_beam, const Tolerances &tol) {
  DecodeConfig keep_all = config;
  keep_all.lattice_beam = 1e30;
  DecodeResult r;
  try {
    r = DecodeUtterance(inst.fst, inst.costs, keep_all);
  } catch (const DecodeFailure &) {
    CheckOutcome o;
    o.skipped = true;
    return o;
  }
  const std::uint32_t T = r.lattice.num_frames();
  const std::vector<double> terminal = FinalTerminalCosts(r.lattice);
  const std::vector<double> brute = BruteForceExtraCosts(r.lattice, T, terminal);

  ThreadPool pool(config.num_workers);
  Lattice lat = r.lattice;
  PruneLattice(lat, T, terminal, lattice_beam, pool);

  std::vector<const LatticeArc *> arcs;
  lat.ForEachArc(T, [&](const LatticeArc &a) { arcs.push_back(&a); });
  if (arcs.size() != brute.size()) return Fail("arc counts differ");

  bool near_edge = false;
  for (double b : brute) near_edge |= std::abs(b - lattice_beam) <= tol.beam_guard;
  std::ostringstream why;
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    const double p = arcs[i]->extra_cost, b = brute[i];
    if (std::isinf(b) != std::isinf(p) ||
        (!std::isinf(b) && !(std::abs(p - std::max(0.0, b)) <= tol.extra_cost))) {
      why << "arc " << i << " extra cost " << p << " vs brute force " << b;
      return Fail(why.str());
    }
    if (!near_edge && arcs[i]->pruned != (b > lattice_beam)) {
      why << "arc " << i << " survivor decision differs (extra " << b << ")";
      return Fail(why.str());
    }
  }

  // Idempotence: a second pass with the same beam changes nothing.
  std::vector<double> extra_before;
  std::vector<bool> pruned_before;
  for (const LatticeArc *a : arcs) {
    extra_before.push_back(a->extra_cost);
    pruned_before.push_back(a->pruned);
  }
  const PruneStats again = PruneLattice(lat, T, terminal, lattice_beam, pool);
  if (again.arcs_pruned != 0) return Fail("second prune removed more arcs");
  for (std::size_t i = 0; i < arcs.size(); ++i)
    if (arcs[i]->extra_cost != extra_before[i] || arcs[i]->pruned != pruned_before[i])
      return Fail("second prune changed arc " + std::to_string(i));
  return CheckOutcome{};
}

}  // namespace pvd
