// src/scheduler.cc

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

#include "pvd/scheduler.h"

#include "pvd/error.h"

namespace pvd {

std::string ToString(SchedulerKind kind) {
  return kind == SchedulerKind::kStatic ? "static" : "dynamic";
}

SchedulerKind ParseSchedulerKind(const std::string &name) {
  if (name == "static") return SchedulerKind::kStatic;
  if (name == "dynamic") return SchedulerKind::kDynamic;
  throw UsageError("unknown scheduler '" + name + "' (static|dynamic)");
}

StaticPartition StaticPartition::Build(std::span<const std::uint32_t> out_degrees,
                                       unsigned num_workers) {
  if (num_workers == 0) throw UsageError("worker count must be positive");
  StaticPartition p;
  p.prefix_.resize(out_degrees.size() + 1);
  p.prefix_[0] = 0;
  for (std::size_t i = 0; i < out_degrees.size(); ++i)
    p.prefix_[i + 1] = p.prefix_[i] + out_degrees[i];

  // The first (A mod P) workers take one extra arc, so range sizes differ by
  // at most one.
  const std::uint64_t total = p.prefix_.back();
  const std::uint64_t base = total / num_workers;
  const std::uint64_t extra = total % num_workers;
  p.ranges_.resize(num_workers);
  std::uint64_t begin = 0;
  for (unsigned w = 0; w < num_workers; ++w) {
    const std::uint64_t size = base + (w < extra ? 1 : 0);
    p.ranges_[w] = ArcRange{begin, begin + size};
    begin += size;
  }
  return p;
}

StaticPartition::Location StaticPartition::Locate(std::uint64_t g) const {
  if (g >= total_arcs())
    throw UsageError("arc index " + std::to_string(g) + " out of range");
  // Greatest i with prefix[i] <= g; zero-degree tokens are skipped because
  // upper_bound lands past every equal prefix entry.
  auto it = std::upper_bound(prefix_.begin(), prefix_.end(), g);
  const auto token = static_cast<std::uint32_t>(it - prefix_.begin() - 1);
  return Location{token, static_cast<std::uint32_t>(g - prefix_[token])};
}

}  // namespace pvd
