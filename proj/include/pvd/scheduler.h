// include/pvd/scheduler.h

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

#ifndef PVD_SCHEDULER_H_
#define PVD_SCHEDULER_H_

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pvd/thread_pool.h"

namespace pvd {

enum class SchedulerKind { kStatic, kDynamic };

std::string ToString(SchedulerKind kind);
// Accepts "static" / "dynamic"; throws UsageError otherwise.
SchedulerKind ParseSchedulerKind(const std::string &name);

// Hands out token indices [0, total) exactly once each across any number of
// concurrent claimers.
class Dispatcher {
 public:
  explicit Dispatcher(std::uint32_t total = 0) : total_(total) {}

  void Reset(std::uint32_t total) {
    total_ = total;
    next_.store(0, std::memory_order_relaxed);
  }

  // std::nullopt once every index has been handed out.
  std::optional<std::uint32_t> ClaimNext() {
    const std::uint64_t i = next_.fetch_add(1, std::memory_order_relaxed);
    if (i >= total_) return std::nullopt;
    return static_cast<std::uint32_t>(i);
  }

  std::uint32_t total() const { return total_; }

 private:
  std::atomic<std::uint64_t> next_{0};
  std::uint32_t total_;
};

struct ArcRange {
  std::uint64_t begin = 0;
  std::uint64_t end = 0;
  std::uint64_t size() const { return end - begin; }
};

// Splits the arcs of all active tokens into per-worker contiguous ranges of
// (nearly) equal size, using prefix sums over the tokens' out-degrees.
class StaticPartition {
 public:
  static StaticPartition Build(std::span<const std::uint32_t> out_degrees,
                               unsigned num_workers);

  std::span<const std::uint64_t> prefix() const { return prefix_; }
  const std::vector<ArcRange> &ranges() const { return ranges_; }
  std::uint64_t total_arcs() const { return prefix_.back(); }

  struct Location {
    std::uint32_t token;
    std::uint32_t offset;  // arc index local to the token
    bool operator==(const Location &) const = default;
  };
  // Token owning global arc index g (< total_arcs()) and the local offset.
  Location Locate(std::uint64_t g) const;

 private:
  std::vector<std::uint64_t> prefix_;
  std::vector<ArcRange> ranges_;
};

// Runs body(worker, token, local_begin, local_end) over every arc of every
// token, with the per-token degree given by degree(token). Static mode walks
// each worker's partition range; dynamic mode lets each worker claim whole
// tokens from a Dispatcher and walk their arcs in chunks of `group_size`.
// Returns the nanoseconds spent building the static partition (0 for dynamic).
template <typename DegreeFn, typename Body>
std::int64_t DistributeArcs(ThreadPool &pool, SchedulerKind kind,
                            std::uint32_t num_tokens, std::uint32_t group_size,
                            DegreeFn &&degree, Body &&body) {
  if (num_tokens == 0) return 0;
  if (kind == SchedulerKind::kStatic) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<std::uint32_t> degrees(num_tokens);
    for (std::uint32_t i = 0; i < num_tokens; ++i) degrees[i] = degree(i);
    const StaticPartition part = StaticPartition::Build(degrees, pool.size());
    const auto build_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(
                              std::chrono::steady_clock::now() - t0)
                              .count();
    pool.Run([&](unsigned w) {
      const ArcRange r = part.ranges()[w];
      if (r.size() == 0) return;
      auto loc = part.Locate(r.begin);
      std::uint64_t g = r.begin;
      std::uint32_t tok = loc.token;
      std::uint32_t off = loc.offset;
      while (g < r.end) {
        const std::uint64_t tok_end = part.prefix()[tok + 1];
        const std::uint64_t stop = std::min(tok_end, r.end);
        const auto n = static_cast<std::uint32_t>(stop - g);
        if (n > 0) body(w, tok, off, off + n);
        g = stop;
        ++tok;
        off = 0;
      }
    });
    return build_ns;
  }

  Dispatcher dispatcher(num_tokens);
  const std::uint32_t chunk = std::max<std::uint32_t>(group_size, 1);
  pool.Run([&](unsigned w) {
    while (auto i = dispatcher.ClaimNext()) {
      const std::uint32_t deg = degree(*i);
      for (std::uint32_t b = 0; b < deg; b += chunk)
        body(w, *i, b, std::min(deg, b + chunk));
    }
  });
  return 0;
}

}  // namespace pvd

#endif  // PVD_SCHEDULER_H_
