// include/pvd/packed_token.h

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

#ifndef PVD_PACKED_TOKEN_H_
#define PVD_PACKED_TOKEN_H_

#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

#include "pvd/error.h"
#include "pvd/wfst.h"

namespace pvd {

// Order-preserving map from float to uint32: negative values get every bit
// flipped, non-negative values get the sign bit set. For finite a, b:
// a < b  <=>  EncodeCost(a) < EncodeCost(b).
constexpr std::uint32_t EncodeCost(float cost) {
  const std::uint32_t bits = std::bit_cast<std::uint32_t>(cost);
  return (bits & 0x80000000u) ? ~bits : (bits | 0x80000000u);
}

constexpr float DecodeCost(std::uint32_t encoded) {
  const std::uint32_t bits =
      (encoded & 0x80000000u) ? (encoded & 0x7fffffffu) : ~encoded;
  return std::bit_cast<float>(bits);
}

// A token before recombination: encoded cost in the high word, arc id in the
// low word, so unsigned comparison orders by (cost, arc id).
struct PackedToken {
  std::uint64_t bits = kEmpty;

  // All ones; larger than any pack of a finite cost.
  static constexpr std::uint64_t kEmpty = ~std::uint64_t{0};

  bool empty() const { return bits == kEmpty; }
  std::uint32_t cost_bits() const { return static_cast<std::uint32_t>(bits >> 32); }
  float cost() const { return DecodeCost(cost_bits()); }
  ArcId arc() const { return static_cast<ArcId>(bits); }

  auto operator<=>(const PackedToken &) const = default;
};

// Requires a finite, non-negative cost. -0.0 is folded into +0.0 so that the
// two zeros pack identically.
inline PackedToken Pack(float cost, ArcId arc) {
  if (!std::isfinite(cost) || cost < 0.0f)
    throw UsageError("cannot pack cost " + std::to_string(cost));
  if (cost == 0.0f) cost = 0.0f;
  return PackedToken{(std::uint64_t{EncodeCost(cost)} << 32) | arc};
}

struct UnpackedToken {
  float cost;
  ArcId arc;
};

// std::nullopt for the empty sentinel ("no token at this state").
inline std::optional<UnpackedToken> Unpack(PackedToken p) {
  if (p.empty()) return std::nullopt;
  return UnpackedToken{p.cost(), p.arc()};
}

// Atomically stores min(*word, value) and returns the previous contents.
inline std::uint64_t AtomicFetchMin(std::atomic<std::uint64_t> &word,
                                    std::uint64_t value) {
  std::uint64_t old = word.load(std::memory_order_relaxed);
  while (value < old &&
         !word.compare_exchange_weak(old, value, std::memory_order_acq_rel,
                                     std::memory_order_relaxed)) {
  }
  return old;
}

}  // namespace pvd

#endif  // PVD_PACKED_TOKEN_H_
