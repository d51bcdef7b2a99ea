// include/pvd/sharded_store.h

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

#ifndef PVD_SHARDED_STORE_H_
#define PVD_SHARDED_STORE_H_

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "pvd/error.h"

namespace pvd {

// K pre-allocated append-only vectors. A push claims a slot with one atomic
// fetch-add on the chosen shard's counter, so pushes from different workers
// contend only when they map to the same shard. Shard choice is
// worker_id mod K.
//
// Boundaries snapshot every shard's length; Collect(a, b) returns what was
// pushed between boundary a and boundary b (boundary 0 is the empty store),
// shard 0 first, slots in order.
template <typename T>
class ShardedArcStore {
 public:
  ShardedArcStore(unsigned num_shards, std::size_t shard_capacity)
      : capacity_(shard_capacity), shards_(num_shards) {
    if (num_shards == 0) throw UsageError("shard count must be positive");
    for (auto &s : shards_) s.data.reset(new T[capacity_]);
  }

  unsigned num_shards() const { return static_cast<unsigned>(shards_.size()); }
  std::size_t shard_capacity() const { return capacity_; }

  // Returns the slot index inside the shard. Safe for concurrent callers.
  std::size_t Push(const T &value, unsigned worker_id) {
    Shard &s = shards_[worker_id % shards_.size()];
    const std::size_t idx = s.count.fetch_add(1, std::memory_order_relaxed);
    if (idx >= capacity_)
      throw CapacityError("lattice arc shard full (capacity " +
                          std::to_string(capacity_) +
                          "); raise --max-lattice-arcs");
    s.data[idx] = value;
    return idx;
  }

  std::size_t shard_size(unsigned k) const {
    return std::min(shards_[k].count.load(std::memory_order_acquire), capacity_);
  }

  std::size_t size() const {
    std::size_t n = 0;
    for (unsigned k = 0; k < num_shards(); ++k) n += shard_size(k);
    return n;
  }

  // Requires quiescence (no concurrent pushes).
  void MarkBoundary() {
    std::vector<std::size_t> lens(shards_.size());
    for (unsigned k = 0; k < num_shards(); ++k) lens[k] = shard_size(k);
    marks_.push_back(std::move(lens));
  }
  std::size_t num_boundaries() const { return marks_.size() + 1; }

  std::vector<T> Collect(std::size_t from_boundary, std::size_t to_boundary) const {
    if (from_boundary > to_boundary || to_boundary >= num_boundaries())
      throw UsageError("bad boundary range");
    std::vector<T> out;
    for (unsigned k = 0; k < num_shards(); ++k) {
      const std::size_t b = BoundaryLength(from_boundary, k);
      const std::size_t e = BoundaryLength(to_boundary, k);
      out.insert(out.end(), shards_[k].data.get() + b, shards_[k].data.get() + e);
    }
    return out;
  }

  // Everything currently stored, in collection order.
  std::vector<T> CollectAll() const {
    std::vector<T> out;
    out.reserve(size());
    for (unsigned k = 0; k < num_shards(); ++k)
      out.insert(out.end(), shards_[k].data.get(),
                 shards_[k].data.get() + shard_size(k));
    return out;
  }

  // Visits every stored element in collection order without copying.
  template <typename Fn>
  void ForEach(Fn &&fn) const {
    for (unsigned k = 0; k < num_shards(); ++k) {
      const std::size_t n = shard_size(k);
      for (std::size_t i = 0; i < n; ++i) fn(shards_[k].data[i]);
    }
  }

  void Clear() {
    for (auto &s : shards_) s.count.store(0, std::memory_order_relaxed);
    marks_.clear();
  }

 private:
  struct alignas(64) Shard {
    std::atomic<std::size_t> count{0};
    std::unique_ptr<T[]> data;
  };

  std::size_t BoundaryLength(std::size_t boundary, unsigned k) const {
    return boundary == 0 ? 0 : marks_[boundary - 1][k];
  }

  std::size_t capacity_;
  std::vector<Shard> shards_;
  std::vector<std::vector<std::size_t>> marks_;
};

}  // namespace pvd

#endif  // PVD_SHARDED_STORE_H_
