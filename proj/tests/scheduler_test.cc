// tests/scheduler_test.cc

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
#include <atomic>
#include <mutex>
#include <random>
#include <set>
#include <stdexcept>
#include <thread>
#include <vector>

#include "doctest.h"
#include "pvd/error.h"
#include "pvd/scheduler.h"
#include "pvd/sharded_store.h"
#include "pvd/thread_pool.h"

namespace pvd {
namespace {

TEST_SUITE("scheduler") {

TEST_CASE("sequential claims") {
  Dispatcher d(3);
  CHECK(d.ClaimNext() == 0u);
  CHECK(d.ClaimNext() == 1u);
  CHECK(d.ClaimNext() == 2u);
  CHECK_FALSE(d.ClaimNext().has_value());
  CHECK_FALSE(d.ClaimNext().has_value());
  Dispatcher empty(0);
  CHECK_FALSE(empty.ClaimNext().has_value());
}

TEST_CASE("concurrent claims hand out every index once") {
  Dispatcher d(100);
  std::mutex mu;
  std::vector<std::uint32_t> got;
  std::vector<std::thread> threads;
  for (int t = 0; t < 8; ++t)
    threads.emplace_back([&] {
      std::vector<std::uint32_t> mine;
      while (auto i = d.ClaimNext()) mine.push_back(*i);
      std::lock_guard<std::mutex> lock(mu);
      got.insert(got.end(), mine.begin(), mine.end());
    });
  for (auto &t : threads) t.join();
  std::sort(got.begin(), got.end());
  std::vector<std::uint32_t> expect(100);
  for (std::uint32_t i = 0; i < 100; ++i) expect[i] = i;
  CHECK(got == expect);
}

TEST_CASE("static partition example") {
  const std::vector<std::uint32_t> deg = {3, 1, 4, 2};
  const StaticPartition p = StaticPartition::Build(deg, 2);
  CHECK(std::vector<std::uint64_t>(p.prefix().begin(), p.prefix().end()) ==
        std::vector<std::uint64_t>{0, 3, 4, 8, 10});
  REQUIRE(p.ranges().size() == 2);
  CHECK(p.ranges()[0].begin == 0);
  CHECK(p.ranges()[0].end == 5);
  CHECK(p.ranges()[1].begin == 5);
  CHECK(p.ranges()[1].end == 10);
  CHECK(p.Locate(5) == StaticPartition::Location{2, 1});
  CHECK(p.Locate(0) == StaticPartition::Location{0, 0});
  CHECK(p.Locate(9) == StaticPartition::Location{3, 1});
  CHECK_THROWS_AS(p.Locate(10), UsageError);
}

TEST_CASE("single worker and equal degrees") {
  const std::vector<std::uint32_t> deg = {2, 2, 2, 2};
  const StaticPartition one = StaticPartition::Build(deg, 1);
  CHECK(one.ranges()[0].begin == 0);
  CHECK(one.ranges()[0].end == 8);
  const StaticPartition four = StaticPartition::Build(deg, 4);
  for (const auto &r : four.ranges()) CHECK(r.size() == 2);
  const StaticPartition none = StaticPartition::Build(std::vector<std::uint32_t>{}, 3);
  for (const auto &r : none.ranges()) CHECK(r.size() == 0);
  CHECK_THROWS_AS(StaticPartition::Build(deg, 0), UsageError);
}

TEST_CASE("partition ranges tile the arcs with sizes within one") {
  std::mt19937 rng(5);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<std::uint32_t> deg(rng() % 40);
    for (auto &d : deg) d = rng() % 6;  // zero degrees included
    const unsigned P = 1 + rng() % 9;
    const StaticPartition p = StaticPartition::Build(deg, P);
    std::uint64_t next = 0, lo = ~0ull, hi = 0;
    for (const auto &r : p.ranges()) {
      CHECK(r.begin == next);
      next = r.end;
      lo = std::min(lo, r.size());
      hi = std::max(hi, r.size());
    }
    CHECK(next == p.total_arcs());
    CHECK(hi - lo <= 1);
    for (std::uint64_t g = 0; g < p.total_arcs(); ++g) {
      const auto loc = p.Locate(g);
      CHECK(loc.offset < deg[loc.token]);
      CHECK(p.prefix()[loc.token] + loc.offset == g);
    }
  }
}

TEST_CASE("both schedulers visit every arc exactly once") {
  std::mt19937 rng(9);
  for (unsigned workers : {1u, 3u, 8u}) {
    ThreadPool pool(workers);
    for (SchedulerKind kind : {SchedulerKind::kStatic, SchedulerKind::kDynamic}) {
      std::vector<std::uint32_t> deg(50);
      for (auto &d : deg) d = rng() % 70;
      std::vector<std::atomic<int>> seen(50 * 70);
      for (auto &s : seen) s.store(0);
      DistributeArcs(pool, kind, 50, 4, [&](std::uint32_t i) { return deg[i]; },
                     [&](unsigned w, std::uint32_t tok, std::uint32_t b, std::uint32_t e) {
                       CHECK(w < workers);
                       for (std::uint32_t k = b; k < e; ++k) seen[tok * 70 + k]++;
                     });
      for (std::uint32_t t = 0; t < 50; ++t)
        for (std::uint32_t k = 0; k < 70; ++k)
          CHECK(seen[t * 70 + k].load() == (k < deg[t] ? 1 : 0));
    }
  }
}

TEST_CASE("scheduler names") {
  CHECK(ParseSchedulerKind("static") == SchedulerKind::kStatic);
  CHECK(ParseSchedulerKind("dynamic") == SchedulerKind::kDynamic);
  CHECK(ToString(SchedulerKind::kStatic) == "static");
  CHECK_THROWS_AS(ParseSchedulerKind("greedy"), UsageError);
}

TEST_CASE("thread pool runs every worker and propagates errors") {
  ThreadPool pool(4);
  std::atomic<int> mask{0};
  pool.Run([&](unsigned w) { mask |= 1 << w; });
  CHECK(mask.load() == 0xF);
  CHECK_THROWS_AS(pool.Run([](unsigned w) {
                    if (w == 2) throw std::runtime_error("boom");
                  }),
                  std::runtime_error);
  std::atomic<int> count{0};
  for (int i = 0; i < 100; ++i) pool.Run([&](unsigned) { ++count; });
  CHECK(count.load() == 400);
}

}  // TEST_SUITE

TEST_SUITE("sharded_store") {

TEST_CASE("concurrent pushes lose nothing and alias no slots") {
  constexpr int kWorkers = 8, kPerWorker = 12500;
  ShardedArcStore<std::uint64_t> store(32, kWorkers * kPerWorker);
  std::vector<std::thread> threads;
  for (int w = 0; w < kWorkers; ++w)
    threads.emplace_back([&, w] {
      for (int i = 0; i < kPerWorker; ++i)
        store.Push(static_cast<std::uint64_t>(w) * kPerWorker + i, w);
    });
  for (auto &t : threads) t.join();
  auto all = store.CollectAll();
  CHECK(all.size() == kWorkers * kPerWorker);
  std::sort(all.begin(), all.end());
  for (std::size_t i = 0; i < all.size(); ++i) CHECK(all[i] == i);
}

TEST_CASE("boundaries split collections") {
  ShardedArcStore<int> store(2, 10);
  store.Push(1, 0);
  store.Push(2, 1);
  store.MarkBoundary();
  store.Push(3, 0);
  store.MarkBoundary();
  CHECK(store.Collect(0, 1) == std::vector<int>{1, 2});
  CHECK(store.Collect(1, 2) == std::vector<int>{3});
  CHECK(store.Collect(0, 2) == std::vector<int>{1, 3, 2});
  CHECK_THROWS_AS(store.Collect(2, 1), UsageError);
  store.Clear();
  CHECK(store.size() == 0);
}

TEST_CASE("a full shard reports a capacity error") {
  ShardedArcStore<int> store(1, 2);
  store.Push(1, 0);
  store.Push(2, 5);
  CHECK_THROWS_AS(store.Push(3, 0), CapacityError);
  CHECK(store.size() == 2);
  CHECK_THROWS_AS(ShardedArcStore<int>(0, 4), UsageError);
}

}  // TEST_SUITE

}  // namespace
}  // namespace pvd
