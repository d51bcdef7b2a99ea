// include/pvd/thread_pool.h

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

#ifndef PVD_THREAD_POOL_H_
#define PVD_THREAD_POOL_H_

#include <condition_variable>
#include <exception>
#include <cstdint>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace pvd {

// Fixed-size pool running one data-parallel job at a time. Run(job) invokes
// job(worker) once for every worker in [0, size()) and returns when all have
// finished; the calling thread acts as worker 0. Run is not reentrant and
// must be called from one thread at a time.
class ThreadPool {
 public:
  explicit ThreadPool(unsigned num_workers);
  ~ThreadPool();

  ThreadPool(const ThreadPool &) = delete;
  ThreadPool &operator=(const ThreadPool &) = delete;

  unsigned size() const { return num_workers_; }

  // If a worker throws, the first exception is rethrown here after every
  // worker has returned.
  void Run(const std::function<void(unsigned)> &job);

 private:
  void WorkerLoop(unsigned worker);

  unsigned num_workers_;
  std::vector<std::thread> threads_;
  std::mutex mu_;
  std::condition_variable start_cv_;
  std::condition_variable done_cv_;
  const std::function<void(unsigned)> *job_ = nullptr;
  std::uint64_t generation_ = 0;
  unsigned pending_ = 0;
  bool stop_ = false;
  std::exception_ptr error_;
};

}  // namespace pvd

#endif  // PVD_THREAD_POOL_H_
